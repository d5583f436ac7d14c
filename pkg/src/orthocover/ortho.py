"""Epsilon-orthographic regions of curves and surfaces, and their approximations.

A surface point ``P1`` belongs to the region around ``P0`` (imaged from
height ``d`` along the normal at ``P0``) when both hold:

* ``theta = atan(|P1 - P0|_xy / d) <= eps``: it is inside the field of view;
* ``phi = angle(n(P0), n(P1)) <= eps``: its normal has not turned too far.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .diffgeo import curve_derivatives, gaussian_curvature
from .terrain import OutOfBoundsError, SurfaceModel

__all__ = [
    "OrthoParams",
    "MaskRegion",
    "PolygonRegion",
    "EllipseRegion",
    "CircleRegion",
    "RegionBoundary",
    "normal_angle",
    "curve_ortho_bounds",
    "pair_gen",
    "surface_ortho_region",
    "approx_polygonal",
    "approx_elliptical",
    "approx_circular_avg",
    "radius_from_curvature",
    "approx_radius_curvature",
    "region",
    "REGION_MODES",
]

# relative slack on the angle tests so points exactly on the FOV cap survive rounding
_ANGLE_SLACK = 1e-12


@dataclass(frozen=True)
class OrthoParams:
    """Imaging parameters.  ``eps`` is in radians."""

    d: float
    eps: float
    dx: float = 0.01
    dy: Optional[float] = None
    m: float = 5.0

    def __post_init__(self):
        if self.dy is None:
            object.__setattr__(self, "dy", self.dx)
        if not self.d > 0:
            raise ValueError("imaging height d must be positive")
        if not 0 < self.eps < math.pi / 2:
            raise ValueError("eps must lie in (0, pi/2) radians")
        if not (self.dx > 0 and self.dy > 0):
            raise ValueError("march resolutions must be positive")
        if not self.m >= 1:
            raise ValueError("radius ratio m must be >= 1")

    @classmethod
    def from_degrees(cls, d: float, eps_deg: float, dx: float = 0.01, dy: Optional[float] = None,
                     m: float = 5.0) -> "OrthoParams":
        return cls(d, math.radians(eps_deg), dx, dy, m)

    @property
    def R(self) -> float:
        """Radius of the field-of-view disk, ``d * tan(eps)``."""
        return self.d * math.tan(self.eps)

    def to_dict(self) -> dict:
        return {"d": self.d, "eps": self.eps, "eps_deg": math.degrees(self.eps),
                "dx": self.dx, "dy": self.dy, "m": self.m}


# --- region representations -------------------------------------------------

@dataclass(frozen=True)
class MaskRegion:
    """Accepted lattice points ``center + (i*dx, j*dy)``, stored as integer offsets."""

    center: tuple
    dx: float
    dy: float
    offsets: np.ndarray
    kind: str = "mask"

    @property
    def cell_count(self) -> int:
        return len(self.offsets)

    @property
    def points(self) -> np.ndarray:
        return np.asarray(self.center) + self.offsets * np.array([self.dx, self.dy])

    @property
    def half_extent(self) -> int:
        return int(np.abs(self.offsets).max()) if len(self.offsets) else 0

    @property
    def mask(self) -> np.ndarray:
        """Boolean grid indexed ``[j + n, i + n]`` (rows along y), ``n = half_extent``."""
        n = self.half_extent
        grid = np.zeros((2 * n + 1, 2 * n + 1), dtype=bool)
        grid[self.offsets[:, 1] + n, self.offsets[:, 0] + n] = True
        return grid

    def contains_offset(self, i: int, j: int) -> bool:
        return bool(np.any((self.offsets[:, 0] == i) & (self.offsets[:, 1] == j)))

    def to_dict(self) -> dict:
        n = self.half_extent
        return {"kind": self.kind, "center": list(map(float, self.center)), "dx": self.dx,
                "dy": self.dy, "rows": 2 * n + 1, "cols": 2 * n + 1, "origin_offset": [-n, -n],
                "cell_count": self.cell_count,
                "mask": [int(v) for v in self.mask.ravel()]}


@dataclass(frozen=True)
class PolygonRegion:
    center: tuple
    vertices: np.ndarray
    kind: str = "polygon"

    @property
    def distances(self) -> np.ndarray:
        return np.hypot(*(self.vertices - np.asarray(self.center)).T)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "center": list(map(float, self.center)),
                "vertices": [[float(a), float(b)] for a, b in self.vertices]}


@dataclass(frozen=True)
class EllipseRegion:
    """Ellipse with full axis lengths ``major >= minor``; ``angle`` orients the major axis."""

    center: tuple
    major: float
    minor: float
    angle: float
    kind: str = "ellipse"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "center": list(map(float, self.center)), "major": self.major,
                "minor": self.minor, "angle": self.angle}


@dataclass(frozen=True)
class CircleRegion:
    center: tuple
    radius: float
    kind: str = "circle"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "center": list(map(float, self.center)), "radius": self.radius}


RegionBoundary = Union[MaskRegion, PolygonRegion, EllipseRegion, CircleRegion]


# --- angle tests ------------------------------------------------------------

def normal_angle(p0, q0, p, q):
    """Angle between the normals of gradients ``(p0, q0)`` and ``(p, q)``."""
    c = (p0 * p + q0 * q + 1.0) / (np.sqrt(p0 * p0 + q0 * q0 + 1.0) * np.sqrt(p * p + q * q + 1.0))
    return np.arccos(np.clip(c, -1.0, 1.0))


def _within(angle, eps):
    return angle <= eps * (1.0 + _ANGLE_SLACK)


def curve_ortho_bounds(f: Callable, x0: float, params: OrthoParams, domain=None,
                       linearized: bool = False) -> tuple[float, float]:
    """Left and right ends of the orthographic interval around ``x0``.

    Marches outward in steps of ``params.dx`` and keeps the last sample whose
    FOV angle and normal-turn angle are both within ``eps``.  With
    ``linearized`` the slope at each sample is extrapolated from ``f''(x0)``.
    """
    lo, hi = (-np.inf, np.inf) if domain is None else domain
    if not lo <= x0 <= hi:
        raise OutOfBoundsError(f"x0={x0} outside domain {domain}")
    p0, f2 = (float(v) for v in curve_derivatives(f, x0))
    dx, d, eps = params.dx, params.d, params.eps
    # theta alone caps the march
    max_steps = int(math.floor(params.R / dx)) + 2

    def march(sign):
        last = x0
        for k in range(1, max_steps + 1):
            x = x0 + sign * k * dx
            if not lo <= x <= hi:
                break
            if linearized:
                p = p0 + sign * k * dx * f2
            else:
                p = float(curve_derivatives(f, x)[0])
            phi = normal_angle(p0, 0.0, p, 0.0)
            theta = math.atan(k * dx / d)
            if not (_within(phi, eps) and _within(theta, eps)):
                break
            last = x
        return last

    return march(-1), march(+1)


def pair_gen(n: int) -> list[tuple[int, int]]:
    """All integer pairs with ``|a| + |b| = n``, counter-clockwise from ``(n, 0)``."""
    if int(n) != n or n < 1:
        raise ValueError(f"ring index must be a positive integer, got {n}")
    n = int(n)
    out = [(n - i, i) for i in range(n)]
    out += [(-i, n - i) for i in range(n)]
    out += [(-(n - i), -i) for i in range(n)]
    out += [(i, -(n - i)) for i in range(n)]
    return out


def _accept(model, p0, q0, H0, x0, y0, x, y, params, linearized):
    inside = model.bounds.contains(x, y)
    ok = np.zeros(np.shape(x), dtype=bool)
    if not inside.any():
        return ok
    xs, ys = x[inside], y[inside]
    ddx, ddy = xs - x0, ys - y0
    if linearized:
        fxx, fxy, fyy = H0
        p = p0 + fxx * ddx + fxy * ddy
        q = q0 + fxy * ddx + fyy * ddy
    else:
        p, q = model.gradient(xs, ys)
    phi = normal_angle(p0, q0, p, q)
    theta = np.arctan(np.hypot(ddx, ddy) / params.d)
    ok[inside] = _within(phi, params.eps) & _within(theta, params.eps)
    return ok


def _center_terms(model, p0):
    x0, y0 = map(float, p0)
    if not model.bounds.contains(x0, y0):
        raise OutOfBoundsError(f"center {p0} outside bounds {model.bounds.to_list()}")
    pg, qg = model.gradient(x0, y0)
    H0 = tuple(float(v) for v in model.hessian(x0, y0))
    return x0, y0, float(pg), float(qg), H0


def surface_ortho_region(model: SurfaceModel, p0, params: OrthoParams,
                         linearized: bool = False, max_empty_rings: int = 3) -> MaskRegion:
    """Exact region around ``p0`` on the ``(dx, dy)`` lattice, grown ring by ring.

    Rings are the L1 shells of :func:`pair_gen`.  Growth stops once more than
    ``max_empty_rings`` consecutive rings contribute no point, or the rings
    exhaust the bounds.
    """
    x0, y0, pc, qc, H0 = _center_terms(model, p0)
    b = model.bounds
    s = int(math.ceil(max(b.width / params.dx, b.height / params.dy)))
    accepted = [np.zeros((1, 2), dtype=int)]
    empty = 0
    for n in range(1, s + 1):
        ring = np.asarray(pair_gen(n), dtype=int)
        x = x0 + params.dx * ring[:, 0]
        y = y0 + params.dy * ring[:, 1]
        ok = _accept(model, pc, qc, H0, x0, y0, x, y, params, linearized)
        if ok.any():
            accepted.append(ring[ok])
            empty = 0
        else:
            empty += 1
            if empty > max_empty_rings:
                break
    return MaskRegion((x0, y0), params.dx, params.dy, np.concatenate(accepted))


def approx_polygonal(model: SurfaceModel, p0, params: OrthoParams, N: int = 16,
                     linearized: bool = False) -> PolygonRegion:
    """Boundary points along ``N`` equiangular rays from ``p0``.

    Each ray advances in steps of ``min(dx, dy)``; its vertex is the last
    point passing both angle tests (``p0`` itself if none does).
    """
    if int(N) != N or N < 3:
        raise ValueError(f"polygon needs N >= 3 directions, got {N}")
    N = int(N)
    x0, y0, pc, qc, H0 = _center_terms(model, p0)
    h = min(params.dx, params.dy)
    ang = 2 * np.pi * np.arange(N) / N
    ux, uy = np.cos(ang), np.sin(ang)
    last = np.zeros(N)
    alive = np.ones(N, dtype=bool)
    max_steps = int(math.floor(params.R / h)) + 2
    for k in range(1, max_steps + 1):
        if not alive.any():
            break
        t = k * h
        idx = np.flatnonzero(alive)
        ok = _accept(model, pc, qc, H0, x0, y0, x0 + t * ux[idx], y0 + t * uy[idx], params, linearized)
        last[idx[ok]] = t
        alive[idx[~ok]] = False
    verts = np.column_stack([x0 + last * ux, y0 + last * uy])
    return PolygonRegion((x0, y0), verts)


def approx_elliptical(polygon: PolygonRegion) -> EllipseRegion:
    """Ellipse whose major axis is the polygon's longest opposite-vertex diagonal.

    The minor axis length is the shortest diagonal.  The ellipse is centred on
    the midpoint of the longest diagonal, which need not be the query point.
    """
    V = np.asarray(polygon.vertices, dtype=float)
    N = len(V)
    if N < 4 or N % 2:
        raise ValueError(f"elliptical approximation needs an even N >= 4, got {N}")
    half = N // 2
    diag = V[half:] - V[:half]
    lengths = np.hypot(diag[:, 0], diag[:, 1])
    i_max = int(np.argmax(lengths))
    i_min = int(np.argmin(lengths))
    center = 0.5 * (V[i_max] + V[i_max + half])
    angle = math.atan2(diag[i_max, 1], diag[i_max, 0]) % math.pi
    return EllipseRegion((float(center[0]), float(center[1])), float(lengths[i_max]),
                         float(lengths[i_min]), angle)


def approx_circular_avg(polygon: PolygonRegion, center=None) -> CircleRegion:
    """Circle at ``center`` (default: the polygon's query point) with the mean vertex distance."""
    c = polygon.center if center is None else tuple(map(float, center))
    V = np.asarray(polygon.vertices, dtype=float)
    if len(V) < 3:
        raise ValueError("need at least 3 vertices")
    r = float(np.mean(np.hypot(V[:, 0] - c[0], V[:, 1] - c[1])))
    return CircleRegion(c, r)


def radius_from_curvature(K, R: float, Kmax: float, m: float = 5.0):
    """``R - |K|/Kmax * R * (1 - 1/m)``; ``R`` everywhere when ``Kmax == 0``."""
    K = np.abs(np.asarray(K, dtype=float))
    if Kmax <= 0:
        r = np.full(K.shape, float(R))
    else:
        ratio = np.minimum(K / Kmax, 1.0)
        r = R - ratio * R * (1.0 - 1.0 / m)
    return float(r) if r.ndim == 0 else r


def approx_radius_curvature(model: SurfaceModel, p, params: OrthoParams, Kmax: float):
    """Curvature-attenuated circle radius at ``p`` (scalar point or arrays ``(x, y)``)."""
    if Kmax < 0:
        raise ValueError("Kmax must be non-negative")
    x, y = p
    K = gaussian_curvature(model, x, y)
    return radius_from_curvature(K, params.R, Kmax, params.m)


REGION_MODES = ("exact", "polygonal", "elliptical", "circular-avg", "circular-curvature")


def region(model: SurfaceModel, p0, params: OrthoParams, mode: str = "exact", N: int = 16,
           Kmax: Optional[float] = None, linearized: bool = False) -> RegionBoundary:
    """Compute the region around ``p0`` in one of :data:`REGION_MODES`."""
    if mode == "exact":
        return surface_ortho_region(model, p0, params, linearized=linearized)
    if mode == "polygonal":
        return approx_polygonal(model, p0, params, N, linearized=linearized)
    if mode == "elliptical":
        return approx_elliptical(approx_polygonal(model, p0, params, N, linearized=linearized))
    if mode == "circular-avg":
        return approx_circular_avg(approx_polygonal(model, p0, params, N, linearized=linearized))
    if mode == "circular-curvature":
        from .diffgeo import max_abs_gaussian_curvature

        if Kmax is None:
            Kmax = max_abs_gaussian_curvature(model)
        x0, y0 = map(float, p0)
        if not model.bounds.contains(x0, y0):
            raise OutOfBoundsError(f"center {p0} outside bounds")
        return CircleRegion((x0, y0), float(approx_radius_curvature(model, (x0, y0), params, Kmax)))
    raise ValueError(f"unknown region mode {mode!r}; choose from {REGION_MODES}")
