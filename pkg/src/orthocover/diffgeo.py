"""Curvature, imaging surfaces/curves and the 1D imaging-height bound."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .terrain import SurfaceModel, fd_step

__all__ = [
    "gaussian_curvature",
    "mean_curvature",
    "curve_curvature",
    "curve_derivatives",
    "CurvatureField",
    "curvature_field",
    "max_abs_gaussian_curvature",
    "ImagingSurface",
    "imaging_surface",
    "ImagingCurve",
    "imaging_curve",
    "HeightBound",
    "max_valid_height_1d",
]


def _point_args(point_or_x, y=None):
    if y is None:
        x, y = point_or_x
        return x, y
    return point_or_x, y


def gaussian_curvature(model: SurfaceModel, x, y=None):
    """``K = (fxx*fyy - fxy^2) / (1 + fx^2 + fy^2)^2``; accepts a point or arrays."""
    x, y = _point_args(x, y)
    p, q = model.gradient(x, y)
    fxx, fxy, fyy = model.hessian(x, y)
    K = (fxx * fyy - fxy**2) / (1.0 + p * p + q * q) ** 2
    return float(K) if np.ndim(K) == 0 else K


def mean_curvature(model: SurfaceModel, x, y=None):
    """Mean of the principal curvatures (positive where the graph is convex)."""
    x, y = _point_args(x, y)
    p, q = model.gradient(x, y)
    fxx, fxy, fyy = model.hessian(x, y)
    num = (1 + p * p) * fyy + (1 + q * q) * fxx - 2 * p * q * fxy
    H = 0.5 * num / (1.0 + p * p + q * q) ** 1.5
    return float(H) if np.ndim(H) == 0 else H


def curve_derivatives(f: Callable, x):
    """Central-difference ``f'`` and ``f''`` of a univariate function.

    At a kink the central difference is the average of the one-sided slopes.
    """
    x = np.asarray(x, dtype=float)
    h1 = fd_step(x)
    d1 = (f(x + h1) - f(x - h1)) / (2 * h1)
    h2 = 1e-4 * np.maximum(1.0, np.abs(x))
    d2 = (f(x + h2) - 2 * f(x) + f(x - h2)) / h2**2
    return d1, d2


def curve_curvature(f: Callable, x):
    """Unsigned curvature ``|f''| / (1 + f'^2)^(3/2)`` of the graph of ``f``."""
    d1, d2 = curve_derivatives(f, x)
    k = np.abs(d2) / (1 + d1 * d1) ** 1.5
    return float(k) if np.ndim(k) == 0 else k


@dataclass(frozen=True)
class CurvatureField:
    x: np.ndarray
    y: np.ndarray
    K: np.ndarray
    H: np.ndarray

    @property
    def Kmax(self) -> float:
        return float(np.max(np.abs(self.K)))


def curvature_field(model: SurfaceModel, grid_res: int = 201) -> CurvatureField:
    X, Y = model.bounds.grid(grid_res)
    return CurvatureField(X, Y, gaussian_curvature(model, X, Y), mean_curvature(model, X, Y))


def max_abs_gaussian_curvature(model: SurfaceModel, grid_res: int = 201) -> float:
    """``max |K|`` over a uniform ``grid_res x grid_res`` sample of the bounds."""
    X, Y = model.bounds.grid(grid_res)
    return float(np.max(np.abs(gaussian_curvature(model, X, Y))))


def _validity_slack(z):
    return 1e-9 * np.maximum(1.0, np.abs(z))


@dataclass(frozen=True)
class ImagingSurface:
    """Points offset by ``d`` along the upward normal from a grid of surface samples."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    points: np.ndarray  # (..., 3): x', y', z'
    valid: np.ndarray
    d: float


def imaging_surface(model: SurfaceModel, d: float, grid_res: int = 101) -> ImagingSurface:
    """Offset surface at height ``d``; a point is invalid when it sits below the terrain.

    Terrain elevation under an offset point that leaves the bounds is taken
    from :meth:`SurfaceModel.elevation_extended`.
    """
    if not d > 0:
        raise ValueError(f"imaging height must be positive, got {d}")
    X, Y = model.bounds.grid(grid_res)
    Z = model.elevation(X, Y)
    n = model.normal(X, Y)
    pts = np.stack([X, Y, Z], axis=-1) + d * n
    ground = model.elevation_extended(pts[..., 0], pts[..., 1])
    valid = pts[..., 2] >= ground - _validity_slack(pts[..., 2])
    return ImagingSurface(X, Y, Z, pts, valid, float(d))


@dataclass(frozen=True)
class ImagingCurve:
    x: np.ndarray
    y: np.ndarray
    xp: np.ndarray
    yp: np.ndarray
    valid: np.ndarray
    d: float

    @property
    def all_valid(self) -> bool:
        return bool(self.valid.all())


def imaging_curve(f: Callable, d: float, domain=(-2.0, 2.0), res: int = 2001) -> ImagingCurve:
    """Imaging curve of ``y = f(x)`` at height ``d`` on ``res`` samples of ``domain``."""
    if not d > 0:
        raise ValueError(f"imaging height must be positive, got {d}")
    a, b = domain
    x = np.linspace(a, b, int(res))
    y = np.asarray(f(x), dtype=float)
    slope, _ = curve_derivatives(f, x)
    s = np.sqrt(1 + slope * slope)
    xp = x - d * slope / s
    yp = y + d / s
    valid = yp >= np.asarray(f(xp), dtype=float) - _validity_slack(yp)
    return ImagingCurve(x, y, xp, yp, valid, float(d))


@dataclass
class HeightBound:
    """Result of the height-bound search.

    ``value`` is ``inf`` when no invalid imaging point exists at the cap.
    ``brackets`` records ``(L, U)`` after every bisection step.
    """

    bounded: bool
    value: float
    tol: float
    cap: float
    brackets: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"bounded": self.bounded, "D": self.value if self.bounded else None,
                "tol": self.tol, "cap": self.cap, "iterations": len(self.brackets)}


def max_valid_height_1d(f: Callable, domain=(-2.0, 2.0), tol: float = 1e-3, U_cap: float = 100.0,
                        res: int = 2001) -> HeightBound:
    """Largest imaging height whose imaging curve stays above ``f``, by bisection.

    The existence of a crossing at height ``d`` is decided on at least
    ``res`` samples of ``domain``, refined so the spacing stays below ``d/10``
    (up to a million samples); invalid pockets near a kink shrink with ``d``.
    Returns ``value = 0`` when every tested ``d > 0`` is invalid.
    """
    if not tol > 0 or not U_cap > 0:
        raise ValueError("tol and U_cap must be positive")
    x = np.linspace(domain[0], domain[1], int(res))
    if not np.isfinite(np.asarray(f(x), dtype=float)).all():
        raise ValueError("f is not finite on the domain")

    width = float(domain[1] - domain[0])

    def crosses(d):
        n = max(int(res), min(int(math.ceil(10 * width / d)) + 1, 1_000_000))
        return not imaging_curve(f, d, domain, n).all_valid

    if not crosses(U_cap):
        return HeightBound(False, float("inf"), tol, U_cap)
    lo, hi = 0.0, float(U_cap)
    brackets = []
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if crosses(mid):
            hi = mid
        else:
            lo = mid
        brackets.append((lo, hi))
    value = 0.0 if lo == 0.0 else 0.5 * (lo + hi)
    return HeightBound(True, value, tol, U_cap, brackets)
