"""Heightfields, analytic surfaces and the unified surface-query interface.

Every surface is addressed in world coordinates ``(x, y)``.  A heightfield
maps column ``j`` to ``x = x0 + j * dx`` and row ``i`` to ``y = y0 + i * dy``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy import ndimage

__all__ = [
    "Bounds",
    "OutOfBoundsError",
    "HeightField",
    "AnalyticSurface",
    "SurfaceModel",
    "SurfaceSample",
    "mean_smooth",
    "numerical_gradient",
    "surface_query",
    "unit_normal",
    "fd_step",
]

_BOUNDS_SLACK = 1e-9


class OutOfBoundsError(ValueError):
    """Raised when a surface is queried outside its bounding rectangle."""


@dataclass(frozen=True)
class Bounds:
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def __post_init__(self):
        if not (np.isfinite([self.xmin, self.xmax, self.ymin, self.ymax]).all()):
            raise ValueError("bounds must be finite")
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError(f"empty bounds {self}")

    @classmethod
    def square(cls, low: float, high: float) -> "Bounds":
        return cls(float(low), float(high), float(low), float(high))

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def center(self) -> tuple[float, float]:
        return (0.5 * (self.xmin + self.xmax), 0.5 * (self.ymin + self.ymax))

    def contains(self, x, y, slack: float = _BOUNDS_SLACK):
        sx = slack * max(1.0, abs(self.xmin), abs(self.xmax))
        sy = slack * max(1.0, abs(self.ymin), abs(self.ymax))
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return (
            (x >= self.xmin - sx) & (x <= self.xmax + sx)
            & (y >= self.ymin - sy) & (y <= self.ymax + sy)
        )

    def clip(self, x, y):
        return (np.clip(x, self.xmin, self.xmax), np.clip(y, self.ymin, self.ymax))

    def grid(self, nx: int, ny: Optional[int] = None):
        """Node grid (inclusive of the edges), ``nx`` by ``ny`` samples."""
        ny = nx if ny is None else ny
        if nx < 2 or ny < 2:
            raise ValueError("grid resolution must be >= 2 per axis")
        xs = np.linspace(self.xmin, self.xmax, nx)
        ys = np.linspace(self.ymin, self.ymax, ny)
        return np.meshgrid(xs, ys)

    def cell_centers(self, nx: int, ny: Optional[int] = None):
        """Centers of an ``nx`` by ``ny`` raster covering the rectangle."""
        ny = nx if ny is None else ny
        hx = self.width / nx
        hy = self.height / ny
        xs = self.xmin + hx * (np.arange(nx) + 0.5)
        ys = self.ymin + hy * (np.arange(ny) + 0.5)
        X, Y = np.meshgrid(xs, ys)
        return X, Y, hx, hy

    def to_list(self) -> list[float]:
        return [self.xmin, self.xmax, self.ymin, self.ymax]

    @classmethod
    def from_list(cls, values) -> "Bounds":
        if len(values) == 2:
            return cls.square(*values)
        return cls(*map(float, values))


def _as_pair(value) -> tuple[float, float]:
    if np.ndim(value) == 0:
        return (float(value), float(value))
    a, b = value
    return (float(a), float(b))


@dataclass(frozen=True)
class HeightField:
    """Gridded elevations.  ``spacing`` is ``(dx, dy)``: column step, row step."""

    elevations: np.ndarray
    spacing: tuple[float, float] = (1.0, 1.0)
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        data = np.array(self.elevations, dtype=float, copy=True)
        if data.ndim != 2:
            raise ValueError("elevations must be a 2D grid")
        if data.shape[0] < 2 or data.shape[1] < 2:
            raise ValueError(f"heightfield needs at least 2x2 cells, got {data.shape}")
        if not np.isfinite(data).all():
            raise ValueError("elevations must be finite")
        spacing = _as_pair(self.spacing)
        if min(spacing) <= 0:
            raise ValueError("spacing must be positive")
        data.setflags(write=False)
        object.__setattr__(self, "elevations", data)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "origin", _as_pair(self.origin))

    @property
    def rows(self) -> int:
        return self.elevations.shape[0]

    @property
    def cols(self) -> int:
        return self.elevations.shape[1]

    @property
    def bounds(self) -> Bounds:
        x0, y0 = self.origin
        dx, dy = self.spacing
        return Bounds(x0, x0 + dx * (self.cols - 1), y0, y0 + dy * (self.rows - 1))

    @property
    def x(self) -> np.ndarray:
        return self.origin[0] + self.spacing[0] * np.arange(self.cols)

    @property
    def y(self) -> np.ndarray:
        return self.origin[1] + self.spacing[1] * np.arange(self.rows)

    def with_elevations(self, elevations) -> "HeightField":
        return HeightField(elevations, self.spacing, self.origin)


@dataclass(frozen=True)
class AnalyticSurface:
    """A surface ``z = f(x, y)`` over a rectangle.

    ``f`` and the optional partials must accept numpy arrays.  Missing
    partials fall back to central finite differences.
    """

    f: Callable
    bounds: Bounds
    fx: Optional[Callable] = None
    fy: Optional[Callable] = None
    fxx: Optional[Callable] = None
    fxy: Optional[Callable] = None
    fyy: Optional[Callable] = None
    name: str = "f"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.bounds, Bounds):
            object.__setattr__(self, "bounds", Bounds.from_list(self.bounds))
        X, Y = self.bounds.grid(5)
        if not np.isfinite(np.asarray(self.f(X, Y), dtype=float)).all():
            raise ValueError(f"surface {self.name!r} is not finite on its bounds")


def fd_step(v):
    """Relative central-difference step used for first derivatives."""
    return 1e-5 * np.maximum(1.0, np.abs(v))


def _fd_step2(v):
    # second differences lose ~eps/h^2; a wider step keeps the Hessian at ~1e-8
    return 1e-4 * np.maximum(1.0, np.abs(v))


def mean_smooth(field: HeightField, n: int = 17) -> HeightField:
    """Mean filter over an ``n x n`` window with replicate padding at the edges."""
    if int(n) != n or n < 1 or n % 2 == 0:
        raise ValueError(f"window size must be a positive odd integer, got {n}")
    out = ndimage.uniform_filter(field.elevations, size=int(n), mode="nearest")
    return field.with_elevations(out)


def numerical_gradient(field: HeightField) -> tuple[np.ndarray, np.ndarray]:
    """Central differences inside, one-sided differences on the edges.

    Returns ``(Gx, Gy)``: derivative along columns (x) and along rows (y),
    divided by the grid spacing.
    """
    dx, dy = field.spacing
    gy, gx = np.gradient(field.elevations, dy, dx, edge_order=1)
    return gx, gy


class SurfaceSample(NamedTuple):
    z: float
    p: float
    q: float
    hessian: np.ndarray


class SurfaceModel:
    """Queryable surface backed by a :class:`HeightField` or :class:`AnalyticSurface`.

    All accessors are vectorised over array inputs.  Queries outside the
    bounds raise :class:`OutOfBoundsError` unless ``check=False``.
    """

    def __init__(self, backing, bounds: Optional[Bounds] = None):
        if isinstance(backing, SurfaceModel):
            backing = backing.backing
        if not isinstance(backing, (HeightField, AnalyticSurface)):
            raise TypeError(f"unsupported surface backing {type(backing).__name__}")
        self.backing = backing
        self.bounds = bounds if bounds is not None else backing.bounds
        if isinstance(backing, HeightField):
            self._prepare_grid(backing)

    @property
    def is_analytic(self) -> bool:
        return isinstance(self.backing, AnalyticSurface)

    @property
    def name(self) -> str:
        return self.backing.name if self.is_analytic else "heightfield"

    def _prepare_grid(self, hf: HeightField):
        dx, dy = hf.spacing
        gx, gy = numerical_gradient(hf)
        gxy_a, gxx = np.gradient(gx, dy, dx, edge_order=1)
        gyy, gxy_b = np.gradient(gy, dy, dx, edge_order=1)
        self._grids = {
            "z": hf.elevations,
            "p": gx,
            "q": gy,
            "fxx": gxx,
            "fxy": 0.5 * (gxy_a + gxy_b),
            "fyy": gyy,
        }

    def _check(self, x, y):
        if not np.all(self.bounds.contains(x, y)):
            raise OutOfBoundsError(f"point(s) outside surface bounds {self.bounds.to_list()}")

    def _bilinear(self, key: str, x, y):
        hf = self.backing
        grid = self._grids[key]
        u = (np.asarray(x, dtype=float) - hf.origin[0]) / hf.spacing[0]
        v = (np.asarray(y, dtype=float) - hf.origin[1]) / hf.spacing[1]
        u = np.clip(u, 0.0, hf.cols - 1)
        v = np.clip(v, 0.0, hf.rows - 1)
        j0 = np.minimum(np.floor(u).astype(int), hf.cols - 2)
        i0 = np.minimum(np.floor(v).astype(int), hf.rows - 2)
        tu = u - j0
        tv = v - i0
        return (
            grid[i0, j0] * (1 - tu) * (1 - tv)
            + grid[i0, j0 + 1] * tu * (1 - tv)
            + grid[i0 + 1, j0] * (1 - tu) * tv
            + grid[i0 + 1, j0 + 1] * tu * tv
        )

    def elevation(self, x, y, check: bool = True):
        if check:
            self._check(x, y)
        if self.is_analytic:
            x = np.asarray(x, dtype=float)
            y = np.asarray(y, dtype=float)
            return np.asarray(self.backing.f(x, y), dtype=float) * np.ones(np.broadcast(x, y).shape)
        return self._bilinear("z", x, y)

    def elevation_extended(self, x, y):
        """Elevation anywhere in the plane.

        Analytic surfaces evaluate ``f`` directly; heightfields extend their
        edge values outward.
        """
        return self.elevation(x, y, check=False)

    def gradient(self, x, y, check: bool = True):
        """Return ``(p, q) = (df/dx, df/dy)``."""
        if check:
            self._check(x, y)
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if not self.is_analytic:
            return self._bilinear("p", x, y), self._bilinear("q", x, y)
        s = self.backing
        shape = np.broadcast(x, y).shape
        if s.fx is not None and s.fy is not None:
            return (np.asarray(s.fx(x, y), float) * np.ones(shape),
                    np.asarray(s.fy(x, y), float) * np.ones(shape))
        f = s.f
        hx = fd_step(x)
        hy = fd_step(y)
        p = (f(x + hx, y) - f(x - hx, y)) / (2 * hx)
        q = (f(x, y + hy) - f(x, y - hy)) / (2 * hy)
        return np.asarray(p, float) * np.ones(shape), np.asarray(q, float) * np.ones(shape)

    def hessian(self, x, y, check: bool = True):
        """Return ``(fxx, fxy, fyy)``."""
        if check:
            self._check(x, y)
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if not self.is_analytic:
            return tuple(self._bilinear(k, x, y) for k in ("fxx", "fxy", "fyy"))
        s = self.backing
        shape = np.broadcast(x, y).shape
        if s.fxx is not None and s.fxy is not None and s.fyy is not None:
            return tuple(np.asarray(g(x, y), float) * np.ones(shape) for g in (s.fxx, s.fxy, s.fyy))
        f = s.f
        hx = _fd_step2(x)
        hy = _fd_step2(y)
        f0 = f(x, y)
        fxx = (f(x + hx, y) - 2 * f0 + f(x - hx, y)) / hx**2
        fyy = (f(x, y + hy) - 2 * f0 + f(x, y - hy)) / hy**2
        fxy = (
            f(x + hx, y + hy) - f(x + hx, y - hy) - f(x - hx, y + hy) + f(x - hx, y - hy)
        ) / (4 * hx * hy)
        return tuple(np.asarray(g, float) * np.ones(shape) for g in (fxx, fxy, fyy))

    def normal(self, x, y, check: bool = True):
        """Upward unit normal ``[-p, -q, 1] / sqrt(p^2 + q^2 + 1)``, stacked on the last axis."""
        p, q = self.gradient(x, y, check=check)
        s = np.sqrt(p * p + q * q + 1.0)
        return np.stack([-p / s, -q / s, 1.0 / s], axis=-1)

    def query(self, point) -> SurfaceSample:
        x, y = map(float, point)
        z = float(self.elevation(x, y))
        p, q = self.gradient(x, y)
        fxx, fxy, fyy = self.hessian(x, y)
        H = np.array([[float(fxx), float(fxy)], [float(fxy), float(fyy)]])
        return SurfaceSample(z, float(p), float(q), H)

    def __repr__(self):
        return f"SurfaceModel({self.name}, bounds={self.bounds.to_list()})"


def surface_query(model: SurfaceModel, point) -> SurfaceSample:
    """Elevation, gradient and Hessian at a single point."""
    return model.query(point)


def unit_normal(model: SurfaceModel, point) -> np.ndarray:
    x, y = map(float, point)
    return model.normal(x, y)
