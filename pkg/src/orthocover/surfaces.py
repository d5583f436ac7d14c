"""Built-in analytic test surfaces and 1D test curves."""
from __future__ import annotations

from typing import Callable

import numpy as np

from .expr import compile_expression
from .terrain import AnalyticSurface, Bounds, SurfaceModel

__all__ = [
    "cos_sum",
    "cos_sq_sum",
    "plane",
    "sphere",
    "paraboloid",
    "pseudosphere",
    "xy_cos",
    "from_expression",
    "builtin",
    "BUILTINS",
    "abs_line",
]


def _bounds(low, high) -> Bounds:
    return Bounds.square(low, high)


def cos_sum(low: float = -5.0, high: float = 5.0) -> SurfaceModel:
    """``cos(x) + cos(y)``."""
    return SurfaceModel(AnalyticSurface(
        f=lambda x, y: np.cos(x) + np.cos(y),
        bounds=_bounds(low, high),
        fx=lambda x, y: -np.sin(x) + 0 * y,
        fy=lambda x, y: -np.sin(y) + 0 * x,
        fxx=lambda x, y: -np.cos(x) + 0 * y,
        fxy=lambda x, y: 0 * x * y,
        fyy=lambda x, y: -np.cos(y) + 0 * x,
        name="cos_sum",
        params={"low": low, "high": high},
    ))


def cos_sq_sum(low: float = -2.0, high: float = 2.0) -> SurfaceModel:
    """``cos(x)^2 + cos(y)^2``."""
    return SurfaceModel(AnalyticSurface(
        f=lambda x, y: np.cos(x) ** 2 + np.cos(y) ** 2,
        bounds=_bounds(low, high),
        fx=lambda x, y: -np.sin(2 * x) + 0 * y,
        fy=lambda x, y: -np.sin(2 * y) + 0 * x,
        fxx=lambda x, y: -2 * np.cos(2 * x) + 0 * y,
        fxy=lambda x, y: 0 * x * y,
        fyy=lambda x, y: -2 * np.cos(2 * y) + 0 * x,
        name="cos_sq_sum",
        params={"low": low, "high": high},
    ))


def plane(low: float = -5.0, high: float = 5.0, a: float = 0.0, b: float = 0.0, c: float = 0.0) -> SurfaceModel:
    """``a*x + b*y + c``."""
    return SurfaceModel(AnalyticSurface(
        f=lambda x, y: a * x + b * y + c,
        bounds=_bounds(low, high),
        fx=lambda x, y: a + 0 * x * y,
        fy=lambda x, y: b + 0 * x * y,
        fxx=lambda x, y: 0 * x * y,
        fxy=lambda x, y: 0 * x * y,
        fyy=lambda x, y: 0 * x * y,
        name="plane",
        params={"low": low, "high": high, "a": a, "b": b, "c": c},
    ))


def sphere(a: float = 2.0, half_width: float = 1.0) -> SurfaceModel:
    """Upper hemisphere ``z = sqrt(a^2 - x^2 - y^2)`` over ``[-half_width, half_width]^2``."""
    if not half_width * np.sqrt(2) < a:
        raise ValueError("bounds must lie strictly inside the sphere's disk")

    def z(x, y):
        return np.sqrt(a * a - x * x - y * y)

    return SurfaceModel(AnalyticSurface(
        f=z,
        bounds=_bounds(-half_width, half_width),
        fx=lambda x, y: -x / z(x, y),
        fy=lambda x, y: -y / z(x, y),
        fxx=lambda x, y: -(a * a - y * y) / z(x, y) ** 3,
        fxy=lambda x, y: -x * y / z(x, y) ** 3,
        fyy=lambda x, y: -(a * a - x * x) / z(x, y) ** 3,
        name="sphere",
        params={"a": a, "half_width": half_width},
    ))


def paraboloid(c: float = 0.5, low: float = -2.0, high: float = 2.0) -> SurfaceModel:
    """``c * (x^2 + y^2)``."""
    return SurfaceModel(AnalyticSurface(
        f=lambda x, y: c * (x * x + y * y),
        bounds=_bounds(low, high),
        fx=lambda x, y: 2 * c * x + 0 * y,
        fy=lambda x, y: 2 * c * y + 0 * x,
        fxx=lambda x, y: 2 * c + 0 * x * y,
        fxy=lambda x, y: 0 * x * y,
        fyy=lambda x, y: 2 * c + 0 * x * y,
        name="paraboloid",
        params={"c": c, "low": low, "high": high},
    ))


def pseudosphere(a: float = 1.0, low: float = 0.2, high: float = 0.6) -> SurfaceModel:
    """Tractricoid ``z = a*arcsech(rho/a) - sqrt(a^2 - rho^2)``, ``rho = sqrt(x^2 + y^2)``.

    Gaussian curvature is ``-1/a^2`` everywhere.  The bounds rectangle must
    keep ``0 < rho < a``.
    """
    corners = np.array([[low, low], [low, high], [high, low], [high, high]])
    rho = np.hypot(corners[:, 0], corners[:, 1])
    if low <= 0 or rho.max() >= a:
        raise ValueError("pseudosphere bounds must satisfy 0 < rho < a on the whole rectangle")

    def _rho(x, y):
        return np.hypot(x, y)

    def z(x, y):
        r = _rho(x, y)
        u = r / a
        return a * np.log((1 + np.sqrt(1 - u * u)) / u) - np.sqrt(a * a - r * r)

    def g1(r):
        # dz/drho
        return -np.sqrt(a * a - r * r) / r

    def g2(r):
        # d2z/drho2
        return a * a / (r * r * np.sqrt(a * a - r * r))

    def fx(x, y):
        r = _rho(x, y)
        return g1(r) * x / r

    def fy(x, y):
        r = _rho(x, y)
        return g1(r) * y / r

    def fxx(x, y):
        r = _rho(x, y)
        return g2(r) * x * x / r**2 + g1(r) * y * y / r**3

    def fxy(x, y):
        r = _rho(x, y)
        return (g2(r) - g1(r) / r) * x * y / r**2

    def fyy(x, y):
        r = _rho(x, y)
        return g2(r) * y * y / r**2 + g1(r) * x * x / r**3

    return SurfaceModel(AnalyticSurface(
        f=z, bounds=_bounds(low, high), fx=fx, fy=fy, fxx=fxx, fxy=fxy, fyy=fyy,
        name="pseudosphere", params={"a": a, "low": low, "high": high},
    ))


def xy_cos(low: float = -5.0, high: float = 5.0) -> SurfaceModel:
    """``x * y * cos(x)``; partials by finite differences."""
    return SurfaceModel(AnalyticSurface(
        f=lambda x, y: x * y * np.cos(x),
        bounds=_bounds(low, high),
        name="xy_cos",
        params={"low": low, "high": high},
    ))


def from_expression(expression: str, low: float = -5.0, high: float = 5.0) -> SurfaceModel:
    f = compile_expression(expression)
    return SurfaceModel(AnalyticSurface(
        f=f, bounds=_bounds(low, high), name=expression,
        params={"expression": expression, "low": low, "high": high},
    ))


BUILTINS: dict[str, Callable[..., SurfaceModel]] = {
    "cos_sum": cos_sum,
    "cos_sq_sum": cos_sq_sum,
    "plane": plane,
    "sphere": sphere,
    "paraboloid": paraboloid,
    "pseudosphere": pseudosphere,
    "xy_cos": xy_cos,
}


def builtin(name: str, **params) -> SurfaceModel:
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown surface {name!r}; choose from {sorted(BUILTINS)}") from None
    return factory(**params)


def abs_line(m: float) -> Callable:
    """The kinked curve ``g(m, x) = |m x|``."""
    if m <= 0:
        raise ValueError("m must be positive")
    return lambda x: np.abs(m * np.asarray(x, dtype=float))
