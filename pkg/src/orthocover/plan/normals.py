"""Density of surface-normal rays above a curve or surface.

Cells crossed by many normal rays mark places from which many surface
patches are seen head-on.  Suggested points are interior regional maxima
of the ray count; they are a heuristic only.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import ndimage

from ..diffgeo import curve_derivatives
from ..terrain import SurfaceModel

__all__ = ["NormalDensity", "normal_density_curve", "normal_density_surface", "normal_density_map"]


@dataclass
class NormalDensity:
    """Ray counts on a regular grid.

    ``counts`` is indexed ``[z, x]`` for curves and ``[z, y, x]`` for surfaces;
    ``axes`` holds the cell-center coordinates per axis in the order x, (y,) z.
    ``suggested`` rows are points ``(x, z)`` or ``(x, y, z)`` with their counts.
    """

    counts: np.ndarray
    axes: tuple
    suggested: np.ndarray
    suggested_counts: np.ndarray


def _cell_axis(lo, hi, n):
    h = (hi - lo) / n
    return lo + h * (np.arange(n) + 0.5), h


def _accumulate(origins, dirs, lows, steps, shape, length):
    """Count, per cell, the rays passing through it (each ray counted once per cell)."""
    ds = 0.5 * min(steps)
    t = np.arange(0.0, length + ds, ds)
    pts = origins[:, None, :] + t[None, :, None] * dirs[:, None, :]
    idx = np.floor((pts - np.asarray(lows)) / np.asarray(steps)).astype(np.int64)
    inside = np.all((idx >= 0) & (idx < np.asarray(shape)), axis=-1)
    flat = np.ravel_multi_index(tuple(np.moveaxis(np.clip(idx, 0, np.asarray(shape) - 1), -1, 0)), shape)
    ray = np.broadcast_to(np.arange(len(origins))[:, None], flat.shape)
    ncell = int(np.prod(shape))
    codes = np.unique(ray[inside] * ncell + flat[inside])
    return np.bincount(codes % ncell, minlength=ncell).reshape(shape)


def _regional_maxima(counts, top_k, min_ratio=2.0):
    """Interior plateaus of equal count strictly above every cell around them.

    Each plateau is reported once, at its mean index.  Plateaus touching the
    grid border are dropped, and so are peaks below ``min_ratio`` times the
    median nonzero count; together these remove the aliasing ripples left by
    parallel rays, where nothing converges.
    """
    nd = counts.ndim
    full = np.ones((3,) * nd, dtype=bool)
    pos = counts[counts > 0]
    floor = max(2.0, min_ratio * float(np.median(pos))) if pos.size else 2.0
    cand = (counts == ndimage.maximum_filter(counts, footprint=full, mode="nearest")) & (counts >= floor)
    lab, _ = ndimage.label(cand, structure=full)
    shape = np.asarray(counts.shape)
    found = []
    for k, sl in enumerate(ndimage.find_objects(lab), start=1):
        lo = np.array([s.start for s in sl])
        hi = np.array([s.stop for s in sl])
        if np.any(lo == 0) or np.any(hi == shape):
            continue
        # window one cell wider than the plateau's bounding box
        win = tuple(slice(a - 1, b + 1) for a, b in zip(lo, hi))
        comp = lab[win] == k
        ring = ndimage.binary_dilation(comp, structure=full) & ~comp
        idx = np.argwhere(comp)
        v = counts[win][tuple(idx[0])]
        if counts[win][ring].max() >= v:
            continue
        found.append((-int(v), k, idx.mean(axis=0) + lo - 1))
    found.sort(key=lambda t: (t[0], t[1]))
    return [(c, -v) for v, _, c in found[:top_k]]


def _interp(axis, fidx):
    # fractional cell index to coordinate
    return float(np.interp(fidx, np.arange(len(axis)), axis))


def normal_density_curve(f: Callable, domain, z_range, resolution: int = 200, n_rays: int = 400,
                         top_k: int = 5) -> NormalDensity:
    """Ray density for the graph ``z = f(x)`` on a ``resolution`` square grid over domain x z_range."""
    if resolution < 2 or n_rays < 1:
        raise ValueError("resolution must be >= 2 and n_rays >= 1")
    (x0, x1), (z0, z1) = domain, z_range
    xc, hx = _cell_axis(x0, x1, resolution)
    zc, hz = _cell_axis(z0, z1, resolution)
    xs = np.linspace(x0, x1, n_rays)
    zs = np.asarray(f(xs), dtype=float)
    slope, _ = curve_derivatives(f, xs)
    s = np.sqrt(1 + slope * slope)
    origins = np.column_stack([zs, xs])
    dirs = np.column_stack([1 / s, -slope / s])
    length = float(np.hypot(x1 - x0, z1 - min(z0, zs.min())))
    counts = _accumulate(origins, dirs, (z0, x0), (hz, hx), (resolution, resolution), length)
    peaks = _regional_maxima(counts, top_k)
    pts = np.array([[_interp(xc, c[1]), _interp(zc, c[0])] for c, _ in peaks]).reshape(-1, 2)
    return NormalDensity(counts, (xc, zc), pts, np.array([v for _, v in peaks], dtype=int))


def normal_density_surface(model: SurfaceModel, z_range, resolution: int = 60, n_rays: int = 80,
                           top_k: int = 5) -> NormalDensity:
    """Ray density above a surface on a ``resolution``-cubed grid over the bounds x ``z_range``."""
    if resolution < 2 or n_rays < 1:
        raise ValueError("resolution must be >= 2 and n_rays >= 1")
    b = model.bounds
    z0, z1 = z_range
    xc, hx = _cell_axis(b.xmin, b.xmax, resolution)
    yc, hy = _cell_axis(b.ymin, b.ymax, resolution)
    zc, hz = _cell_axis(z0, z1, resolution)
    X, Y = b.grid(max(n_rays, 2))
    Z = model.elevation(X, Y)
    n = model.normal(X, Y).reshape(-1, 3)
    origins = np.column_stack([Z.ravel(), Y.ravel(), X.ravel()])
    dirs = n[:, ::-1]
    length = float(np.sqrt(b.width**2 + b.height**2 + (z1 - min(z0, Z.min())) ** 2))
    shape = (resolution,) * 3
    counts = np.zeros(shape, dtype=np.int64)
    # chunk rays to bound memory
    for s in range(0, len(origins), 512):
        counts += _accumulate(origins[s:s + 512], dirs[s:s + 512], (z0, b.ymin, b.xmin), (hz, hy, hx),
                              shape, length)
    peaks = _regional_maxima(counts, top_k)
    pts = np.array([[_interp(xc, c[2]), _interp(yc, c[1]), _interp(zc, c[0])] for c, _ in peaks]).reshape(-1, 3)
    return NormalDensity(counts, (xc, yc, zc), pts, np.array([v for _, v in peaks], dtype=int))


def normal_density_map(target, z_range, resolution: int = 60, domain=None, **kw) -> NormalDensity:
    """Surface models get a 3D grid; plain callables ``f(x)`` with ``domain`` get a 2D grid."""
    if isinstance(target, SurfaceModel):
        return normal_density_surface(target, z_range, resolution, **kw)
    if domain is None:
        raise ValueError("a 1D curve needs a domain")
    return normal_density_curve(target, domain, z_range, resolution, **kw)
