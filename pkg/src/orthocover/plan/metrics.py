"""Raster coverage and overlap measurements for a set of circles."""
from __future__ import annotations

import numpy as np

from ..terrain import Bounds
from .geometry import circle_overlap_area

__all__ = ["circle_array", "multiplicity", "covered_mask", "coverage_metrics"]


def circle_array(circles) -> np.ndarray:
    """``(K, 3)`` array of ``x, y, r`` from Circle objects, dicts or rows."""
    rows = []
    for c in circles:
        if hasattr(c, "r"):
            rows.append((c.x, c.y, c.r))
        elif isinstance(c, dict):
            rows.append((c["x"], c["y"], c["r"]))
        else:
            rows.append(tuple(c))
    return np.asarray(rows, dtype=float).reshape(-1, 3)


def multiplicity(circles, bounds: Bounds, grid_res: int = 400) -> np.ndarray:
    """Number of circles containing each cell center, shape ``(grid_res, grid_res)``."""
    C = circle_array(circles)
    X, Y, _, _ = bounds.cell_centers(grid_res)
    count = np.zeros(X.shape, dtype=np.int32)
    for x, y, r in C:
        count += (X - x) ** 2 + (Y - y) ** 2 <= r * r
    return count


def covered_mask(circles, bounds: Bounds, grid_res: int = 400) -> np.ndarray:
    return multiplicity(circles, bounds, grid_res) > 0


def coverage_metrics(circles, bounds: Bounds, grid_res: int = 400) -> dict:
    """Covered area, percent of the bounds rectangle, and two overlap measures.

    ``overlap_closed_form`` sums the pairwise lens areas (triple overlaps are
    counted once per pair); ``overlap_grid`` sums ``multiplicity - 1`` over
    covered cells.  Only cells inside the bounds are counted.
    """
    if grid_res < 2:
        raise ValueError("grid_res must be at least 2")
    C = circle_array(circles)
    _, _, hx, hy = bounds.cell_centers(grid_res)
    cell = hx * hy
    mult = multiplicity(C, bounds, grid_res)
    covered = int(np.count_nonzero(mult))
    area = cell * covered
    lens = 0.0
    if len(C) > 1:
        iu, ju = np.triu_indices(len(C), 1)
        D = np.hypot(C[iu, 0] - C[ju, 0], C[iu, 1] - C[ju, 1])
        lens = float(np.sum(circle_overlap_area(C[iu, 2], C[ju, 2], D)))
    return {
        "area_covered": float(area),
        "percent_covered": float(min(100.0, 100.0 * area / bounds.area)),
        "overlap_closed_form": lens,
        "overlap_grid": float(cell * np.sum(np.maximum(mult - 1, 0))),
        "n_circles": int(len(C)),
    }
