"""Split covered ground among capture circles by nearest containing center."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .dem import grid_to_json, write_pgm
from .plan.metrics import circle_array
from .terrain import Bounds

__all__ = ["LabelGrid", "Segment", "assign_points", "decision_boundaries"]

UNASSIGNED = -1


@dataclass(frozen=True)
class LabelGrid:
    """Circle index per raster cell, ``-1`` where no circle covers the cell.

    ``labels[j, i]`` belongs to the cell centered at ``(x[i], y[j])``.
    """

    labels: np.ndarray
    bounds: Bounds
    res: int

    @property
    def cell_centers(self):
        X, Y, _, _ = self.bounds.cell_centers(self.res)
        return X, Y

    @property
    def unassigned_count(self) -> int:
        return int(np.count_nonzero(self.labels == UNASSIGNED))

    def counts(self, n_circles: int) -> np.ndarray:
        lab = self.labels[self.labels >= 0]
        return np.bincount(lab, minlength=n_circles)

    def label_at(self, x, y):
        h = self.bounds.width / self.res, self.bounds.height / self.res
        i = np.clip(np.floor((np.asarray(x) - self.bounds.xmin) / h[0]).astype(int), 0, self.res - 1)
        j = np.clip(np.floor((np.asarray(y) - self.bounds.ymin) / h[1]).astype(int), 0, self.res - 1)
        return self.labels[j, i]

    def to_json(self) -> str:
        _, _, hx, hy = self.bounds.cell_centers(self.res)
        x0, _, y0, _ = self.bounds.to_list()
        obj = grid_to_json(self.labels, spacing=(hx, hy), origin=(x0 + hx / 2, y0 + hy / 2),
                           unassigned=UNASSIGNED, bounds=self.bounds.to_list())
        return json.dumps(obj, sort_keys=True)

    def to_pgm(self) -> bytes:
        """Indexed image: value ``label + 1``, ``0`` for unassigned cells."""
        idx = self.labels + 1
        return write_pgm(idx, binary=True, maxval=max(255, int(idx.max())))


def assign_points(circles, bounds: Bounds, grid_res: int = 400) -> LabelGrid:
    """Label each cell with the nearest center among circles containing it.

    Ties go to the lower circle index.
    """
    C = circle_array(circles)
    if len(C) == 0:
        raise ValueError("need at least one circle")
    X, Y, _, _ = bounds.cell_centers(grid_res)
    best = np.full(X.shape, np.inf)
    labels = np.full(X.shape, UNASSIGNED, dtype=np.int64)
    for k, (cx, cy, r) in enumerate(C):
        d2 = (X - cx) ** 2 + (Y - cy) ** 2
        # strict < keeps the earlier index on exact ties
        take = (d2 <= r * r) & (d2 < best)
        best[take] = d2[take]
        labels[take] = k
    return LabelGrid(labels, bounds, int(grid_res))


@dataclass(frozen=True)
class Segment:
    i: int
    j: int
    start: tuple
    end: tuple

    def to_dict(self) -> dict:
        return {"i": self.i, "j": self.j, "start": list(self.start), "end": list(self.end)}


def decision_boundaries(circles) -> list:
    """Perpendicular bisector of each overlapping pair, clipped to the lens.

    The clipped piece is the part of the bisector inside both circles.  A pair
    emits nothing when the circles are disjoint, concentric, or when the
    bisector misses one of them (one circle holds the other's half-way point
    outside itself).
    """
    C = circle_array(circles)
    out = []
    for i in range(len(C)):
        for j in range(i + 1, len(C)):
            (xi, yi, ri), (xj, yj, rj) = C[i], C[j]
            D = float(np.hypot(xj - xi, yj - yi))
            if D == 0 or D >= ri + rj:
                continue
            # bisector point at distance D/2 from each center; half-chords in each circle
            half = min(ri, rj) ** 2 - D * D / 4
            if half <= 0:
                continue
            h = np.sqrt(half)
            mx, my = (xi + xj) / 2, (yi + yj) / 2
            ux, uy = -(yj - yi) / D, (xj - xi) / D
            out.append(Segment(i, j, (mx - h * ux, my - h * uy), (mx + h * ux, my + h * uy)))
    return out
