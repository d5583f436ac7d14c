"""Circles and closed-form lens overlap."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Circle", "circle_overlap_area", "pairwise_distances", "apparent_overlap_terms"]


@dataclass(frozen=True)
class Circle:
    x: float
    y: float
    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError(f"circle radius must be positive, got {self.r}")

    @property
    def center(self) -> tuple[float, float]:
        return (self.x, self.y)

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "r": self.r}


def circle_overlap_area(r1, r2, D):
    """Area of the intersection of two circles with radii ``r1, r2`` and center distance ``D``.

    Vectorised over broadcastable inputs.  Disjoint circles give 0, a circle
    inside the other gives the smaller disk's area, and otherwise the sum of
    the two circular segments.
    """
    r1, r2, D = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (r1, r2, D)))
    if np.any(r1 <= 0) or np.any(r2 <= 0):
        raise ValueError("radii must be positive")
    if np.any(D < 0):
        raise ValueError("center distance must be non-negative")
    out = np.zeros(r1.shape)
    contained = D <= np.abs(r1 - r2)
    small = np.minimum(r1, r2)
    out[contained] = np.pi * small[contained] ** 2
    lens = ~contained & (D < r1 + r2)
    if lens.any():
        a, b, d = r1[lens], r2[lens], D[lens]
        # acos arguments drift just past +/-1 at tangency
        theta = 2 * np.arccos(np.clip((b * b + d * d - a * a) / (2 * d * b), -1.0, 1.0))
        phi = 2 * np.arccos(np.clip((a * a + d * d - b * b) / (2 * d * a), -1.0, 1.0))
        out[lens] = 0.5 * b * b * (theta - np.sin(theta)) + 0.5 * a * a * (phi - np.sin(phi))
    return float(out) if out.ndim == 0 else out


def pairwise_distances(A, B=None):
    A = np.asarray(A, dtype=float).reshape(-1, 2)
    B = A if B is None else np.asarray(B, dtype=float).reshape(-1, 2)
    diff = A[:, None, :] - B[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


def apparent_overlap_terms(ri, rj, D):
    """Radius deficit ``[ri + rj - D]_+``."""
    return np.maximum(np.asarray(ri) + np.asarray(rj) - np.asarray(D), 0.0)
