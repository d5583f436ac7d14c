"""Capture-point cost functions.

Every cost is ``w_overlap * overlap - w_coverage * coverage`` where, for
centers ``X_i`` with curvature-model radii ``r_i``:

========  ===================================  ==========================  =======================
kind      overlap term                         coverage term               weights
========  ===================================  ==========================  =======================
F1        sum_{i<j} [r_i + r_j - |X_i-X_j|]_+  (none)                      1, 0
F2        same                                 sum pi (r_i / R)^2          1, 1
F3        same                                 sum pi (r_i / R)^2          5, 0.5
F4        same                                 sum pi (r_i / R)^2          w1, w2
F5        sum_{i<j} lens area A(r_i,r_j,D_ij)  sum pi r_i^2                1, 1
G1        radius deficit                       sum pi r_i^2                1, 1
G2        radius deficit                       sum pi r_i^2                5, 0.5
========  ===================================  ==========================  =======================
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from ..diffgeo import gaussian_curvature, max_abs_gaussian_curvature
from ..ortho import OrthoParams, radius_from_curvature
from ..terrain import Bounds, OutOfBoundsError, SurfaceModel
from .geometry import circle_overlap_area

__all__ = ["COST_KINDS", "CostSpec", "PlanContext", "CostFunction", "evaluate_cost"]

# kind -> (overlap model, coverage model, default w_overlap, default w_coverage)
_TABLE = {
    "F1": ("deficit", None, 1.0, 0.0),
    "F2": ("deficit", "relative", 1.0, 1.0),
    "F3": ("deficit", "relative", 5.0, 0.5),
    "F4": ("deficit", "relative", None, None),
    "F5": ("area", "absolute", 1.0, 1.0),
    "G1": ("deficit", "absolute", 1.0, 1.0),
    "G2": ("deficit", "absolute", 5.0, 0.5),
}
COST_KINDS = tuple(_TABLE)

# named schedules for F4: N -> (w1, w2)
_SCHEDULES = {
    # overlap weight fixed, coverage weight fading as circles are added
    "inverse-n": lambda n: (5.0, 0.5 / n),
}


@dataclass(frozen=True)
class CostSpec:
    """Cost selection.  ``schedule`` (F4 only) is a schedule name or a ``{N: [w1, w2]}`` map."""

    kind: str
    w1: Optional[float] = None
    w2: Optional[float] = None
    schedule: Union[str, dict, None] = None

    def __post_init__(self):
        kind = self.kind.upper()
        if kind not in _TABLE:
            raise ValueError(f"unknown cost {self.kind!r}; choose from {COST_KINDS}")
        object.__setattr__(self, "kind", kind)
        if kind == "F4" and self.schedule is None and (self.w1 is None or self.w2 is None):
            raise ValueError("F4 needs weights w1, w2 or a schedule")
        for w in (self.w1, self.w2):
            if w is not None and w < 0:
                raise ValueError("weights must be non-negative")
        if isinstance(self.schedule, str) and self.schedule not in _SCHEDULES:
            raise ValueError(f"unknown schedule {self.schedule!r}")

    @classmethod
    def variable(cls, schedule: Union[str, dict] = "inverse-n") -> "CostSpec":
        return cls("F4", schedule=schedule)

    def weights(self, n: Optional[int] = None) -> tuple[float, float]:
        """``(w_overlap, w_coverage)`` for a configuration with ``n`` circles."""
        _, _, wo, wc = _TABLE[self.kind]
        if self.kind != "F4":
            return wo, wc
        if self.schedule is not None and n is not None:
            if isinstance(self.schedule, str):
                return _SCHEDULES[self.schedule](n)
            table = {int(k): v for k, v in self.schedule.items()}
            if n in table:
                return tuple(map(float, table[n]))
            if self.w1 is None:
                # last scheduled entry at or below n
                keys = sorted(k for k in table if k <= n) or [min(table)]
                return tuple(map(float, table[keys[-1]]))
        if self.w1 is None or self.w2 is None:
            raise ValueError("F4 schedule needs the circle count")
        return float(self.w1), float(self.w2)

    @property
    def overlap_model(self) -> str:
        return _TABLE[self.kind][0]

    @property
    def coverage_model(self) -> Optional[str]:
        return _TABLE[self.kind][1]

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.w1 is not None:
            out["w1"] = self.w1
        if self.w2 is not None:
            out["w2"] = self.w2
        if self.schedule is not None:
            out["schedule"] = self.schedule
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "CostSpec":
        return cls(d["kind"], d.get("w1"), d.get("w2"), d.get("schedule"))


@dataclass
class PlanContext:
    """Surface, imaging parameters and the curvature normaliser shared by all costs."""

    model: SurfaceModel
    params: OrthoParams
    Kmax: Optional[float] = None
    kmax_grid: int = 201
    bounds: Bounds = field(init=False)

    def __post_init__(self):
        self.bounds = self.model.bounds
        if self.Kmax is None:
            self.Kmax = max_abs_gaussian_curvature(self.model, self.kmax_grid)

    @property
    def R(self) -> float:
        return self.params.R

    def radius(self, x, y):
        """Curvature-model capture radius at ``(x, y)``; vectorised."""
        K = gaussian_curvature(self.model, x, y)
        return radius_from_curvature(K, self.params.R, self.Kmax, self.params.m)

    def radii(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float).reshape(-1, 2)
        if len(X) == 0:
            return np.zeros(0)
        return np.atleast_1d(self.radius(X[:, 0], X[:, 1]))

    def uniform_centers(self, rng: np.random.Generator, n: int) -> np.ndarray:
        b = self.bounds
        return np.column_stack([rng.uniform(b.xmin, b.xmax, n), rng.uniform(b.ymin, b.ymax, n)])


class CostFunction:
    """A :class:`CostSpec` bound to a context, optionally against a frozen set of centers.

    With ``frozen`` centers, overlap counts new-new and new-frozen pairs and
    coverage counts only the new circles; frozen-frozen terms are constant and
    left out.  ``n_total`` selects the F4 schedule entry (defaults to the
    total number of circles).
    """

    def __init__(self, spec: CostSpec, ctx: PlanContext, frozen=None, n_total: Optional[int] = None):
        self.spec = spec
        self.ctx = ctx
        self.frozen = np.zeros((0, 2)) if frozen is None else np.asarray(frozen, dtype=float).reshape(-1, 2)
        self.frozen_r = ctx.radii(self.frozen)
        self._n_total = n_total
        self.R = ctx.R

    def weights(self, n_new: int) -> tuple[float, float]:
        n = self._n_total if self._n_total is not None else n_new + len(self.frozen)
        return self.spec.weights(n)

    # -- pair / single terms --------------------------------------------------
    def _pair(self, ri, rj, D):
        if self.spec.overlap_model == "area":
            return circle_overlap_area(ri, rj, D)
        return np.maximum(ri + rj - D, 0.0)

    def _single(self, r):
        model = self.spec.coverage_model
        if model is None:
            return np.zeros(np.shape(r))
        if model == "relative":
            return np.pi * (np.asarray(r) / self.R) ** 2
        return np.pi * np.asarray(r) ** 2

    def check(self, X):
        X = np.asarray(X, dtype=float).reshape(-1, 2)
        if len(X) and not np.all(self.ctx.bounds.contains(X[:, 0], X[:, 1])):
            raise OutOfBoundsError("capture point outside the surface bounds")
        return X

    def terms(self, X) -> tuple[float, float]:
        """Unweighted ``(overlap, coverage)`` of new centers ``X``."""
        X = self.check(X)
        r = self.ctx.radii(X)
        overlap = 0.0
        n = len(X)
        if n > 1:
            iu, ju = np.triu_indices(n, 1)
            D = np.hypot(*(X[iu] - X[ju]).T)
            overlap += float(np.sum(self._pair(r[iu], r[ju], D)))
        if n and len(self.frozen):
            D = np.hypot(*(X[:, None, :] - self.frozen[None, :, :]).transpose(2, 0, 1))
            overlap += float(np.sum(self._pair(r[:, None], self.frozen_r[None, :], D)))
        coverage = float(np.sum(self._single(r)))
        return overlap, coverage

    def __call__(self, X) -> float:
        X = np.asarray(X, dtype=float).reshape(-1, 2)
        wo, wc = self.weights(len(X))
        overlap, coverage = self.terms(X)
        return wo * overlap - wc * coverage

    # -- incremental evaluation for the pattern search ------------------------
    def move_deltas(self, X, r, i: int, trials) -> tuple[np.ndarray, np.ndarray]:
        """Cost change for moving circle ``i`` to each row of ``trials``.

        Returns ``(delta, trial_radii)``.  ``X``/``r`` are current centers and radii.
        """
        trials = np.asarray(trials, dtype=float).reshape(-1, 2)
        wo, wc = self.weights(len(X))
        rt = self.ctx.radii(trials)
        others = np.delete(X, i, axis=0)
        r_others = np.delete(r, i)
        if len(self.frozen):
            others = np.vstack([others, self.frozen])
            r_others = np.concatenate([r_others, self.frozen_r])
        if len(others):
            d_old = np.hypot(*(others - X[i]).T)
            old = float(np.sum(self._pair(r[i], r_others, d_old)))
            d_new = np.hypot(*(trials[:, None, :] - others[None, :, :]).transpose(2, 0, 1))
            new = np.sum(self._pair(rt[:, None], r_others[None, :], d_new), axis=1)
        else:
            old, new = 0.0, np.zeros(len(trials))
        delta = wo * (new - old) - wc * (self._single(rt) - self._single(r[i]))
        return delta, rt


def evaluate_cost(X, spec: CostSpec, ctx: PlanContext, frozen=None) -> float:
    """Value of ``spec`` at centers ``X`` (rows ``(x, y)``)."""
    return CostFunction(spec, ctx, frozen=frozen)(X)
