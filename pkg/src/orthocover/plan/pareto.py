"""Overlap/coverage trade-off front by a weighted-sum sweep."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .costs import CostFunction, CostSpec, PlanContext
from .solver import SolverConfig, multistart

__all__ = ["ParetoPoint", "objectives", "nondominated", "pareto_front"]


@dataclass
class ParetoPoint:
    X: np.ndarray
    f1: float
    f2: float
    lam: float


def objectives(X, ctx: PlanContext) -> tuple[float, float]:
    """``f1`` = radius-deficit overlap, ``f2`` = overlap minus relative coverage."""
    overlap, coverage = CostFunction(CostSpec("F2"), ctx).terms(X)
    return overlap, overlap - coverage


def nondominated(F) -> np.ndarray:
    """Indices of the nondominated rows of ``F`` (minimization), duplicates kept once.

    Returned in ascending order of the first objective (ties by the second).
    """
    F = np.asarray(F, dtype=float).reshape(len(F), -1)
    order = np.lexsort(F.T[::-1])
    keep = []
    for i in order:
        fi = F[i]
        dup_or_dominated = False
        for j in keep:
            fj = F[j]
            if np.all(fj <= fi):
                dup_or_dominated = True
                break
        if not dup_or_dominated:
            keep.append(i)
    return np.array(keep, dtype=int)


def pareto_front(ctx: PlanContext, N: int, cfg: SolverConfig = SolverConfig(), n_points: int = 5) -> list:
    """Sweep ``lam`` over ``n_points`` values in ``[0, 1]`` minimizing ``lam*f1 + (1-lam)*f2``.

    ``lam*f1 + (1-lam)*f2`` equals F4 with ``w1 = 1, w2 = 1 - lam``.  All
    multistart solutions from every sweep point are pooled before filtering.
    The front is sorted by ``f1`` ascending.
    """
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    pool = []
    for k, lam in enumerate(np.linspace(0.0, 1.0, n_points)):
        spec = CostSpec("F4", w1=1.0, w2=float(1.0 - lam))
        res = multistart(spec, ctx, cfg.replace(seed=cfg.seed + k), N)
        for X, _ in res.all:
            f1, f2 = objectives(X, ctx)
            pool.append(ParetoPoint(X, f1, f2, float(lam)))
    idx = nondominated([[p.f1, p.f2] for p in pool])
    return [pool[i] for i in idx]
