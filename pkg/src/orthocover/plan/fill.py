"""Batch and sequential circle filling until a coverage target is met."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .costs import CostFunction, CostSpec, PlanContext
from .geometry import Circle
from .metrics import coverage_metrics
from .solver import SolverConfig, multistart

__all__ = ["CapturePlan", "batch_fill", "sequential_fill", "plan_from_centers", "HISTORY_FIELDS"]

HISTORY_FIELDS = ("N", "cost", "percent_covered", "area_covered", "overlap_closed_form", "overlap_grid")


def _round(v, digits=12):
    # fixed precision keeps serialized output byte-stable
    return float(f"{v:.{digits}g}")


@dataclass
class CapturePlan:
    circles: list
    metrics: dict
    provenance: dict
    history: list = field(default_factory=list)
    status: str = "reached"

    @property
    def centers(self) -> np.ndarray:
        return np.array([[c.x, c.y] for c in self.circles]).reshape(-1, 2)

    @property
    def radii(self) -> np.ndarray:
        return np.array([c.r for c in self.circles])

    def to_dict(self) -> dict:
        return {
            "circles": [{k: _round(v) for k, v in c.to_dict().items()} for c in self.circles],
            "metrics": {k: (_round(v) if isinstance(v, float) else v) for k, v in self.metrics.items()},
            "provenance": self.provenance,
            "status": self.status,
            "history": [{k: (_round(v) if isinstance(v, float) else v) for k, v in h.items()}
                        for h in self.history],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def history_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(HISTORY_FIELDS)
        for h in self.history:
            w.writerow([h["N"]] + [repr(_round(h[k])) for k in HISTORY_FIELDS[1:]])
        return buf.getvalue()

    @classmethod
    def from_dict(cls, d: dict) -> "CapturePlan":
        return cls([Circle(c["x"], c["y"], c["r"]) for c in d["circles"]], dict(d["metrics"]),
                   dict(d["provenance"]), list(d.get("history", [])), d.get("status", "reached"))


def plan_from_centers(X, ctx: PlanContext, grid_res: int = 400, provenance=None, history=None,
                      status="reached") -> CapturePlan:
    X = np.asarray(X, dtype=float).reshape(-1, 2)
    r = ctx.radii(X)
    circles = [Circle(float(x), float(y), float(rr)) for (x, y), rr in zip(X, r)]
    metrics = coverage_metrics(circles, ctx.bounds, grid_res)
    return CapturePlan(circles, metrics, provenance or {}, history or [], status)


def _record(N, cost, metrics) -> dict:
    return {"N": int(N), "cost": float(cost), **{k: metrics[k] for k in HISTORY_FIELDS[2:]}}


def _provenance(algo, spec, cfg, ctx, target, **extra) -> dict:
    return {"algorithm": algo, "cost": spec.to_dict(), "solver": cfg.to_dict(), "seed": cfg.seed,
            "coverage_target": target, "R": _round(ctx.R), "Kmax": _round(ctx.Kmax),
            "bounds": ctx.bounds.to_list(), **extra}


def _check_target(coverage_target, n_max):
    if not 0 < coverage_target <= 100:
        raise ValueError("coverage_target must lie in (0, 100]")
    if n_max < 1:
        raise ValueError("n_max must be positive")


def batch_fill(ctx: PlanContext, spec: CostSpec, cfg: SolverConfig = SolverConfig(),
               coverage_target: float = 90.0, N0: int = 1, n_max: int = 200,
               grid_res: int = 400) -> CapturePlan:
    """Optimize ``N`` circles jointly, raising ``N`` by one until coverage reaches the target.

    Every round draws fresh random starts from one generator seeded with
    ``cfg.seed``.  When the target is still missed at ``n_max`` the last plan
    is returned with ``status = "target_unreachable"``.
    """
    _check_target(coverage_target, n_max)
    if N0 < 1:
        raise ValueError("N0 must be positive")
    rng = np.random.default_rng(cfg.seed)
    history = []
    N = N0
    while True:
        res = multistart(spec, ctx, cfg, N, rng=rng)
        m = coverage_metrics(_circles(res.best, ctx), ctx.bounds, grid_res)
        history.append(_record(N, res.best_cost, m))
        reached = m["percent_covered"] >= coverage_target
        if reached or N >= n_max:
            break
        N += 1
    prov = _provenance("batch", spec, cfg, ctx, coverage_target, N0=N0, n_max=n_max, grid_res=grid_res)
    return plan_from_centers(res.best, ctx, grid_res, prov, history,
                             "reached" if reached else "target_unreachable")


def sequential_fill(ctx: PlanContext, spec: CostSpec, cfg: SolverConfig = SolverConfig(),
                    step_n: int = 1, coverage_target: float = 90.0, n_max: int = 200,
                    grid_res: int = 400) -> CapturePlan:
    """Add ``step_n`` circles at a time, optimizing only the new ones against the placed set.

    Overlap with placed circles counts toward the cost; coverage counts the
    new circles only.  History has one row per added group.
    """
    _check_target(coverage_target, n_max)
    if step_n not in (1, 2, 3):
        raise ValueError("step_n must be 1, 2 or 3")
    rng = np.random.default_rng(cfg.seed)
    placed = np.zeros((0, 2))
    history = []
    while True:
        k = min(step_n, n_max - len(placed))
        n_total = len(placed) + k
        cost = CostFunction(spec, ctx, frozen=placed, n_total=n_total)
        res = multistart(cost, ctx, cfg, k, rng=rng)
        placed = np.vstack([placed, res.best])
        m = coverage_metrics(_circles(placed, ctx), ctx.bounds, grid_res)
        history.append(_record(n_total, res.best_cost, m))
        reached = m["percent_covered"] >= coverage_target
        if reached or len(placed) >= n_max:
            break
    prov = _provenance("sequential", spec, cfg, ctx, coverage_target, step_n=step_n, n_max=n_max,
                       grid_res=grid_res)
    return plan_from_centers(placed, ctx, grid_res, prov, history,
                             "reached" if reached else "target_unreachable")


def _circles(X, ctx):
    X = np.asarray(X, dtype=float).reshape(-1, 2)
    return np.column_stack([X, ctx.radii(X)])
