"""Derivative-free local search and a uniform-start multistart driver."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .costs import CostFunction, CostSpec, PlanContext

__all__ = ["SolverConfig", "LocalResult", "MultistartResult", "local_optimize", "multistart"]

# unit compass directions tried for every circle at the current step
_DIRS = np.array([[1, 0], [1, 1], [0, 1], [-1, 1], [-1, 0], [-1, -1], [0, -1], [1, -1]], dtype=float)
_DIRS[1::2] /= np.sqrt(2.0)


@dataclass(frozen=True)
class SolverConfig:
    """Pattern-search settings.  Step sizes are in units of the cap radius ``R``."""

    max_iters: int = 300
    step_init: float = 0.5
    step_tol: float = 1e-3
    n_starts: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.max_iters < 1 or self.n_starts < 1:
            raise ValueError("max_iters and n_starts must be positive")
        if not (self.step_init > 0 and self.step_tol > 0):
            raise ValueError("step_init and step_tol must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "SolverConfig":
        return cls(**d)

    def replace(self, **kw) -> "SolverConfig":
        return SolverConfig(**{**asdict(self), **kw})


@dataclass
class LocalResult:
    X: np.ndarray
    cost: float
    trace: list = field(default_factory=list)
    iterations: int = 0
    converged: bool = False


@dataclass
class MultistartResult:
    best: np.ndarray
    best_cost: float
    best_index: int
    all: list  # (X, cost) per start, in start order

    @property
    def costs(self) -> np.ndarray:
        return np.array([c for _, c in self.all])


def _as_cost(spec_or_cost, ctx, frozen=None, n_total=None) -> CostFunction:
    if isinstance(spec_or_cost, CostFunction):
        return spec_or_cost
    return CostFunction(spec_or_cost, ctx, frozen=frozen, n_total=n_total)


def local_optimize(spec, X0, ctx: PlanContext, cfg: SolverConfig = SolverConfig(),
                   frozen=None, n_total: Optional[int] = None) -> LocalResult:
    """Coordinate pattern search over circle centers, projected onto the bounds.

    Each sweep visits the circles in order and moves circle ``i`` to the best
    of eight compass trials at the current step when that lowers the cost.
    A sweep without any accepted move halves the step.  Stops when the step
    drops below ``cfg.step_tol`` or after ``cfg.max_iters`` sweeps.

    Parameters
    ----------
    spec : CostSpec or CostFunction
    X0 : array_like, shape (N, 2)
        Feasible start.  Raises :class:`OutOfBoundsError` otherwise.
    """
    cost = _as_cost(spec, ctx, frozen, n_total)
    X = cost.check(np.array(X0, dtype=float).reshape(-1, 2)).copy()
    b = ctx.bounds
    X[:, 0] = np.clip(X[:, 0], b.xmin, b.xmax)
    X[:, 1] = np.clip(X[:, 1], b.ymin, b.ymax)
    current = cost(X)
    trace = [current]
    if len(X) == 0:
        return LocalResult(X, current, trace, 0, True)

    r = ctx.radii(X)
    step = cfg.step_init
    sweeps = 0
    while step >= cfg.step_tol and sweeps < cfg.max_iters:
        sweeps += 1
        h = step * ctx.R
        X_prev, r_prev = X.copy(), r.copy()
        moved = False
        for i in range(len(X)):
            trials = X[i] + h * _DIRS
            trials[:, 0] = np.clip(trials[:, 0], b.xmin, b.xmax)
            trials[:, 1] = np.clip(trials[:, 1], b.ymin, b.ymax)
            delta, rt = cost.move_deltas(X, r, i, trials)
            k = int(np.argmin(delta))
            if delta[k] < -1e-12 * (1.0 + abs(current)):
                X[i] = trials[k]
                r[i] = rt[k]
                current += float(delta[k])
                moved = True
        if moved:
            exact = cost(X)
            if exact < trace[-1]:
                current = exact
                trace.append(exact)
                continue
            # incremental bookkeeping drifted; keep the previous iterate
            X, r, current = X_prev, r_prev, trace[-1]
        step *= 0.5
    return LocalResult(X, current, trace, sweeps, step < cfg.step_tol)


def multistart(spec, ctx: PlanContext, cfg: SolverConfig, N: int, frozen=None,
               n_total: Optional[int] = None, rng: Optional[np.random.Generator] = None) -> MultistartResult:
    """Run :func:`local_optimize` from ``cfg.n_starts`` uniform random starts.

    Starts are drawn in order from ``rng`` (``default_rng(cfg.seed)`` when not
    given), so start ``k`` is the same regardless of ``n_starts``.  The best
    cost wins and ties go to the earliest start.
    """
    if N < 1:
        raise ValueError("N must be positive")
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    cost = _as_cost(spec, ctx, frozen, n_total)
    results = []
    best_k = 0
    for k in range(cfg.n_starts):
        X0 = ctx.uniform_centers(rng, N)
        res = local_optimize(cost, X0, ctx, cfg)
        results.append((res.X, res.cost))
        if res.cost < results[best_k][1]:
            best_k = k
    return MultistartResult(results[best_k][0], results[best_k][1], best_k, results)


def as_spec(value) -> CostSpec:
    if isinstance(value, CostSpec):
        return value
    if isinstance(value, dict):
        return CostSpec.from_dict(value)
    return CostSpec(str(value))
