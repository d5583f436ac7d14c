"""
Overlap against coverage
========================

Sweeping a weight between the two objectives traces their trade-off.
Only nondominated plans survive.
"""
from orthocover import surfaces
from orthocover.ortho import OrthoParams
from orthocover.plan import PlanContext, SolverConfig, pareto_front

ctx = PlanContext(surfaces.cos_sum(-2, 2), OrthoParams.from_degrees(3.0, 10.0))
front = pareto_front(ctx, N=20, cfg=SolverConfig(max_iters=120, seed=0), n_points=7)
print(" lambda   overlap   overlap-coverage")
for p in front:
    print(f"{p.lam:7.3f} {p.f1:9.4f} {p.f2:12.4f}")
