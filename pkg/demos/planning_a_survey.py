"""
Planning a survey
=================

Fill cos(x) + cos(y) with capture circles (cost F2) whose radius shrinks with
curvature.  Batch filling re-optimizes every circle as N grows; sequential
filling only places the newcomers.
"""
import sys
from pathlib import Path

from orthocover import surfaces
from orthocover.ortho import OrthoParams
from orthocover.partition import assign_points, decision_boundaries
from orthocover.plan import CostSpec, PlanContext, SolverConfig, batch_fill, sequential_fill
from orthocover.svg import SvgMap

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out")
out.mkdir(exist_ok=True)

ground = surfaces.cos_sum(-2.5, 2.5)
ctx = PlanContext(ground, OrthoParams.from_degrees(3.0, 10.0))
print(f"R = {ctx.R:.3f}, Kmax = {ctx.Kmax:.3f}")

cfg = SolverConfig(seed=0)
batch = batch_fill(ctx, CostSpec("F2"), cfg, coverage_target=60, N0=20, grid_res=200)
seq = sequential_fill(ctx, CostSpec("F2"), cfg, step_n=2, coverage_target=60, grid_res=200)
for name, plan in [("batch", batch), ("sequential", seq)]:
    m = plan.metrics
    print(f"{name:10s} N = {len(plan.circles):3d}  covered {m['percent_covered']:.1f}%  "
          f"lens overlap {m['overlap_closed_form']:.3f}")

# split the ground among the batch circles
labels = assign_points(batch.circles, ctx.bounds, 200)
segs = decision_boundaries(batch.circles)
print(f"{labels.unassigned_count} of {200 * 200} cells uncovered, {len(segs)} shared boundaries")

X, Y = ground.bounds.grid(101)
svg = SvgMap(ground.bounds, title="batch plan").contours(X, Y, ground.elevation(X, Y))
for c in batch.circles:
    svg.circle(c.x, c.y, c.r)
for s in segs:
    svg.polyline([s.start, s.end], stroke="#06c")
(out / "batch_plan.svg").write_text(svg.render())
(out / "batch_plan.json").write_text(batch.to_json())
print("wrote", out / "batch_plan.svg")
