"""
Orthographic regions on curved ground
=====================================

How large a patch can one image treat as orthographic?  On flat ground the
answer is a disk of radius d*tan(eps).  Curvature shrinks and distorts it.
"""
import math

import numpy as np

from orthocover import surfaces
from orthocover.diffgeo import max_abs_gaussian_curvature
from orthocover.ortho import OrthoParams, approx_radius_curvature, region

params = OrthoParams.from_degrees(3.0, 10.0, dx=0.01)
print(f"R = d tan(eps) = {params.R:.4f}")

# flat ground: the exact mask is a lattice disk
flat = region(surfaces.plane(), (0.0, 0.0), params, "exact")
r_eq = math.sqrt(flat.cell_count * params.dx * params.dy / math.pi)
print(f"plane: {flat.cell_count} cells, equivalent radius {r_eq:.4f}")

# cos(x) + cos(y): compare the exact region with its cheap stand-ins
ground = surfaces.cos_sum()
Kmax = max_abs_gaussian_curvature(ground)
for pt in [(0.0, 0.0), (math.pi / 2, 0.0), (1.0, 2.0)]:
    exact = region(ground, pt, params, "exact")
    poly = region(ground, pt, params, "polygonal", N=16)
    ell = region(ground, pt, params, "elliptical", N=16)
    r_k = approx_radius_curvature(ground, pt, params, Kmax)
    r_mask = math.sqrt(exact.cell_count * params.dx * params.dy / math.pi)
    print(f"{pt}: mask radius {r_mask:.3f}, polygon mean {np.mean(poly.distances):.3f}, "
          f"ellipse {ell.major:.3f} x {ell.minor:.3f}, curvature model {r_k:.3f}")

# on a sphere every point sees the same curvature, so the regions agree in size
ball = surfaces.sphere(a=2.0)
p1 = OrthoParams.from_degrees(1.0, 10.0, dx=0.005)
sizes = [region(ball, pt, p1).cell_count for pt in [(0, 0), (0.3, 0.2), (-0.4, 0.1)]]
print("sphere cell counts:", sizes)
