"""
Where surface normals gather
============================

Rays along the surface normals crowd together above concave ground.  Cells
crossed by many rays are places from which much of the surface is seen
head-on.
"""
import numpy as np

from orthocover import surfaces
from orthocover.plan import normal_density_curve, normal_density_surface

bowl = normal_density_curve(lambda x: -np.sqrt(1 - x * x), (-0.95, 0.95), (-1.0, 0.5))
print("half circle, densest cell:", bowl.suggested[0], "rays:", bowl.suggested_counts[0])

trough = normal_density_curve(np.sin, (-np.pi, 0.0), (-1.2, 1.0))
print("sine trough:", np.round(trough.suggested[:3], 3).tolist())

dish = normal_density_surface(surfaces.paraboloid(0.5), (0.0, 4.0), resolution=50, n_rays=60)
print("paraboloid, top clusters (x, y, z):", np.round(dish.suggested[:3], 3).tolist())

flat = normal_density_surface(surfaces.plane(-2, 2), (0.0, 4.0), resolution=30, n_rays=30)
print("plane clusters:", len(flat.suggested))
