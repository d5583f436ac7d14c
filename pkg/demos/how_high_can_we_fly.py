"""
How high can the camera fly?
============================

Pushing every point of a curve out along its normal by d traces the imaging
curve.  Above a curvature-dependent height it folds back below the ground and
some viewpoints become unusable.  Bisection finds the largest safe d.
"""
import numpy as np

from orthocover import surfaces
from orthocover.diffgeo import imaging_curve, max_valid_height_1d

for name, f, dom in [("x^2", lambda x: x**2, (-2, 2)),
                     ("sin", np.sin, (-2 * np.pi, 2 * np.pi)),
                     ("|0.8x|", surfaces.abs_line(0.8), (-2, 2)),
                     ("|1.5x|", surfaces.abs_line(1.5), (-2, 2))]:
    hb = max_valid_height_1d(f, dom)
    print(f"{name:7s}", f"D = {hb.value:.4f}" if hb.bounded else "unbounded up to the cap")

# the parabola's bound has a closed form: 3*sqrt(3)/2
print("closed form for x^2:", 3 * np.sqrt(3) / 2)

# just above the bound the invalid points sit near x = +-1/sqrt(2)
c = imaging_curve(lambda x: x**2, 2.7)
print("invalid x range at d = 2.7:", c.x[~c.valid].min(), c.x[~c.valid].max())
