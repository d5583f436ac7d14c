"""Epsilon-orthographic region analysis and capture-point planning for terrain surfaces."""
from . import diffgeo, ortho, plan, surfaces, terrain
from .dem import load_dem
from .diffgeo import gaussian_curvature, max_abs_gaussian_curvature, max_valid_height_1d, mean_curvature
from .ortho import OrthoParams, region, surface_ortho_region
from .terrain import AnalyticSurface, Bounds, HeightField, OutOfBoundsError, SurfaceModel

__version__ = "0.1.0"
