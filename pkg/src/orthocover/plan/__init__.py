"""Capture-point planning: costs, solvers, filling, metrics and trade-off fronts."""
from .costs import COST_KINDS, CostFunction, CostSpec, PlanContext, evaluate_cost
from .fill import CapturePlan, batch_fill, plan_from_centers, sequential_fill
from .geometry import Circle, apparent_overlap_terms, circle_overlap_area, pairwise_distances
from .metrics import coverage_metrics, covered_mask, multiplicity
from .normals import NormalDensity, normal_density_curve, normal_density_map, normal_density_surface
from .pareto import ParetoPoint, nondominated, objectives, pareto_front
from .solver import LocalResult, MultistartResult, SolverConfig, local_optimize, multistart

__all__ = [
    "COST_KINDS", "CostFunction", "CostSpec", "PlanContext", "evaluate_cost",
    "CapturePlan", "batch_fill", "plan_from_centers", "sequential_fill",
    "Circle", "apparent_overlap_terms", "circle_overlap_area", "pairwise_distances",
    "coverage_metrics", "covered_mask", "multiplicity",
    "NormalDensity", "normal_density_curve", "normal_density_map", "normal_density_surface",
    "ParetoPoint", "nondominated", "objectives", "pareto_front",
    "LocalResult", "MultistartResult", "SolverConfig", "local_optimize", "multistart",
]
