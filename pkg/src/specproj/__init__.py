"""Calculus on semidefinite representations (projections of spectrahedra)."""

from specproj.feas import (
    FeasibilityReport,
    SmoothingSchedule,
    Status,
    grid_feasibility,
    lambda_star,
    membership,
)
from specproj.sdr import (
    SDRep,
    cone_hull,
    convex_hull_union,
    homogenize,
    intersection,
    minkowski_sum,
    product,
    slice_last_at_one,
)
from specproj.symcore import block_diag, is_psd, lambda_min, symmat

__all__ = [
    "FeasibilityReport",
    "SDRep",
    "SmoothingSchedule",
    "Status",
    "block_diag",
    "cone_hull",
    "convex_hull_union",
    "grid_feasibility",
    "homogenize",
    "intersection",
    "is_psd",
    "lambda_min",
    "lambda_star",
    "membership",
    "minkowski_sum",
    "product",
    "slice_last_at_one",
    "symmat",
]
