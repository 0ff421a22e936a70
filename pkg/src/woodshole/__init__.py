"""Numerical checks of holomorphic fixed-point index identities.

Fixed points of polynomial endomorphisms of P^n and singular points of plane
polynomial vector fields are located by homotopy continuation; local index
terms are summed and compared with their closed-form global values.
"""

from .foliation import PlaneVectorField, SingularityRecord, build_fv, build_fxi, radial_modify
from .indices import InvariantPolySpec, bb_index, cs_index, fixed_point_count, sigma_k
from .polyalg import MultiPoly
from .projgeom import FixedPointRecord, ProjEndo, ProjPoint, normalize, proj_distance
from .solver import PathTrackerConfig, fixed_points, solve_square, vf_zeros

__all__ = [
    "FixedPointRecord", "InvariantPolySpec", "MultiPoly", "PathTrackerConfig", "PlaneVectorField",
    "ProjEndo", "ProjPoint", "SingularityRecord", "bb_index", "build_fv", "build_fxi", "cs_index",
    "fixed_point_count", "fixed_points", "normalize", "proj_distance", "radial_modify", "sigma_k",
    "solve_square", "vf_zeros",
]
