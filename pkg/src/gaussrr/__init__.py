"""Gaussian degrees of subvarieties of the algebraic torus and the Euler characteristics they compute."""

from .cycles import LagrangianCycle, chi_via_cc, parse_cycle, verify_cor_1_5
from .euler import chi_curve_pick, chi_nondegenerate_hypersurface, nondegeneracy_check
from .gauss import (
    Point,
    ZeroSection,
    gaussian_degree_1d,
    gaussian_degree_complete_intersection,
    gaussian_degree_hypersurface,
)
from .homotopy import TrackerConfig, bkk_bound, solve_square_system
from .laurent import LaurentPolynomial, parse
from .polytope import convex_hull, mixed_volume, newton_polytope, normalized_volume

__all__ = [
    "LagrangianCycle",
    "LaurentPolynomial",
    "Point",
    "TrackerConfig",
    "ZeroSection",
    "bkk_bound",
    "chi_curve_pick",
    "chi_nondegenerate_hypersurface",
    "chi_via_cc",
    "convex_hull",
    "gaussian_degree_1d",
    "gaussian_degree_complete_intersection",
    "gaussian_degree_hypersurface",
    "mixed_volume",
    "newton_polytope",
    "nondegeneracy_check",
    "normalized_volume",
    "parse",
    "parse_cycle",
    "solve_square_system",
    "verify_cor_1_5",
]
