"""Point-vortex relative equilibria built from Wronskians of trigonometric and elliptic eigenfunctions."""
from .configuration import RationalWave, VortexConfiguration
from .equilibrium import (
    EquilibriumReport,
    check_equilibrium,
    generalized_stieltjes,
    residuals_background,
    residuals_doubly_periodic,
    residuals_periodic,
)
from .errors import CollisionError, CriticalKappaError, NumericalError, RootFindingError, ValidationError, VortexError
from .rootfind import RootSet, merge_with_signs, roots_in_strip
from .streets import build_collinear, build_critical, build_street, closed_form_n2
from .trigpoly import ExpPolynomial, StreetSpec, evaluate, from_sine, wronskian

__all__ = [
    "CollisionError", "CriticalKappaError", "EquilibriumReport", "ExpPolynomial", "NumericalError",
    "RationalWave", "RootFindingError", "RootSet", "StreetSpec", "ValidationError", "VortexConfiguration",
    "VortexError", "build_collinear", "build_critical", "build_street", "check_equilibrium", "closed_form_n2",
    "evaluate", "from_sine", "generalized_stieltjes", "merge_with_signs", "residuals_background",
    "residuals_doubly_periodic", "residuals_periodic", "roots_in_strip", "wronskian",
]
