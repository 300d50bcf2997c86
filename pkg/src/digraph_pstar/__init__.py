"""Edge/p-star densities of uniform random directed graphs.

Transition curve of the mean-field function, limiting entropy and free-energy
densities, and an exact finite-n oracle for the joint law of the densities.
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .curve import (CriticalPoint, CurvePoint, critical_point, curve_point,
                    curve_point_at_beta2, q, q_inverse)
from .entropy import (BipodalProfile, RegionES, classify_es, entropy, entropy_gradient,
                      entropy_p2_closed, rate_function, solve_bipodal)
from .errors import (ConvergenceError, DomainError, EmptyWindowError, NearCriticalError,
                     PStarError, ResourceError)
from .free_energy import (ErgmResult, RegionU, classify_beta1_s, classify_e_beta2,
                          edge_density, ergm_free_energy, free_energy_e,
                          free_energy_e_slope, free_energy_s, free_energy_s_slope,
                          star_density)
from .grid import Plane, Quantity, SurfaceGrid, surface_grid
from .oracle import (ConditionalRowLaw, FiniteLaw, conditional_row_law, exact_joint_law,
                     load_law, sample_conditioned, save_law, window_log_prob)
from .scalar import (Kind, ModelParams, StationaryPoint, analyze_stationary, ell_eval,
                     entropy_I, entropy_I_prime, global_maximizers)

__all__ = [
    "BACKEND", "BipodalProfile", "ConditionalRowLaw", "ConvergenceError", "CriticalPoint",
    "CurvePoint", "DomainError", "EmptyWindowError", "ErgmResult", "FiniteLaw", "Kind",
    "ModelParams", "NearCriticalError", "PStarError", "Plane", "Quantity", "RegionES",
    "RegionU", "ResourceError", "StationaryPoint", "SurfaceGrid", "analyze_stationary",
    "classify_beta1_s", "classify_e_beta2", "classify_es", "conditional_row_law",
    "critical_point", "curve_point", "curve_point_at_beta2", "edge_density", "ell_eval",
    "entropy", "entropy_I", "entropy_I_prime", "entropy_gradient", "entropy_p2_closed",
    "ergm_free_energy", "exact_joint_law", "free_energy_e", "free_energy_e_slope",
    "free_energy_s", "free_energy_s_slope", "global_maximizers", "load_law", "q",
    "q_inverse", "rate_function", "sample_conditioned", "save_law", "solve_bipodal",
    "star_density", "surface_grid", "window_log_prob",
]
