"""Numerical laboratory for radial solitary waves of the Klein-Gordon-Maxwell
system with critical growth: reduction of the coupled system to a single-field
energy, mountain-pass critical-point search, and concentration-profile
threshold estimates dimension by dimension."""

from .params import (AdmissibilityVerdict, CoerciveRegime, DimensionCase,
                     KGMParams, MuRequirement, classify)
from .grid import (RadialField, RadialGrid, integrate, laplacian, norm_d12,
                   norm_h1, norm_lp, sphere_area)
from .potential import PotentialSolution, energy_identity_gap, solve_potential
from .energy import (EnergyBreakdown, energy, energy_along_ray,
                     energy_gradient, pairing, residual_norm)
from .saddle import (PathState, SaddleResult, SolveOptions, find_endpoint,
                     make_initial_path, mountain_pass_step, newton_refine, solve)
from .instanton import (InstantonParams, InstantonReport, cutoff_profile,
                        divergence_sweep, gradient_energy,
                        gradient_energy_sweep, inner_ball_balance,
                        max_energy_on_ray, normalized_profile,
                        sobolev_constant, sobolev_threshold, talenti,
                        threshold_dip)
from .errors import (AdmissibilityError, ConvergenceError, GridResolutionError,
                     ParameterDomainError)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError", "AdmissibilityVerdict", "CoerciveRegime",
    "ConvergenceError", "DimensionCase", "EnergyBreakdown",
    "GridResolutionError", "InstantonParams", "InstantonReport", "KGMParams",
    "MuRequirement", "ParameterDomainError", "PathState", "PotentialSolution",
    "RadialField", "RadialGrid", "SaddleResult", "SolveOptions", "classify",
    "cutoff_profile", "divergence_sweep", "energy", "energy_along_ray",
    "energy_gradient", "energy_identity_gap", "find_endpoint",
    "gradient_energy", "gradient_energy_sweep", "inner_ball_balance",
    "integrate", "laplacian", "make_initial_path", "max_energy_on_ray",
    "mountain_pass_step", "newton_refine", "norm_d12", "norm_h1", "norm_lp",
    "normalized_profile", "pairing", "residual_norm", "sobolev_constant",
    "sobolev_threshold", "solve", "solve_potential", "sphere_area", "talenti",
    "threshold_dip",
]
