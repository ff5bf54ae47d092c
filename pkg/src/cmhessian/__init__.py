"""Solvers for the complex m-Hessian Dirichlet and first-eigenvalue
problems on balls, ellipsoids and boxes in C^n (n = 1, 2), with the
variational functionals, geometric eigenvalue bounds, a radial shooting
oracle and a bifurcation-type solvability test."""

__version__ = "0.1.0"

from .bifurcation import (RhsSpec, affine_rhs, check_uniqueness_bifurcation,
                          exponential_rhs, solve_bifurcation, table_rhs)
from .bounds import (BoundsReport, bounds_report, lower_bound_alexandrov,
                     lower_bound_diameter, unit_ball_volume,
                     upper_bound_inscribed_ball, upper_bound_laplacian)
from .dirichlet import (SolverConfig, build_subsolution,
                        fixed_point_decreasing, solve_laplace, solve_sigma_m)
from .eigen import (EigenResult, EigenVerification, SpreadReport,
                    continuity_path, inverse_iteration,
                    solve_continuity_problem, uniqueness_probe,
                    verify_eigenpair)
from .errors import (BracketError, CmHessianError, ConeEscapeError,
                     LinearSolveError, MonotonicityError, NonConvergenceError,
                     PathStagnationError, ResolutionError,
                     SpectralConditionError)
from .fields import ScalarField
from .functionals import (QuadratureRule, blocki_inequality,
                          dirichlet_energy_flux_form, energy,
                          rayleigh_quotient, weighted_volume)
from .geometry import Domain, Grid, diameter, inradius, make_domain, volume
from .hessian import (complex_hessian, hessian_entries, in_gamma_m,
                      maclaurin_gap, sigma_k, sigma_m_linearization, spectrum)
from .radial import RadialProfile, radial_eigen_shoot, radial_sigma_m

__all__ = [
    "BoundsReport", "BracketError", "CmHessianError", "ConeEscapeError",
    "Domain", "EigenResult", "EigenVerification", "Grid", "LinearSolveError",
    "MonotonicityError", "NonConvergenceError", "PathStagnationError",
    "QuadratureRule", "RadialProfile", "ResolutionError", "RhsSpec",
    "ScalarField", "SolverConfig", "SpectralConditionError", "SpreadReport",
    "affine_rhs", "blocki_inequality", "bounds_report", "build_subsolution",
    "check_uniqueness_bifurcation", "complex_hessian", "continuity_path",
    "diameter", "dirichlet_energy_flux_form", "energy", "exponential_rhs",
    "fixed_point_decreasing", "hessian_entries", "in_gamma_m", "inradius",
    "inverse_iteration", "lower_bound_alexandrov", "lower_bound_diameter",
    "make_domain", "maclaurin_gap", "radial_eigen_shoot", "radial_sigma_m",
    "rayleigh_quotient", "sigma_k", "sigma_m_linearization",
    "solve_bifurcation", "solve_continuity_problem", "solve_laplace",
    "solve_sigma_m", "spectrum", "table_rhs", "uniqueness_probe",
    "unit_ball_volume", "upper_bound_inscribed_ball", "upper_bound_laplacian",
    "verify_eigenpair", "volume", "weighted_volume",
]
