"""Numerical laboratory for grow-up in u_t = (u^m)_xx + 1_{(-L,L)} u^p.

Subpackage map:

    core     exponents p0/pF/alpha, regime partition, rate laws, initial data
    eigen    principal eigenvalue lam0(L) of the m = p = 1 linear problem
    selfsim  outer self-similar profiles via the (X, Y) phase plane,
             separable profiles for p = m and the compact reaction profile
    flux     flux-driven boundary profiles, energy, beta* shooting (p = p0, m > 1)
    solver   explicit finite-difference solver, discrete energy, comparisons
    rates    growth-rate fitting and pass/fail verdicts against predictions
    cli      command line front end (console script `growup`)
"""

from .cli import ExperimentConfig
from .core import (
    BOUNDARY_TOL,
    EXPONENTIAL_REGIME,
    CriticalBranch,
    ExponentReport,
    InitialData,
    ProblemParams,
    RateForm,
    RateLaw,
    Regime,
    RegimeTag,
    beta_exponent,
    build_initial_data,
    classify_regime,
    compute_alpha,
    compute_p0,
    compute_pF,
    exponent_report,
    gamma_exponent,
    predicted_rates,
)
from .eigen import EigenProfile, eigen_profile, h, lambda0
from .errors import GrowupError, NumericalError
from .flux import (
    BetaStarResult,
    ExplicitFluxProfile,
    FluxProfile,
    MatchedField,
    ProfileEnergy,
    SelfSimilarV,
    check_explicit_subsolution,
    check_gradient_bound,
    explicit_flux_profile,
    gradient_bound_constant,
    integrate_F,
    matched_w,
    minimum_bound,
    pk_subsolution_check,
    profile_energy,
    rescaled_profile_residual,
    shoot_beta_star,
    threshold_amplitude,
)
from .rates import (
    RateFit,
    default_window,
    fit_exponential,
    fit_power,
    fits_to_csv,
    flat_upper_bound,
    verdict,
)
from .solver import (
    Grid,
    SolverState,
    TimeSeries,
    comparison_probe,
    discrete_energy,
    make_grid,
    output_times,
    run,
    source_weights,
    step,
)
from .selfsim import (
    Closure,
    CompactReactionProfile,
    LambdaStar,
    PhasePath,
    PhasePoint,
    SeparableProfile,
    SimilarityExponents,
    SimilarityProfile,
    compact_reaction_profile,
    critical_points,
    integrate_psi,
    lambda_star,
    omega_bound_Y,
    phase_field,
    profile_ode_residual,
    reconstruct_profile,
    separable_profile_pm,
    separatrix,
    supersolution_residual,
)

__version__ = "0.1.0"

__all__ = [
    "ExperimentConfig",
    "BOUNDARY_TOL", "EXPONENTIAL_REGIME", "CriticalBranch", "ExponentReport",
    "InitialData", "ProblemParams", "RateForm", "RateLaw", "Regime",
    "RegimeTag", "beta_exponent", "build_initial_data", "classify_regime",
    "compute_alpha", "compute_p0", "compute_pF", "exponent_report",
    "gamma_exponent", "predicted_rates", "EigenProfile", "eigen_profile",
    "h", "lambda0", "GrowupError", "NumericalError",
    "Closure", "CompactReactionProfile", "LambdaStar", "PhasePath",
    "PhasePoint", "SeparableProfile", "SimilarityExponents",
    "SimilarityProfile", "compact_reaction_profile", "critical_points",
    "integrate_psi", "lambda_star", "omega_bound_Y", "phase_field",
    "profile_ode_residual", "reconstruct_profile", "separable_profile_pm",
    "separatrix", "supersolution_residual",
    "BetaStarResult", "ExplicitFluxProfile", "FluxProfile", "MatchedField",
    "ProfileEnergy", "SelfSimilarV", "check_explicit_subsolution",
    "check_gradient_bound", "explicit_flux_profile",
    "gradient_bound_constant", "integrate_F", "matched_w", "minimum_bound",
    "pk_subsolution_check", "profile_energy", "rescaled_profile_residual",
    "shoot_beta_star", "threshold_amplitude",
    "RateFit", "default_window", "fit_exponential", "fit_power",
    "fits_to_csv", "flat_upper_bound", "verdict",
    "Grid", "SolverState", "TimeSeries", "comparison_probe",
    "discrete_energy", "make_grid", "output_times", "run", "source_weights",
    "step", "__version__",
]
