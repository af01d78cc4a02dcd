"""Gradient-based methods for unconstrained differentiable games.

Solvers (gradient, k-extrapolation, optimistic, consensus, proximal),
spectral and global convergence-rate analysis, lower-bound constructions
for one-step linear iterative methods, and the random monotone-game
improvement-ratio study.
"""

from .errors import (
    ConfigurationError,
    DegenerateFieldError,
    DimensionError,
    DomainError,
    GamedynError,
    InsufficientDataError,
    NumericalError,
    SingularMatrixError,
    StepSizeError,
)
from .games import (
    AffineVectorField,
    GameConstants,
    GameProblem,
    adversarial_separable_game,
    bilinear_game,
    constants,
    haar_orthogonal,
    in_between_game,
    problem_from_json_dict,
    quadratic_game,
    random_monotone_game,
    random_strongly_monotone_field,
    separable_spectrum,
)
from .linalg import eigenvalues, singular_values, solve_linear, spectral_map
from .lowerbounds import (
    HardInstance,
    LowerBoundReport,
    MethodPolynomial,
    chebyshev_instance,
    chebyshev_points,
    lagrange_lower_bound,
    minimax_radius,
    scli_operator,
    theorem_floor,
    verify_lower_bound,
)
from .rates import (
    CommutativeSaddleBounds,
    RateCertificate,
    SpectralRatePrediction,
    certify,
    commutative_saddle_bounds,
    effective_radius_sq,
    gd_radius_sq,
    gd_spectral_bounds,
    global_rate,
    keg_eta_cap,
    keg_rate_bound,
    keg_simplified_bound,
    keg_spectral_radius_sq,
    proximal_radius_sq,
    spectrum_stats,
)
from .solvers import (
    MethodKind,
    SolverConfig,
    Trajectory,
    co_step,
    default_co_steps,
    default_eta,
    gd_step,
    k_extrapolation_step,
    keg_polynomial_coeffs,
    og_step,
    operator_matrix,
    proximal_step,
    run,
)
from .experiments import (
    ExperimentSpec,
    improvement_ratio,
    run_experiment,
    sample_ratios,
)

__version__ = "0.1.0"
