"""Truncated matricial Stieltjes moment problems on [alpha, inf).

The package runs the one-step Schur-type algorithm on matrix moment
sequences, builds the 2q x 2q resolvent polynomials whose linear fractional
transformations parametrize every solution, and verifies candidate solutions
numerically through their asymptotics along the imaginary axis.  Finitely
atomic matrix measures serve as the exactly computable oracle throughout.
"""

from .linalg import (
    DEFAULT_TOL,
    ToleranceConfig,
    as_matrix,
    is_hermitian,
    is_psd,
    null_contains,
    pinv,
    range_contains,
    rank_of,
)
from .measures import (
    DiscreteMeasure,
    PoleError,
    StieltjesFunctionRep,
    moments,
    stieltjes_function_eval,
    stieltjes_transform,
    stieltjes_transform_eval,
    zero_measure,
)
from .sequences import (
    ClassReport,
    MomentSequence,
    StieltjesParametrization,
    alpha_shift,
    block_hankel_H,
    block_hankel_K,
    classify,
    inverse_schur_transform,
    kth_schur_transform,
    reciprocal_sequence,
    schur_transform,
    stieltjes_parametrization,
    stieltjes_parametrization_via_schur,
)
from .transforms import (
    AdmissibilityResult,
    DirectParameter,
    InadmissibleParameterError,
    LftDomainError,
    LowDimParameter,
    MatrixPolynomial,
    ParameterFunction,
    SolutionFunction,
    ZeroParameter,
    admissible_parameter_check,
    default_parameter_grid,
    inverse_schur_stieltjes_eval,
    lft_apply,
    low_dim_parameter,
    poly_mul,
    poly_V,
    poly_W,
    resolvent_product_V,
    resolvent_product_W,
    schur_stieltjes_eval,
    solution_from_parameter,
    unique_solution,
)
from .verify import (
    OrderDiagnostics,
    RecoveryConfig,
    VerificationReport,
    check_stieltjes_membership,
    recover_moments,
    recover_moments_detailed,
    validate_solution,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "ToleranceConfig",
    "as_matrix",
    "is_hermitian",
    "is_psd",
    "null_contains",
    "pinv",
    "range_contains",
    "rank_of",
    "DiscreteMeasure",
    "PoleError",
    "StieltjesFunctionRep",
    "moments",
    "stieltjes_function_eval",
    "stieltjes_transform",
    "stieltjes_transform_eval",
    "zero_measure",
    "ClassReport",
    "MomentSequence",
    "StieltjesParametrization",
    "alpha_shift",
    "block_hankel_H",
    "block_hankel_K",
    "classify",
    "inverse_schur_transform",
    "kth_schur_transform",
    "reciprocal_sequence",
    "schur_transform",
    "stieltjes_parametrization",
    "stieltjes_parametrization_via_schur",
    "AdmissibilityResult",
    "DirectParameter",
    "InadmissibleParameterError",
    "LftDomainError",
    "LowDimParameter",
    "MatrixPolynomial",
    "ParameterFunction",
    "SolutionFunction",
    "ZeroParameter",
    "admissible_parameter_check",
    "default_parameter_grid",
    "inverse_schur_stieltjes_eval",
    "lft_apply",
    "low_dim_parameter",
    "poly_mul",
    "poly_V",
    "poly_W",
    "resolvent_product_V",
    "resolvent_product_W",
    "schur_stieltjes_eval",
    "solution_from_parameter",
    "unique_solution",
    "OrderDiagnostics",
    "RecoveryConfig",
    "VerificationReport",
    "check_stieltjes_membership",
    "recover_moments",
    "recover_moments_detailed",
    "validate_solution",
]
