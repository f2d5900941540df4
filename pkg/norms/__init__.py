"""Logarithmic Besov norms and inequality diagnostics."""

from .besov import (
    BesovParams,
    NormReport,
    besov_log_norm,
    besov_log_norm_equiv,
    compute_norms,
    evaluate_norm,
    gagliardo_log_seminorm,
    gradient_besov_norm,
    homogeneous_sobolev_norm,
    log_sobolev_sum,
)
from .inequalities import (
    ChainConstants,
    InequalityReport,
    chain_constants,
    check_gradient_interpolation,
    check_square_function_interpolation,
    check_sup_interpolation,
    interp_sup_quantity,
    mixing_duality_check,
    square_function_quantity,
)

__all__ = [
    "BesovParams",
    "NormReport",
    "besov_log_norm",
    "besov_log_norm_equiv",
    "compute_norms",
    "evaluate_norm",
    "gagliardo_log_seminorm",
    "gradient_besov_norm",
    "homogeneous_sobolev_norm",
    "log_sobolev_sum",
    "ChainConstants",
    "InequalityReport",
    "chain_constants",
    "check_gradient_interpolation",
    "check_square_function_interpolation",
    "check_sup_interpolation",
    "interp_sup_quantity",
    "mixing_duality_check",
    "square_function_quantity",
]
