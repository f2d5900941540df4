"""Velocity models, the IF-RK4 advection-diffusion solver and its diagnostics."""

from .commutator import (
    CommutatorSample,
    CommutatorTerms,
    commutator_bound_constant,
    commutator_sums,
    commutator_terms,
    commutator_trajectory,
    differential_inequality_constant,
)
from .integrator import SolverConfig, advance, cfl_limit, lipschitz_gradient_check, solve, step
from .observers import Diagnostic, ObserverContext, ObserverSet, TimeSeries, parse_diagnostics
from .velocity import (
    VelocityModel,
    gradient_lp_norm,
    gradient_lp_time_integral,
    jacobian_frobenius,
    max_speed,
    sample_velocity,
    vortex_cutoff,
)

__all__ = [
    "CommutatorSample",
    "CommutatorTerms",
    "Diagnostic",
    "ObserverContext",
    "ObserverSet",
    "SolverConfig",
    "TimeSeries",
    "VelocityModel",
    "advance",
    "cfl_limit",
    "commutator_bound_constant",
    "commutator_sums",
    "commutator_terms",
    "commutator_trajectory",
    "differential_inequality_constant",
    "gradient_lp_norm",
    "gradient_lp_time_integral",
    "jacobian_frobenius",
    "lipschitz_gradient_check",
    "max_speed",
    "parse_diagnostics",
    "sample_velocity",
    "solve",
    "step",
    "vortex_cutoff",
]
