"""Right-hand sides of the zero-diffusivity rate bounds."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Dict

from errors import InvalidParameterError


@dataclass(frozen=True)
class RateBoundInputs:
    """Data entering every bound: ‖θ₀‖_∞, ‖θ₀‖_{B^{log,a}} and ∫₀ᵗ‖∇u‖_{L^p}."""

    linf0: float
    besov0: float
    grad_u_integral: float
    a: float

    def __post_init__(self) -> None:
        for name in ("linf0", "besov0", "grad_u_integral", "a"):
            if not getattr(self, name) >= 0.0:
                raise InvalidParameterError(f"{name} must be >= 0, got {getattr(self, name)}")

    @property
    def lam(self) -> float:
        """Λ = (∫‖∇u‖)^a ‖θ₀‖_∞ + ‖θ₀‖_{B^{log,a}}."""
        return self.grad_u_integral**self.a * self.linf0 + self.besov0

    def as_dict(self) -> Dict[str, float]:
        return {**asdict(self), "lambda": self.lam}


def _kt(kappa: float, t: float) -> float:
    if not (kappa > 0.0 and t > 0.0):
        raise InvalidParameterError(f"rate bounds need kappa > 0 and t > 0, got kappa={kappa}, t={t}")
    return kappa * t


def log_weight(kappa: float, t: float, a: float) -> float:
    """log^{-a}(2 + 1/(κt))."""
    return math.log(2.0 + 1.0 / _kt(kappa, t)) ** (-a)


def weak_scale(kappa: float, t: float, a: float) -> float:
    """δ(t) = √(κt) / log^a(2 + 1/(κt))."""
    return math.sqrt(_kt(kappa, t)) * log_weight(kappa, t, a)


def strong_rhs(inputs: RateBoundInputs, kappa: float, t: float, p: float) -> float:
    """log^{-a}(2 + 1/(κt)) ((1 + (∫‖∇u‖)^p) ‖θ₀‖_∞ + ‖θ₀‖_{B^{log,a}})."""
    body = (1.0 + inputs.grad_u_integral**p) * inputs.linf0 + inputs.besov0
    return log_weight(kappa, t, inputs.a) * body


def dissipation_rhs(inputs: RateBoundInputs, kappa: float, t: float) -> float:
    """log^{-a}(2 + 1/(κt)) Λ."""
    return log_weight(kappa, t, inputs.a) * inputs.lam


def weak_rhs(inputs: RateBoundInputs, kappa: float, t: float, delta: float, sup_lq_error: float) -> float:
    """sup_s ‖θ - θ^κ‖_{L^q} ∫‖∇u‖ + √(κt)/(δ log^a(2 + 1/(κt))) Λ."""
    transport = sup_lq_error * inputs.grad_u_integral
    return transport + math.sqrt(_kt(kappa, t)) * log_weight(kappa, t, inputs.a) / delta * inputs.lam


__all__ = [
    "RateBoundInputs",
    "dissipation_rhs",
    "log_weight",
    "strong_rhs",
    "weak_rhs",
    "weak_scale",
]
