"""Divergence-free velocity models and their Jacobian norms."""

from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import Literal, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.integrate import trapezoid

from errors import InvalidExponentError, InvalidParameterError
from filters.generator import smooth_bump
from spectral import (
    PhysicalField,
    TorusGrid,
    VectorField,
    certify,
    forward_transform,
    gradient,
    inverse_transform,
    lq_norm,
    project_divergence_free,
    vector_values,
)
from spectral.ops import nyquist_free_wavenumbers

logger = logging.getLogger(__name__)

VelocityKind = Literal["zero", "uniform", "steady_shear", "alternating_shear", "cellular", "power_vortex"]


class VelocityModel(BaseModel):
    """Parametric velocity u(t, x); every sample is certified divergence-free."""

    model_config = ConfigDict(frozen=True)

    kind: VelocityKind = Field(..., description="Flow family")
    amplitude: float = Field(default=1.0, ge=0.0, description="Overall scale of u")
    c: Tuple[float, float] = Field(default=(1.0, 0.0), description="Drift of the uniform flow")
    period: float = Field(default=2.0, gt=0.0, description="Period T of the alternating shear")
    beta: float = Field(default=0.5, gt=0.0, lt=1.0, description="Vortex exponent, u ~ r^{1-β}")
    r0: float = Field(default=3.0, gt=0.0, le=math.pi, description="Radius of the vortex support")

    @model_validator(mode="after")
    def _finite(self) -> "VelocityModel":
        if not all(math.isfinite(v) for v in self.c):
            raise ValueError("uniform drift must be finite")
        return self

    @property
    def time_dependent(self) -> bool:
        return self.kind == "alternating_shear"

    def phase(self, t: float) -> int:
        """0 in the first half of each alternating-shear period, 1 in the second."""
        if not self.time_dependent:
            return 0
        return 0 if t % self.period < 0.5 * self.period else 1

    def with_amplitude(self, amplitude: float) -> "VelocityModel":
        return self.model_copy(update={"amplitude": float(amplitude)})


def _zeros(grid: TorusGrid) -> np.ndarray:
    return np.zeros((grid.d,) + grid.shape)


def _shear_values(grid: TorusGrid, phase: int) -> np.ndarray:
    x1, x2 = grid.coordinates()
    values = _zeros(grid)
    if phase == 0:
        values[0] = np.sin(x2)
    else:
        values[1] = np.sin(x1)
    return values


def _cellular_values(grid: TorusGrid) -> np.ndarray:
    x1, x2 = grid.coordinates()
    return np.stack([-np.sin(x1) * np.cos(x2), np.cos(x1) * np.sin(x2)])


def vortex_cutoff(r: np.ndarray, r0: float) -> np.ndarray:
    """χ(r) = p(1/2 + r/(2r₀)): flat to all orders at r = 0, zero for r >= r₀.

    The transition spans all of [0, r₀], so ∇²χ = O(1/r₀²) everywhere.
    """
    return smooth_bump(0.5 + 0.5 * np.asarray(r, dtype=float) / r0)


def _power_vortex(model: VelocityModel, grid: TorusGrid) -> VectorField:
    """u = ∇^⊥H with H = χ(r) r^{2-β} centred at (π, π), differentiated spectrally."""
    x1, x2 = grid.coordinates()
    r = np.hypot(x1 - math.pi, x2 - math.pi)
    stream = forward_transform(PhysicalField(grid, vortex_cutoff(r, model.r0) * r ** (2.0 - model.beta)))
    k1, k2 = nyquist_free_wavenumbers(grid)
    components = (stream.multiply(-1j * k2), stream.multiply(1j * k1))
    return project_divergence_free(VectorField(components))


@lru_cache(maxsize=64)
def _unit_sample(model: VelocityModel, grid: TorusGrid, phase: int) -> VectorField:
    if grid.d == 1 and model.kind not in {"zero", "uniform"}:
        raise InvalidParameterError(f"velocity '{model.kind}' needs d = 2")
    if model.kind == "power_vortex":
        return _power_vortex(model, grid)
    if model.kind == "zero":
        values = _zeros(grid)
    elif model.kind == "uniform":
        values = _zeros(grid)
        for i in range(grid.d):
            values[i] = model.c[i]
    elif model.kind == "cellular":
        values = _cellular_values(grid)
    else:
        values = _shear_values(grid, phase)
    components = tuple(forward_transform(PhysicalField(grid, v)) for v in values)
    return certify(VectorField(components))


def sample_velocity(model: VelocityModel, t: float, grid: TorusGrid) -> VectorField:
    """u(t, ·) on ``grid`` in spectral form, certified divergence-free."""
    unit = _unit_sample(model.with_amplitude(1.0), grid, model.phase(t))
    if model.amplitude == 1.0:
        return unit
    return VectorField(tuple(c.scaled(model.amplitude) for c in unit.components), unit.divergence_free)


def max_speed(v: VectorField) -> float:
    values = vector_values(v)
    return float(np.max(np.sqrt(np.sum(values * values, axis=0))))


def jacobian_frobenius(v: VectorField) -> PhysicalField:
    """Pointwise |∇u| = (Σ_{ij} (∂_j u_i)²)^{1/2}."""
    total = np.zeros(v.grid.shape)
    for component in v.components:
        for derivative in gradient(component):
            total += inverse_transform(derivative).values ** 2
    return PhysicalField(v.grid, np.sqrt(total))


def gradient_lp_norm(v: VectorField, p: float) -> float:
    """‖∇u‖_{L^p} of the Frobenius norm of the velocity Jacobian."""
    return lq_norm(jacobian_frobenius(v), p)


def gradient_lp_time_integral(
    model: VelocityModel,
    p: float,
    t_grid: Sequence[float],
    grid: TorusGrid = TorusGrid(d=2, n=128),
) -> float:
    """Trapezoidal ∫ ‖∇u(s)‖_{L^p} ds over ``t_grid``."""
    if not 1.0 < p < math.inf:
        raise InvalidExponentError(f"p must lie in (1, inf), got {p}")
    times = np.asarray(t_grid, dtype=float)
    if times.size < 2:
        return 0.0
    values = [gradient_lp_norm(sample_velocity(model, float(t), grid), p) for t in times]
    return float(trapezoid(values, times))


__all__ = [
    "VelocityKind",
    "VelocityModel",
    "sample_velocity",
    "vortex_cutoff",
    "max_speed",
    "jacobian_frobenius",
    "gradient_lp_norm",
    "gradient_lp_time_integral",
]
