"""Pseudo-spectral IF-RK4 integration of ∂_tθ + u·∇θ = κΔθ on the torus."""

from __future__ import annotations

import logging
import math
from functools import lru_cache
from typing import Dict, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from errors import NonFiniteFieldError, PreconditionError, SolverDivergenceError, StepSizeError
from filters import family_for
from filters.family import MEAN_TOLERANCE
from norms import InequalityReport
from spectral import PhysicalField, SpectralField, TorusGrid, forward_transform, gradient, inverse_transform
from spectral.ops import FieldLike, as_spectral, dealias_mask, lq_norm, parseval_l2
from states import SimulationState

from .observers import ObserverContext, ObserverSet, TimeSeries
from .velocity import VelocityModel, max_speed, sample_velocity

logger = logging.getLogger(__name__)


class SolverConfig(BaseModel):
    """Diffusivity, step size and discretisation switches of one run."""

    model_config = ConfigDict(frozen=True)

    kappa: float = Field(default=0.0, ge=0.0, description="Diffusivity κ")
    dt: float = Field(..., gt=0.0, description="Time step")
    grid: TorusGrid
    dealias: bool = Field(default=True, description="Apply the 2/3 rule to the advection term")
    cfl: float = Field(default=0.5, gt=0.0, le=1.0, description="Courant number bound")
    scheme: Literal["if-rk4"] = "if-rk4"
    generator: str = Field(default="smooth_bump", description="Littlewood–Paley profile for observers")


@lru_cache(maxsize=64)
def _velocity_values(model: VelocityModel, grid: TorusGrid, phase: int) -> np.ndarray:
    sample = sample_velocity(model, phase * model.period * 0.5 if model.time_dependent else 0.0, grid)
    values = np.stack([inverse_transform(c).values for c in sample.components])
    values.setflags(write=False)
    return values


@lru_cache(maxsize=64)
def _max_speed(model: VelocityModel, grid: TorusGrid, phase: int) -> float:
    return max_speed(sample_velocity(model, phase * model.period * 0.5 if model.time_dependent else 0.0, grid))


def velocity_values(model: VelocityModel, t: float, grid: TorusGrid) -> np.ndarray:
    """Physical samples of u(t, ·), shape ``(d, *grid.shape)``."""
    return _velocity_values(model, grid, model.phase(t))


def cfl_limit(config: SolverConfig, model: VelocityModel, t: float = 0.0) -> float:
    speed = _max_speed(model, config.grid, model.phase(t))
    if speed == 0.0:
        return math.inf
    return config.cfl * config.grid.spacing / speed


def _check_cfl(config: SolverConfig, model: VelocityModel, t: float, h: float) -> None:
    limit = cfl_limit(config, model, t)
    if h > limit * (1.0 + 1e-12):
        raise StepSizeError(f"dt={h:.3e} exceeds the CFL limit {limit:.3e} at t={t:.6g}")


def advection_term(theta: SpectralField, t: float, config: SolverConfig, model: VelocityModel) -> SpectralField:
    """-u·∇θ, dealiased when configured; the η = 0 coefficient is zero."""
    grid = theta.grid
    u = velocity_values(model, t, grid)
    if not np.any(u):
        return SpectralField.zeros(grid)
    transport = np.zeros(grid.shape)
    for ui, derivative in zip(u, gradient(theta)):
        transport += ui * inverse_transform(derivative).values
    coeffs = -forward_transform(PhysicalField(grid, transport)).coeffs
    if config.dealias:
        coeffs = coeffs * dealias_mask(grid)
    coeffs.flat[0] = 0.0
    return SpectralField(grid, coeffs)


def _decay(config: SolverConfig, h: float) -> np.ndarray:
    return np.exp(-config.kappa * config.grid.wavenumber_magnitude() ** 2 * h)


def advance(theta: SpectralField, t: float, h: float, config: SolverConfig, model: VelocityModel) -> SpectralField:
    """One integrating-factor RK4 step of size ``h``; diffusion is applied exactly."""
    E = _decay(config, h)
    E2 = _decay(config, 0.5 * h)
    c = theta.coeffs

    def N(coeffs: np.ndarray, time: float) -> np.ndarray:
        return advection_term(SpectralField(theta.grid, coeffs), time, config, model).coeffs

    k1 = N(c, t)
    k2 = N(E2 * (c + 0.5 * h * k1), t + 0.5 * h)
    k3 = N(E2 * c + 0.5 * h * k2, t + 0.5 * h)
    k4 = N(E * c + h * E2 * k3, t + h)
    out = E * c + (h / 6.0) * (E * k1 + 2.0 * E2 * (k2 + k3) + k4)
    out.flat[0] = c.flat[0]
    return SpectralField(theta.grid, out)


def step(
    state: SimulationState,
    config: SolverConfig,
    model: VelocityModel,
    h: Optional[float] = None,
) -> SimulationState:
    """Advance ``state`` by one step (``config.dt`` unless ``h`` is given)."""
    h = config.dt if h is None else h
    _check_cfl(config, model, state.t, h)
    message = f"non-finite coefficients after step {state.total_steps + 1} (t={state.t + h:.6g})"
    try:
        theta = advance(state.theta, state.t, h, config, model)
    except NonFiniteFieldError as exc:
        raise SolverDivergenceError(message, step=state.total_steps + 1, time=state.t + h) from exc
    if not np.all(np.isfinite(theta.coeffs)):
        raise SolverDivergenceError(message, step=state.total_steps + 1, time=state.t + h)
    state.theta = theta
    state.step(h)
    return state


def mean_free_datum(theta0: FieldLike) -> SpectralField:
    F = as_spectral(theta0)
    if abs(F.mean) > MEAN_TOLERANCE * max(float(np.max(np.abs(F.coeffs))), 1.0):
        raise PreconditionError(f"initial datum must be mean-free (mean {abs(F.mean):.3e})")
    coeffs = F.coeffs.copy()
    coeffs.flat[0] = 0.0
    return SpectralField(F.grid, coeffs)


def _grad_energy(theta: SpectralField) -> float:
    magnitude = theta.grid.wavenumber_magnitude()
    return theta.grid.volume * float(np.sum(magnitude**2 * np.abs(theta.coeffs) ** 2))


def solve(
    config: SolverConfig,
    model: VelocityModel,
    theta0: FieldLike,
    t_end: float,
    observers: Optional[ObserverSet] = None,
) -> TimeSeries:
    """Integrate to ``t_end`` sampling ``observers``; conservation residuals are always reported."""
    if t_end < 0.0:
        raise PreconditionError(f"t_end must be >= 0, got {t_end}")
    observers = observers or ObserverSet()
    theta = mean_free_datum(theta0)
    if theta.grid != config.grid:
        raise PreconditionError("initial datum lives on a different grid than the solver config")

    n_steps = max(0, int(math.ceil(t_end / config.dt - 1e-9)))
    h = t_end / n_steps if n_steps else config.dt
    ctx = ObserverContext(kappa=config.kappa, model=model, family=family_for(config.grid, config.generator))
    state = SimulationState(theta=theta, max_steps=n_steps + 1)
    series = TimeSeries(dt=h)
    logger.info(
        "Solving %s on n=%d d=%d: kappa=%g dt=%g steps=%d",
        model.kind,
        config.grid.n,
        config.grid.d,
        config.kappa,
        h,
        n_steps,
    )

    l2_0 = parseval_l2(theta)
    linf_0 = lq_norm(theta, math.inf)
    mean_0 = theta.mean
    dissipation = 0.0
    grad_prev = _grad_energy(theta)
    linf_max = linf_0
    energy_prev = l2_0**2
    energy_increase = 0.0
    mean_drift = 0.0
    integrand_prev = {d.name: d.evaluate(theta, 0.0, ctx) for d in observers.accumulators}
    for name in integrand_prev:
        state.integrals[name] = 0.0

    def record() -> None:
        values: Dict[str, float] = {}
        for diagnostic in observers.diagnostics:
            if diagnostic.accumulator:
                values[diagnostic.name] = state.integrals[diagnostic.name]
            else:
                values[diagnostic.name] = diagnostic.evaluate(state.theta, state.t, ctx)
        series.append(state.t, values, state.theta if observers.keep_snapshots else None)

    record()
    for index in range(1, n_steps + 1):
        step(state, config, model, h)
        theta = state.theta
        grad_now = _grad_energy(theta)
        dissipation += 0.5 * h * 2.0 * config.kappa * (grad_prev + grad_now)
        grad_prev = grad_now
        for diagnostic in observers.accumulators:
            value = diagnostic.evaluate(theta, state.t, ctx)
            state.accumulate(diagnostic.name, 0.5 * h * (integrand_prev[diagnostic.name] + value))
            integrand_prev[diagnostic.name] = value
        energy = parseval_l2(theta) ** 2
        energy_increase = max(energy_increase, energy - energy_prev)
        energy_prev = energy
        linf_max = max(linf_max, lq_norm(theta, math.inf))
        mean_drift = max(mean_drift, abs(theta.mean - mean_0))
        if observers.wants(index, index == n_steps):
            record()
        logger.debug("step %d t=%.6g energy=%.12g", index, state.t, energy)

    energy_0 = max(l2_0**2, 1e-300)
    series.steps = n_steps
    series.residuals = {
        "mean_drift": float(mean_drift),
        "l2_drift": abs(math.sqrt(energy_prev) - l2_0) / max(l2_0, 1e-300),
        "linf_excess": max(0.0, linf_max - linf_0) / max(linf_0, 1e-300),
        "energy_balance": abs(energy_prev + dissipation - l2_0**2) / energy_0,
        "energy_increase": max(0.0, energy_increase) / energy_0,
        "dissipation": dissipation,
    }
    logger.info(
        "Solve finished after %d steps at t=%.6g (energy balance residual %.3e)",
        n_steps,
        state.t,
        series.residuals["energy_balance"],
    )
    return series


def lipschitz_gradient_check(
    series: TimeSeries,
    gradient_column: str = "grad_l2",
    integral_column: str = "grad_u:p=inf",
) -> InequalityReport:
    """‖∇θ(t)‖ against exp(∫₀ᵗ‖∇u‖_{L^∞}) ‖∇θ₀‖ along a recorded run."""
    gradients = series.column(gradient_column)
    integrals = series.column(integral_column)
    report = InequalityReport("lipschitz_gradient", inputs={"gradient": gradient_column, "integral": integral_column})
    for t, value, integral in zip(series.times, gradients, integrals):
        report.add(value, math.exp(integral) * gradients[0], t=t, integral=float(integral))
    return report


__all__ = [
    "SolverConfig",
    "advance",
    "advection_term",
    "cfl_limit",
    "lipschitz_gradient_check",
    "mean_free_datum",
    "solve",
    "step",
    "velocity_values",
]
