"""Phase-block commutator decomposition of the bold-B energy balance.

For each k the high-pass θ_k^≥ obeys

    d/dt ½‖θ_k^≥‖² + κ‖∇θ_k^≥‖² = ⟨θ_k^≥, D_k(uθ) - u·G_kθ⟩

with G_kθ = ∇(ψ_{k-1}∗θ) and D_k F = div(ψ_{k-1}∗F). Splitting u into
U^h = u - ψ_{k+2}∗u and U^l = ψ_{k+2}∗u, and θ^l = ψ_{k+4}∗θ, gives

    I   = ⟨θ_k^≥, D_k(U^h θ)⟩
    II  = ⟨θ_k^≥, U^h·G_kθ⟩
    III = ⟨θ_k^≥, D_k(U^l θ^l) - U^l·G_kθ^l⟩

and the weighted sum over k = 1..k_max with weights k^{2a-1} balances
d/dt ½‖θ‖²_B + κ‖∇θ‖²_B against I - II + III.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from errors import InvalidParameterError
from filters import LPFamily, family_for
from norms import InequalityReport, besov_log_norm_equiv
from spectral import PhysicalField, SpectralField, forward_transform, inverse_transform, lq_norm
from spectral.ops import FieldLike, dealias_mask, inner_product, nyquist_free_wavenumbers
from states import SimulationState

from .integrator import SolverConfig, advance, mean_free_datum, step
from .velocity import VelocityModel, gradient_lp_norm, sample_velocity

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CommutatorTerms:
    """Weighted commutator sums and the finite-difference balance they must satisfy."""

    I: float
    II: float
    III: float
    derivative: float
    dissipation: float
    residual: float
    t: float = 0.0

    @property
    def total(self) -> float:
        return self.I - self.II + self.III

    @property
    def scale(self) -> float:
        return max(abs(self.I), abs(self.II), abs(self.III), abs(self.dissipation))

    @property
    def relative_residual(self) -> float:
        if self.scale == 0.0:
            return 0.0 if self.residual == 0.0 else math.inf
        return self.residual / self.scale

    def as_dict(self) -> Dict[str, float]:
        return {**asdict(self), "scale": self.scale, "relative_residual": self.relative_residual}


def _product(left: np.ndarray, right: np.ndarray, grid, dealias: bool) -> np.ndarray:
    coeffs = forward_transform(PhysicalField(grid, left * right)).coeffs
    return coeffs * dealias_mask(grid) if dealias else coeffs


def _flux_divergence(velocity: Sequence[np.ndarray], theta: np.ndarray, psi: np.ndarray, grid, dealias: bool) -> np.ndarray:
    ks = nyquist_free_wavenumbers(grid)
    return sum(1j * k * psi * _product(v, theta, grid, dealias) for k, v in zip(ks, velocity))


def _transport(velocity: Sequence[np.ndarray], gradient: Sequence[np.ndarray], grid, dealias: bool) -> np.ndarray:
    coeffs = forward_transform(PhysicalField(grid, sum(v * g for v, g in zip(velocity, gradient)))).coeffs
    return coeffs * dealias_mask(grid) if dealias else coeffs


def _filtered_gradient(theta: np.ndarray, psi: np.ndarray, grid) -> List[np.ndarray]:
    ks = nyquist_free_wavenumbers(grid)
    return [inverse_transform(SpectralField(grid, 1j * k * psi * theta)).values for k in ks]


def _physical(coeffs: np.ndarray, grid) -> np.ndarray:
    return inverse_transform(SpectralField(grid, coeffs)).values


def _velocity_coeffs(model: VelocityModel, t: float, grid) -> List[np.ndarray]:
    components = [c.coeffs.copy() for c in sample_velocity(model, t, grid).components]
    for c in components:
        # the constant mode of u commutes with every multiplier
        c.flat[0] = 0.0
    return components


def _bold_energy(theta: SpectralField, alpha: float, fam: LPFamily) -> Tuple[float, float]:
    """(½Σ k^α‖θ_k^≥‖², Σ k^α‖∇θ_k^≥‖²)."""
    magnitude2 = theta.grid.wavenumber_magnitude() ** 2
    density = np.abs(theta.coeffs) ** 2
    half, gradient = 0.0, 0.0
    for k in fam.block_indices():
        tail = (1.0 - fam.psi_hat(k - 1)) ** 2 * density
        half += 0.5 * k**alpha * float(np.sum(tail))
        gradient += k**alpha * float(np.sum(magnitude2 * tail))
    volume = theta.grid.volume
    return volume * half, volume * gradient


def commutator_sums(
    theta: SpectralField,
    model: VelocityModel,
    t: float,
    a: float,
    fam: LPFamily,
    dealias: bool = True,
) -> Tuple[float, float, float]:
    """Weighted sums Σ_k k^{2a-1}(I_k, II_k, III_k) at time ``t``."""
    grid = theta.grid
    alpha = 2.0 * a - 1.0
    u_hat = _velocity_coeffs(model, t, grid)
    if not any(np.any(c) for c in u_hat):
        return 0.0, 0.0, 0.0
    th = theta.coeffs
    theta_values = _physical(th, grid)
    total_i = total_ii = total_iii = 0.0
    for k in fam.block_indices():
        psi = fam.psi_hat(k - 1)
        tail = SpectralField(grid, (1.0 - psi) * th)
        low_u = fam.psi_hat(k + 2)
        U_high = [_physical(c * (1.0 - low_u), grid) for c in u_hat]
        U_low = [_physical(c * low_u, grid) for c in u_hat]
        theta_low = th * fam.psi_hat(k + 4)
        theta_low_values = _physical(theta_low, grid)

        G = _filtered_gradient(th, psi, grid)
        G_low = _filtered_gradient(theta_low, psi, grid)
        term_i = _flux_divergence(U_high, theta_values, psi, grid, dealias)
        term_ii = _transport(U_high, G, grid, dealias)
        term_iii = _flux_divergence(U_low, theta_low_values, psi, grid, dealias) - _transport(U_low, G_low, grid, dealias)

        weight = k**alpha
        total_i += weight * inner_product(tail, SpectralField(grid, term_i))
        total_ii += weight * inner_product(tail, SpectralField(grid, term_ii))
        total_iii += weight * inner_product(tail, SpectralField(grid, term_iii))
    return total_i, total_ii, total_iii


def commutator_terms(
    theta: FieldLike,
    model: VelocityModel,
    config: SolverConfig,
    a: float,
    t: float = 0.0,
    fam: Optional[LPFamily] = None,
) -> CommutatorTerms:
    """Evaluate I, II, III and the balance residual after one solver step.

    The time derivative of ½‖θ‖²_B is the centred difference over two solver
    steps of size ``config.dt``; the terms are taken at the middle state.
    """
    if a < 0.5:
        raise InvalidParameterError(f"commutator weights need 2a - 1 >= 0, got a={a}")
    F = mean_free_datum(theta)
    fam = fam or family_for(F.grid, config.generator)
    alpha = 2.0 * a - 1.0
    h = config.dt
    middle = advance(F, t, h, config, model)
    last = advance(middle, t + h, h, config, model)
    start_energy, _ = _bold_energy(F, alpha, fam)
    end_energy, _ = _bold_energy(last, alpha, fam)
    _, gradient = _bold_energy(middle, alpha, fam)
    derivative = (end_energy - start_energy) / (2.0 * h)
    dissipation = config.kappa * gradient
    term_i, term_ii, term_iii = commutator_sums(middle, model, t + h, a, fam, config.dealias)
    residual = abs(derivative + dissipation - (term_i - term_ii + term_iii))
    terms = CommutatorTerms(
        I=term_i,
        II=term_ii,
        III=term_iii,
        derivative=derivative,
        dissipation=dissipation,
        residual=residual,
        t=t + h,
    )
    logger.debug("Commutator at t=%.6g: %s", terms.t, terms.as_dict())
    return terms


@dataclass(frozen=True)
class CommutatorSample:
    t: float
    terms: CommutatorTerms
    grad_u: float
    linf: float
    besov: float


def commutator_trajectory(
    theta0: FieldLike,
    model: VelocityModel,
    config: SolverConfig,
    a: float,
    t_end: float,
    *,
    p: float = 2.0,
    samples: int = 10,
    fam: Optional[LPFamily] = None,
) -> List[CommutatorSample]:
    """Commutator terms at ``samples`` evenly spaced times along one trajectory."""
    if samples < 1:
        raise InvalidParameterError(f"samples must be >= 1, got {samples}")
    theta = mean_free_datum(theta0)
    fam = fam or family_for(theta.grid, config.generator)
    n_steps = max(samples, int(math.ceil(t_end / config.dt - 1e-9)))
    h = t_end / n_steps if t_end > 0 else config.dt
    stride = max(1, n_steps // samples)
    state = SimulationState(theta=theta, max_steps=n_steps + 1)
    out: List[CommutatorSample] = []
    logger.info("Commutator trajectory for %s: %d steps, %d samples, a=%g", model.kind, n_steps, samples, a)
    for index in range(n_steps + 1):
        if index % stride == 0 and len(out) < samples:
            terms = commutator_terms(state.theta, model, config, a, state.t, fam)
            out.append(
                CommutatorSample(
                    t=state.t,
                    terms=terms,
                    grad_u=gradient_lp_norm(sample_velocity(model, state.t, theta.grid), p),
                    linf=lq_norm(state.theta, math.inf),
                    besov=besov_log_norm_equiv(state.theta, a, fam).value,
                )
            )
        if index < n_steps and t_end > 0:
            step(state, config, model, h)
    return out


def commutator_bound_constant(samples: Sequence[CommutatorSample], a: float) -> InequalityReport:
    """|I| + |II| + |III| against ‖∇u‖_p ‖θ‖_∞^{1/a} ‖θ‖_B^{(2a-1)/a}."""
    report = InequalityReport("commutator_bound", inputs={"a": a})
    for sample in samples:
        terms = sample.terms
        lhs = abs(terms.I) + abs(terms.II) + abs(terms.III)
        rhs = sample.grad_u * sample.linf ** (1.0 / a) * sample.besov ** ((2.0 * a - 1.0) / a)
        report.add(lhs, rhs, t=sample.t, grad_u=sample.grad_u, linf=sample.linf, besov=sample.besov)
    return report


def differential_inequality_constant(samples: Sequence[CommutatorSample], a: float) -> InequalityReport:
    """a·d/dt ‖θ‖_B^{1/a} = ‖θ‖_B^{1/a-2}·d/dt ½‖θ‖²_B against ‖∇u‖_p ‖θ‖_∞^{1/a}."""
    report = InequalityReport("differential_inequality", inputs={"a": a})
    for sample in samples:
        if sample.besov == 0.0:
            continue
        lhs = sample.besov ** (1.0 / a - 2.0) * sample.terms.derivative
        rhs = sample.grad_u * sample.linf ** (1.0 / a)
        report.add(max(lhs, 0.0), rhs, t=sample.t, derivative=sample.terms.derivative, besov=sample.besov)
    return report


__all__ = [
    "CommutatorSample",
    "CommutatorTerms",
    "commutator_bound_constant",
    "commutator_sums",
    "commutator_terms",
    "commutator_trajectory",
    "differential_inequality_constant",
]
