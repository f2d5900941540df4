"""Logarithmic Besov norms and their Sobolev-type relatives."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from errors import InvalidParameterError, PreconditionError, ResourceLimitError
from filters import LPFamily, family_for, high_pass
from filters.family import MEAN_TOLERANCE
from spectral import SpectralField, gradient
from spectral.ops import FieldLike, as_physical, as_spectral

logger = logging.getLogger(__name__)

Flavor = Literal["block", "highpass", "logsum", "gagliardo", "gradient"]

GAGLIARDO_MAX_N = 128


class BesovParams(BaseModel):
    """Smoothness exponent and norm flavour."""

    model_config = ConfigDict(frozen=True)

    a: float = Field(..., ge=0.0, description="Logarithmic smoothness exponent")
    flavor: Flavor = Field(default="block", description="Which equivalent norm to evaluate")


@dataclass(frozen=True)
class NormReport:
    """Norm value with its per-index contributions; ``value**2 == sum(per_k)`` when quadratic."""

    value: float
    per_k: Tuple[float, ...] = field(default_factory=tuple)
    k_max: int = 0
    flavor: str = "block"

    def as_dict(self) -> Dict[str, object]:
        return {"value": self.value, "per_k": list(self.per_k), "k_max": self.k_max, "flavor": self.flavor}


def _check_a(a: float) -> float:
    if not a >= 0.0:
        raise InvalidParameterError(f"smoothness exponent a must be >= 0, got {a}")
    return float(a)


def _mean_free(theta: FieldLike) -> SpectralField:
    F = as_spectral(theta)
    if abs(F.mean) > MEAN_TOLERANCE * float(np.max(np.abs(F.coeffs))):
        raise PreconditionError(f"norm requires a mean-free field (mean {abs(F.mean):.3e})")
    return F


def _energy(F: SpectralField, multiplier: Optional[np.ndarray] = None) -> float:
    coeffs = F.coeffs if multiplier is None else F.coeffs * multiplier
    return F.grid.volume * float(np.sum(np.abs(coeffs) ** 2))


def _report(per_k: Iterable[float], k_max: int, flavor: str) -> NormReport:
    terms = tuple(float(v) for v in per_k)
    return NormReport(value=math.sqrt(sum(terms)), per_k=terms, k_max=k_max, flavor=flavor)


def besov_log_norm(theta: FieldLike, a: float, fam: Optional[LPFamily] = None) -> NormReport:
    """(Σ_{k=1..k_max} k^{2a} ‖θ_k‖²)^{1/2}."""
    a = _check_a(a)
    F = _mean_free(theta)
    fam = fam or family_for(F.grid)
    per_k = (k ** (2 * a) * _energy(F, fam.phi_hat(k)) for k in fam.block_indices())
    return _report(per_k, fam.k_max, "block")


def besov_log_norm_equiv(theta: FieldLike, a: float, fam: Optional[LPFamily] = None) -> NormReport:
    """(Σ_{j=1..k_max} j^{2a-1} ‖θ_j^≥‖²)^{1/2}."""
    a = _check_a(a)
    F = _mean_free(theta)
    fam = fam or family_for(F.grid)
    per_k = (j ** (2 * a - 1) * _energy(high_pass(F, j, fam)) for j in fam.block_indices())
    return _report(per_k, fam.k_max, "highpass")


def log_sobolev_sum(theta: FieldLike, a: float) -> NormReport:
    """((2π)^d Σ_{η≠0} log^{2a}(|η|+1) |θ̂(η)|²)^{1/2}, grouped into dyadic shells."""
    a = _check_a(a)
    F = as_spectral(theta)
    magnitude = F.grid.wavenumber_magnitude()
    weights = np.log1p(magnitude) ** (2 * a)
    weights.flat[0] = 0.0
    density = F.grid.volume * weights * np.abs(F.coeffs) ** 2
    shells = np.zeros(magnitude.shape, dtype=int)
    nonzero = magnitude > 0
    shells[nonzero] = np.floor(np.log2(magnitude[nonzero])).astype(int) + 1
    per_k = np.bincount(shells.ravel(), weights=density.ravel())[1:]
    return _report(per_k, int(shells.max()), "logsum")


def _torus_offsets(grid) -> np.ndarray:
    """Geodesic length of every grid shift s, as an array shaped like the grid."""
    h = grid.spacing
    axis = np.arange(grid.n)
    wrapped = np.minimum(axis, grid.n - axis) * h
    axes = np.meshgrid(*([wrapped] * grid.d), indexing="ij")
    return np.sqrt(sum(c * c for c in axes))


def gagliardo_log_seminorm(theta: FieldLike, a: float) -> float:
    """Quadrature of ∫∫ |θ(x)-θ(y)|² log^{2a-1}(1 + 1/|x-y|) / |x-y|^d, diagonal skipped.

    Uses Σ_x |θ(x) - θ(x-s)|² = 2(R(0) - R(s)) with R the circular
    autocorrelation, so the cost is one FFT per call.
    """
    a = _check_a(a)
    f = as_physical(theta)
    grid = f.grid
    if grid.n > GAGLIARDO_MAX_N:
        raise ResourceLimitError(
            f"Gagliardo quadrature is limited to n <= {GAGLIARDO_MAX_N}, got n={grid.n}"
        )
    spectrum = np.abs(np.fft.fftn(f.values)) ** 2
    autocorrelation = np.fft.ifftn(spectrum).real
    differences = np.maximum(2.0 * (autocorrelation.flat[0] - autocorrelation), 0.0)
    distance = _torus_offsets(grid)
    off_diagonal = distance > 0
    weight = np.zeros(grid.shape)
    r = distance[off_diagonal]
    weight[off_diagonal] = np.log1p(1.0 / r) ** (2 * a - 1) / r**grid.d
    total = grid.cell_volume**2 * float(np.sum(differences * weight))
    return math.sqrt(max(total, 0.0))


def homogeneous_sobolev_norm(theta: FieldLike, s: float) -> float:
    """((2π)^d Σ_{η≠0} |η|^{2s} |θ̂(η)|²)^{1/2}."""
    F = as_spectral(theta)
    magnitude = F.grid.wavenumber_magnitude()
    nonzero = magnitude > 0
    weights = np.zeros(magnitude.shape)
    weights[nonzero] = magnitude[nonzero] ** (2.0 * s)
    return math.sqrt(F.grid.volume * float(np.sum(weights * np.abs(F.coeffs) ** 2)))


def gradient_besov_norm(theta: FieldLike, a: float, fam: Optional[LPFamily] = None) -> NormReport:
    """‖∇θ‖_{B^{log,a}} = (Σ_k k^{2a} Σ_i ‖(∂_iθ)_k‖²)^{1/2}."""
    a = _check_a(a)
    F = as_spectral(theta)
    fam = fam or family_for(F.grid)
    components = gradient(F)
    per_k = (
        k ** (2 * a) * sum(_energy(c, fam.phi_hat(k)) for c in components)
        for k in fam.block_indices()
    )
    return _report(per_k, fam.k_max, "gradient")


def evaluate_norm(theta: FieldLike, params: BesovParams, fam: Optional[LPFamily] = None) -> NormReport:
    if params.flavor == "block":
        return besov_log_norm(theta, params.a, fam)
    if params.flavor == "highpass":
        return besov_log_norm_equiv(theta, params.a, fam)
    if params.flavor == "logsum":
        return log_sobolev_sum(theta, params.a)
    if params.flavor == "gradient":
        return gradient_besov_norm(theta, params.a, fam)
    value = gagliardo_log_seminorm(theta, params.a)
    return NormReport(value=value, k_max=0, flavor="gagliardo")


def compute_norms(
    theta: FieldLike,
    a: float,
    flavors: Iterable[str] = ("block", "highpass", "logsum"),
    fam: Optional[LPFamily] = None,
) -> Dict[str, NormReport]:
    """Evaluate each requested flavour; unknown names raise ``InvalidParameterError``."""
    reports: Dict[str, NormReport] = {}
    for name in flavors:
        name = name.strip()
        if not name:
            continue
        if name not in {"block", "highpass", "logsum", "gagliardo", "gradient"}:
            raise InvalidParameterError(f"unknown norm flavour '{name}'")
        reports[name] = evaluate_norm(theta, BesovParams(a=a, flavor=name), fam)
        logger.debug("Norm %s(a=%s) = %.6g", name, a, reports[name].value)
    return reports


__all__ = [
    "BesovParams",
    "NormReport",
    "besov_log_norm",
    "besov_log_norm_equiv",
    "log_sobolev_sum",
    "gagliardo_log_seminorm",
    "homogeneous_sobolev_norm",
    "gradient_besov_norm",
    "evaluate_norm",
    "compute_norms",
]
