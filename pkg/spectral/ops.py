"""Transforms and spectral operators on the torus grid."""

from __future__ import annotations

import logging
import math
from typing import Tuple, Union

import numpy as np

from errors import InvalidExponentError, SymmetryViolationError

from .fields import PhysicalField, SpectralField, VectorField
from .grid import TorusGrid

logger = logging.getLogger(__name__)

FieldLike = Union[PhysicalField, SpectralField]

HERMITIAN_TOLERANCE = 1e-10
DIVERGENCE_TOLERANCE = 1e-12


def forward_transform(f: PhysicalField) -> SpectralField:
    """Fourier coefficients as grid averages: θ̂(η) = n^{-d} Σ_x θ(x) e^{-iη·x}."""
    grid = f.grid
    return SpectralField(grid, np.fft.fftn(f.values) / grid.size)


def _reflected(coeffs: np.ndarray) -> np.ndarray:
    """Coefficients re-indexed at -η (mod n on every axis)."""
    axes = tuple(range(coeffs.ndim))
    return np.roll(np.flip(coeffs, axis=axes), shift=(1,) * coeffs.ndim, axis=axes)


def hermitian_defect(F: SpectralField) -> float:
    """max |F̂(η) - conj F̂(-η)|, zero for coefficients of a real field."""
    if not F.coeffs.size:
        return 0.0
    return float(np.max(np.abs(F.coeffs - np.conj(_reflected(F.coeffs)))))


def inverse_transform(F: SpectralField) -> PhysicalField:
    """Real field Σ_η θ̂(η) e^{iη·x}; rejects coefficients that are not Hermitian."""
    scale = float(np.max(np.abs(F.coeffs))) if F.coeffs.size else 0.0
    defect = hermitian_defect(F)
    if defect > HERMITIAN_TOLERANCE * max(scale, 1e-300):
        raise SymmetryViolationError(
            f"coefficients are not Hermitian (defect {defect:.3e} relative to max {scale:.3e})"
        )
    values = np.fft.ifftn(F.coeffs * F.grid.size).real
    return PhysicalField(F.grid, values)


def as_spectral(f: FieldLike) -> SpectralField:
    return f if isinstance(f, SpectralField) else forward_transform(f)


def as_physical(f: FieldLike) -> PhysicalField:
    return f if isinstance(f, PhysicalField) else inverse_transform(f)


def _check_exponent(q: float, lower: float = 1.0) -> float:
    q = float(q)
    if math.isnan(q) or q < lower:
        raise InvalidExponentError(f"exponent must be in [{lower:g}, inf], got {q}")
    return q


def lq_norm(f: FieldLike, q: float) -> float:
    """Rectangle-rule L^q norm; ``q = inf`` gives the grid maximum of |f|."""
    q = _check_exponent(q)
    values = as_physical(f).values
    if math.isinf(q):
        return float(np.max(np.abs(values))) if values.size else 0.0
    cell = f.grid.cell_volume
    if q == 2.0:
        return float(math.sqrt(cell * np.sum(values * values)))
    return float((cell * np.sum(np.abs(values) ** q)) ** (1.0 / q))


def parseval_l2(F: SpectralField) -> float:
    """((2π)^d Σ_η |θ̂(η)|²)^{1/2}."""
    return float(math.sqrt(F.grid.volume * np.sum(np.abs(F.coeffs) ** 2)))


def nyquist_free_wavenumbers(grid: TorusGrid) -> Tuple[np.ndarray, ...]:
    """Wave numbers with the unpaired η_i = -n/2 entries set to zero."""
    half = grid.n // 2
    return tuple(np.where(k == -half, 0.0, k) for k in grid.wavenumbers())


def gradient(F: SpectralField) -> Tuple[SpectralField, ...]:
    """Components iη_i θ̂(η), Nyquist mode of axis i zeroed."""
    return tuple(F.multiply(1j * k) for k in nyquist_free_wavenumbers(F.grid))


def laplacian(F: SpectralField) -> SpectralField:
    magnitude = F.grid.wavenumber_magnitude()
    return F.multiply(-(magnitude**2))


def divergence(v: VectorField) -> SpectralField:
    ks = nyquist_free_wavenumbers(v.grid)
    coeffs = sum(1j * k * c.coeffs for k, c in zip(ks, v.components))
    return SpectralField(v.grid, coeffs)


def divergence_residual(v: VectorField) -> float:
    """max |η·û(η)| relative to max |û|; zero for the zero field."""
    scale = float(np.max(np.abs(v.stacked())))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(divergence(v).coeffs))) / scale


def certify(v: VectorField) -> VectorField:
    """Copy of ``v`` carrying the divergence-free certificate when it passes."""
    residual = divergence_residual(v)
    if residual <= DIVERGENCE_TOLERANCE:
        return VectorField(v.components, divergence_free=True)
    logger.warning("Divergence residual %.3e exceeds certificate tolerance", residual)
    return VectorField(v.components, divergence_free=False)


def _zero_nyquist(coeffs: np.ndarray, grid: TorusGrid) -> np.ndarray:
    mask = np.ones(grid.shape, dtype=bool)
    for k in grid.wavenumbers():
        mask &= k != -(grid.n // 2)
    return coeffs * mask


def project_divergence_free(v: VectorField) -> VectorField:
    """Leray projection û - η(η·û)/|η|², certificate attached."""
    grid = v.grid
    ks = grid.wavenumbers()
    magnitude_sq = grid.wavenumber_magnitude() ** 2
    safe = np.where(magnitude_sq == 0.0, 1.0, magnitude_sq)
    stacked = np.stack([_zero_nyquist(c.coeffs, grid) for c in v.components])
    flux = sum(k * c for k, c in zip(ks, stacked)) / safe
    projected = np.stack([c - k * flux for k, c in zip(ks, stacked)])
    return certify(VectorField.from_stacked(grid, projected))


def remove_mean(f: FieldLike) -> FieldLike:
    """Zero the η = 0 coefficient; other coefficients are untouched."""
    F = as_spectral(f)
    coeffs = F.coeffs.copy()
    coeffs.flat[0] = 0.0
    out = SpectralField(F.grid, coeffs)
    return out if isinstance(f, SpectralField) else inverse_transform(out)


def dealias_mask(grid: TorusGrid) -> np.ndarray:
    mask = np.ones(grid.shape, dtype=bool)
    for k in grid.wavenumbers():
        mask &= np.abs(k) <= grid.n / 3.0
    return mask


def dealias(F: SpectralField) -> SpectralField:
    """Two-thirds rule: zero every mode with some |η_i| > n/3."""
    return F.multiply(dealias_mask(F.grid))


def dealiased_product(f: SpectralField, g: SpectralField) -> SpectralField:
    """Pseudo-spectral product f·g followed by :func:`dealias`."""
    values = inverse_transform(f).values * inverse_transform(g).values
    return dealias(forward_transform(PhysicalField(f.grid, values)))


def inner_product(F: FieldLike, G: FieldLike) -> float:
    """L² pairing ∫ f g = (2π)^d Re Σ F̂ conj Ĝ."""
    a, b = as_spectral(F), as_spectral(G)
    return float(a.grid.volume * np.real(np.sum(a.coeffs * np.conj(b.coeffs))))


def vector_values(v: VectorField) -> np.ndarray:
    """Physical samples of ``v`` stacked as ``(d, *grid.shape)``."""
    return np.stack([inverse_transform(c).values for c in v.components])


def vector_from_values(grid: TorusGrid, values: np.ndarray) -> VectorField:
    return VectorField(
        tuple(forward_transform(PhysicalField(grid, component)) for component in values)
    )


__all__ = [
    "FieldLike",
    "forward_transform",
    "inverse_transform",
    "hermitian_defect",
    "as_spectral",
    "as_physical",
    "lq_norm",
    "parseval_l2",
    "nyquist_free_wavenumbers",
    "gradient",
    "laplacian",
    "divergence",
    "divergence_residual",
    "certify",
    "project_divergence_free",
    "remove_mean",
    "dealias_mask",
    "dealias",
    "dealiased_product",
    "inner_product",
    "vector_values",
    "vector_from_values",
]
