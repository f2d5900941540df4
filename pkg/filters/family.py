"""Dyadic Littlewood–Paley family realised as Fourier multipliers."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Tuple

import numpy as np

from errors import BlockIndexError, PreconditionError, UndefinedRatioError
from spectral import PhysicalField, SpectralField, TorusGrid, inverse_transform, lq_norm
from spectral.ops import FieldLike, as_spectral

from .generator import GeneratorSpec, get_generator

logger = logging.getLogger(__name__)

MEAN_TOLERANCE = 1e-12


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class LPFamily:
    """Low-pass multipliers ψ̂_k(η) = p(2^{-k}|η|); blocks are φ̂_k = ψ̂_k - ψ̂_{k-1}.

    ``psi`` holds every ψ̂_k up to the saturation index after which ψ̂_k ≡ 1 on
    the grid, so multipliers are available for any k ≥ 0.
    """

    grid: TorusGrid
    generator: GeneratorSpec
    k_max: int
    psi: Tuple[np.ndarray, ...]

    @property
    def saturation(self) -> int:
        return len(self.psi) - 1

    def psi_hat(self, k: int) -> np.ndarray:
        if k < 0:
            raise BlockIndexError(f"low-pass index must be >= 0, got {k}")
        return self.psi[min(k, self.saturation)]

    def phi_hat(self, k: int) -> np.ndarray:
        """φ̂_k(η) = p(2^{-k}|η|) - p(2^{-k+1}|η|) for any k >= 0."""
        if k < 0:
            raise BlockIndexError(f"block index must be >= 0, got {k}")
        return _phi(self, k)

    def block_indices(self) -> range:
        return range(1, self.k_max + 1)

    def check_block_index(self, k: int, *, lower: int = 1) -> None:
        if not lower <= k <= self.k_max:
            raise BlockIndexError(f"block index {k} outside [{lower}, {self.k_max}]")


@lru_cache(maxsize=512)
def _phi(fam: LPFamily, k: int) -> np.ndarray:
    if k == 0:
        previous = fam.generator(2.0 * fam.grid.wavenumber_magnitude())
    else:
        previous = fam.psi_hat(k - 1)
    return _readonly(fam.psi_hat(k) - previous)


def _k_max(grid: TorusGrid) -> int:
    return int(math.floor(math.log2(grid.n / 2)))


@lru_cache(maxsize=32)
def build_family(spec: GeneratorSpec, grid: TorusGrid) -> LPFamily:
    """Evaluate the dyadic multipliers of ``spec`` on every resolved mode of ``grid``."""
    spec.validate()
    magnitude = grid.wavenumber_magnitude()
    top = float(magnitude.max())
    # ψ̂_k ≡ 1 once 2^{-k}·max|η| <= 1/2
    saturation = max(_k_max(grid), int(math.ceil(math.log2(2.0 * top))) if top > 0 else 0)
    psi = tuple(_readonly(spec(magnitude / 2.0**k)) for k in range(saturation + 1))
    fam = LPFamily(grid=grid, generator=spec, k_max=_k_max(grid), psi=psi)
    logger.info(
        "Built '%s' family on n=%d d=%d with k_max=%d (saturation %d)",
        spec.name,
        grid.n,
        grid.d,
        fam.k_max,
        saturation,
    )
    return fam


def family_for(grid: TorusGrid, generator: str = "smooth_bump") -> LPFamily:
    return build_family(get_generator(generator), grid)


def _require_mean_free(F: SpectralField) -> None:
    scale = float(np.max(np.abs(F.coeffs)))
    if abs(F.mean) > MEAN_TOLERANCE * scale:
        raise PreconditionError(f"field must be mean-free (mean {abs(F.mean):.3e})")


def block(theta: FieldLike, k: int, fam: LPFamily) -> SpectralField:
    """θ_k = θ ∗ φ_k for 1 <= k <= k_max."""
    fam.check_block_index(k)
    return as_spectral(theta).multiply(fam.phi_hat(k))


def high_pass(theta: FieldLike, k: int, fam: LPFamily) -> SpectralField:
    """θ_k^≥ = θ - θ ∗ ψ_{k-1} for mean-free θ."""
    fam.check_block_index(k)
    F = as_spectral(theta)
    _require_mean_free(F)
    return F.multiply(1.0 - fam.psi_hat(k - 1))


def low_pass(theta: FieldLike, k: int, fam: LPFamily) -> SpectralField:
    """θ_k^≤ = θ ∗ ψ_k for 0 <= k <= k_max."""
    fam.check_block_index(k, lower=0)
    return as_spectral(theta).multiply(fam.psi_hat(k))


@dataclass(frozen=True)
class BlockSequence:
    """Blocks θ_1, ..., θ_{k_max} of one field."""

    family: LPFamily
    blocks: Tuple[SpectralField, ...]

    def __iter__(self) -> Iterator[SpectralField]:
        return iter(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __getitem__(self, k: int) -> SpectralField:
        self.family.check_block_index(k)
        return self.blocks[k - 1]

    def reconstruct(self) -> SpectralField:
        coeffs = np.sum([b.coeffs for b in self.blocks], axis=0)
        return SpectralField(self.family.grid, coeffs)

    def energies(self) -> np.ndarray:
        """‖θ_k‖²_{L²} for k = 1..k_max."""
        volume = self.family.grid.volume
        return np.array([volume * float(np.sum(np.abs(b.coeffs) ** 2)) for b in self.blocks])

    def square_function(self) -> PhysicalField:
        """Pointwise (Σ_k θ_k(x)²)^{1/2}."""
        total = np.zeros(self.family.grid.shape)
        for b in self.blocks:
            total += inverse_transform(b).values ** 2
        return PhysicalField(self.family.grid, np.sqrt(total))


def decompose(theta: FieldLike, fam: LPFamily) -> BlockSequence:
    F = as_spectral(theta)
    return BlockSequence(fam, tuple(F.multiply(fam.phi_hat(k)) for k in fam.block_indices()))


def almost_orthogonality_check(fam: LPFamily) -> float:
    """Largest defect of φ̂_k = φ̂_k(φ̂_{k-1} + φ̂_k + φ̂_{k+1}) and of φ̂_k φ̂_j = 0 for |k-j| >= 2."""
    residual = 0.0
    for k in fam.block_indices():
        neighbours = fam.phi_hat(k - 1) + fam.phi_hat(k) + fam.phi_hat(k + 1)
        phi_k = fam.phi_hat(k)
        residual = max(residual, float(np.max(np.abs(phi_k - phi_k * neighbours))))
        for j in range(k + 2, fam.k_max + 1):
            residual = max(residual, float(np.max(np.abs(phi_k * fam.phi_hat(j)))))
    logger.debug("Almost-orthogonality residual %.3e on k_max=%d", residual, fam.k_max)
    return residual


def partition_of_unity_defect(fam: LPFamily) -> float:
    """max |Σ_{k=1..k_max} φ̂_k(η) - 1| over 1 <= |η| <= 2^{k_max - 1}."""
    magnitude = fam.grid.wavenumber_magnitude()
    resolved = (magnitude >= 1.0) & (magnitude <= 2.0 ** (fam.k_max - 1))
    total = np.sum([fam.phi_hat(k) for k in fam.block_indices()], axis=0)
    return float(np.max(np.abs(total[resolved] - 1.0)))


def littlewood_paley_ratio(theta: FieldLike, q: float, fam: LPFamily) -> float:
    """‖(Σ_k θ_k²)^{1/2}‖_{L^q} / ‖θ‖_{L^q}."""
    denominator = lq_norm(as_spectral(theta), q)
    if denominator == 0.0:
        raise UndefinedRatioError("Littlewood–Paley ratio is undefined for the zero field")
    return lq_norm(decompose(theta, fam).square_function(), q) / denominator


__all__ = [
    "LPFamily",
    "BlockSequence",
    "build_family",
    "family_for",
    "block",
    "high_pass",
    "low_pass",
    "decompose",
    "almost_orthogonality_check",
    "partition_of_unity_defect",
    "littlewood_paley_ratio",
]
