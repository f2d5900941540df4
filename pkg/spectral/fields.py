"""Field containers: grid samples, Fourier coefficients and vector fields."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Tuple

import numpy as np

from errors import NonFiniteFieldError

from .grid import TorusGrid


@dataclass(frozen=True)
class PhysicalField:
    """Real samples of a scalar on the torus grid, shape ``grid.shape``."""

    grid: TorusGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.size != self.grid.size:
            raise ValueError(
                f"expected {self.grid.size} samples for grid n={self.grid.n} d={self.grid.d},"
                f" got {values.size}"
            )
        if not np.all(np.isfinite(values)):
            bad = int(np.sum(~np.isfinite(values)))
            raise NonFiniteFieldError(f"field samples must be finite, found {bad} NaN or inf values")
        object.__setattr__(self, "values", values.reshape(self.grid.shape))

    @property
    def mean(self) -> float:
        return float(self.values.mean())

    def scaled(self, factor: float) -> "PhysicalField":
        return replace(self, values=self.values * factor)

    def __add__(self, other: "PhysicalField") -> "PhysicalField":
        return replace(self, values=self.values + other.values)

    def __sub__(self, other: "PhysicalField") -> "PhysicalField":
        return replace(self, values=self.values - other.values)

    def __neg__(self) -> "PhysicalField":
        return replace(self, values=-self.values)


@dataclass(frozen=True)
class SpectralField:
    """Fourier coefficients θ̂(η) as averages of e^{-iη·x}θ(x), FFT ordering."""

    grid: TorusGrid
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.shape != self.grid.shape:
            raise ValueError(f"expected coefficient shape {self.grid.shape}, got {coeffs.shape}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def mean(self) -> complex:
        return complex(self.coeffs.flat[0])

    def multiply(self, multiplier: np.ndarray) -> "SpectralField":
        return replace(self, coeffs=self.coeffs * multiplier)

    def scaled(self, factor: float) -> "SpectralField":
        return replace(self, coeffs=self.coeffs * factor)

    def __add__(self, other: "SpectralField") -> "SpectralField":
        return replace(self, coeffs=self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        return replace(self, coeffs=self.coeffs - other.coeffs)

    def __neg__(self) -> "SpectralField":
        return replace(self, coeffs=-self.coeffs)

    @classmethod
    def zeros(cls, grid: TorusGrid) -> "SpectralField":
        return cls(grid=grid, coeffs=np.zeros(grid.shape, dtype=complex))


@dataclass(frozen=True)
class VectorField:
    """``d`` spectral components plus a divergence-free certificate."""

    components: Tuple[SpectralField, ...]
    divergence_free: bool = field(default=False)

    def __post_init__(self) -> None:
        components = tuple(self.components)
        if not components:
            raise ValueError("a vector field needs at least one component")
        grid = components[0].grid
        if len(components) != grid.d or any(c.grid != grid for c in components):
            raise ValueError("vector field components must match the grid dimension")
        object.__setattr__(self, "components", components)

    @property
    def grid(self) -> TorusGrid:
        return self.components[0].grid

    def stacked(self) -> np.ndarray:
        """Coefficients as an array of shape ``(d, *grid.shape)``."""
        return np.stack([c.coeffs for c in self.components])

    def scaled(self, factor: float) -> "VectorField":
        return VectorField(tuple(c.scaled(factor) for c in self.components), self.divergence_free)

    @classmethod
    def from_stacked(cls, grid: TorusGrid, coeffs: np.ndarray, divergence_free: bool = False) -> "VectorField":
        return cls(tuple(SpectralField(grid, c) for c in coeffs), divergence_free)


__all__ = ["PhysicalField", "SpectralField", "VectorField"]
