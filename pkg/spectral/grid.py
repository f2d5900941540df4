"""Uniform grids on the flat torus [0, 2π)^d."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class TorusGrid(BaseModel):
    """Uniform tensor grid with ``n`` points per axis on the ``d``-torus."""

    model_config = ConfigDict(frozen=True)

    d: int = Field(..., ge=1, le=2, description="Spatial dimension (1 or 2)")
    n: int = Field(..., ge=8, description="Points per axis, a power of two")

    @field_validator("n")
    @classmethod
    def _power_of_two(cls, value: int) -> int:
        if value & (value - 1):
            raise ValueError(f"n must be a power of two, got {value}")
        return value

    @property
    def spacing(self) -> float:
        return 2.0 * math.pi / self.n

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.n,) * self.d

    @property
    def size(self) -> int:
        return self.n**self.d

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.d

    @property
    def volume(self) -> float:
        return (2.0 * math.pi) ** self.d

    def coordinates(self) -> Tuple[np.ndarray, ...]:
        """Meshed coordinate arrays x_i = 2π j/n, ``indexing="ij"``."""
        return _coordinates(self.d, self.n)

    def points(self) -> np.ndarray:
        """All grid points as an ``(n^d, d)`` array in row-major order."""
        return np.stack([axis.ravel() for axis in self.coordinates()], axis=-1)

    def wavenumbers(self) -> Tuple[np.ndarray, ...]:
        """Integer wave numbers η_i per axis in FFT ordering, meshed."""
        return _wavenumbers(self.d, self.n)

    def wavenumber_magnitude(self) -> np.ndarray:
        """|η| at every resolved mode."""
        return _magnitude(self.d, self.n)

    def refine(self, factor: int = 2) -> "TorusGrid":
        return TorusGrid(d=self.d, n=self.n * factor)


def _readonly(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@lru_cache(maxsize=32)
def _coordinates(d: int, n: int) -> Tuple[np.ndarray, ...]:
    axis = 2.0 * np.pi * np.arange(n) / n
    return tuple(_readonly(c) for c in np.meshgrid(*([axis] * d), indexing="ij"))


@lru_cache(maxsize=32)
def _wavenumbers(d: int, n: int) -> Tuple[np.ndarray, ...]:
    axis = np.fft.fftfreq(n, d=1.0 / n)
    return tuple(_readonly(k) for k in np.meshgrid(*([axis] * d), indexing="ij"))


@lru_cache(maxsize=32)
def _magnitude(d: int, n: int) -> np.ndarray:
    ks = _wavenumbers(d, n)
    return _readonly(np.sqrt(sum(k * k for k in ks)))


__all__ = ["TorusGrid"]
