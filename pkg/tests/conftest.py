"""Shared grids and fields."""

from __future__ import annotations

import numpy as np
import pytest

from spectral import PhysicalField, SpectralField, TorusGrid, forward_transform, remove_mean


@pytest.fixture
def line64() -> TorusGrid:
    return TorusGrid(d=1, n=64)


@pytest.fixture
def plane32() -> TorusGrid:
    return TorusGrid(d=2, n=32)


def cosine(grid: TorusGrid, mode: int = 4, axis: int = 0) -> SpectralField:
    """cos(mode · x_axis) as spectral coefficients."""
    return forward_transform(PhysicalField(grid, np.cos(mode * grid.coordinates()[axis])))


def random_field(grid: TorusGrid, seed: int = 0) -> SpectralField:
    rng = np.random.default_rng(seed)
    return remove_mean(forward_transform(PhysicalField(grid, rng.standard_normal(grid.shape))))


@pytest.fixture
def cos4(line64: TorusGrid) -> SpectralField:
    return cosine(line64, 4)
