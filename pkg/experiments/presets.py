"""Initial data presets, each mean-free with ‖θ₀‖_∞ = 1."""

from __future__ import annotations

import logging
import math
from typing import Callable, Dict

import numpy as np

from errors import ConfigError
from filters import family_for
from spectral import PhysicalField, SpectralField, TorusGrid, forward_transform, inverse_transform, remove_mean

from .config import ExperimentConfig

logger = logging.getLogger(__name__)


def _normalised(grid: TorusGrid, values: np.ndarray) -> SpectralField:
    F = remove_mean(forward_transform(PhysicalField(grid, values)))
    peak = float(np.max(np.abs(inverse_transform(F).values)))
    if peak == 0.0:
        raise ConfigError("initial datum preset produced the zero field")
    return F.scaled(1.0 / peak)


def harmonic(grid: TorusGrid, mode: int = 4) -> SpectralField:
    """cos(mode · x₁)."""
    if not 0 < mode < grid.n // 2:
        raise ConfigError(f"harmonic mode {mode} is not resolved on n={grid.n}")
    return _normalised(grid, np.cos(mode * grid.coordinates()[0]))


def random_band_limited(grid: TorusGrid, band: int = 8, seed: int = 0) -> SpectralField:
    """Gaussian coefficients on 0 < |η| <= band, reproducible from ``seed``."""
    if not 0 < band < grid.n // 2:
        raise ConfigError(f"band {band} is not resolved on n={grid.n}")
    rng = np.random.default_rng(seed)
    magnitude = grid.wavenumber_magnitude()
    mask = (magnitude > 0) & (magnitude <= band)
    coeffs = (rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)) * mask
    values = np.real(np.fft.ifftn(coeffs)) * grid.size
    return _normalised(grid, values)


def checkerboard(grid: TorusGrid, cells: int = 4, generator: str = "smooth_bump") -> SpectralField:
    """Sign pattern of ``cells`` squares per axis, low-passed at a quarter of the grid frequency."""
    if cells % 2 or cells >= grid.n:
        raise ConfigError(f"checkerboard needs an even cell count below n={grid.n}, got {cells}")
    pattern = np.ones(grid.shape)
    for axis in grid.coordinates():
        pattern *= np.sign(np.sin(0.5 * cells * axis + 0.5 * math.pi / grid.n))
    fam = family_for(grid, generator)
    smoothed = forward_transform(PhysicalField(grid, pattern)).multiply(fam.psi_hat(max(fam.k_max - 2, 1)))
    return _normalised(grid, inverse_transform(smoothed).values)


PRESETS: Dict[str, Callable[[ExperimentConfig], SpectralField]] = {
    "harmonic": lambda cfg: harmonic(cfg.grid, cfg.mode),
    "random": lambda cfg: random_band_limited(cfg.grid, cfg.band, cfg.seed),
    "checkerboard": lambda cfg: checkerboard(cfg.grid, cfg.cells, cfg.generator),
}


def initial_datum(config: ExperimentConfig) -> SpectralField:
    try:
        builder = PRESETS[config.preset]
    except KeyError as exc:
        raise ConfigError(f"unknown preset '{config.preset}'") from exc
    theta0 = builder(config)
    logger.debug("Built %s preset on n=%d d=%d", config.preset, config.n, config.d)
    return theta0


__all__ = ["PRESETS", "checkerboard", "harmonic", "initial_datum", "random_band_limited"]
