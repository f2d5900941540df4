"""Discrete measures on the torus and the splitting of signed grid fields."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from errors import EmptyMeasureError, InvalidParameterError, PreconditionError
from filters.family import MEAN_TOLERANCE
from spectral import TorusGrid
from spectral.ops import FieldLike, as_physical

logger = logging.getLogger(__name__)

# grid values at or below this fraction of max|θ| carry no mass
SUPPORT_THRESHOLD = 1e-14
MASS_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Point masses ``masses[i]`` at ``points[i]``; ``points`` has shape ``(m, d)``."""

    points: np.ndarray
    masses: np.ndarray

    def __post_init__(self) -> None:
        points = np.asarray(self.points, dtype=float)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        masses = np.asarray(self.masses, dtype=float).ravel()
        if points.shape[0] != masses.shape[0]:
            raise InvalidParameterError(f"{points.shape[0]} points but {masses.shape[0]} masses")
        if np.any(masses < 0.0) or not np.all(np.isfinite(masses)):
            raise InvalidParameterError("masses must be finite and nonnegative")
        if masses.size == 0 or float(masses.sum()) <= 0.0:
            raise EmptyMeasureError("measure carries no mass")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "masses", masses)

    @property
    def size(self) -> int:
        return int(self.masses.size)

    @property
    def dimension(self) -> int:
        return int(self.points.shape[1])

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    def scaled(self, factor: float) -> "DiscreteMeasure":
        return DiscreteMeasure(self.points, self.masses * factor)


def signed_split(theta: FieldLike) -> Tuple[DiscreteMeasure, DiscreteMeasure]:
    """(θ⁺, θ⁻) as grid-cell point masses; ν is rescaled so both totals agree exactly."""
    f = as_physical(theta)
    values = f.values
    peak = float(np.max(np.abs(values)))
    if peak == 0.0:
        raise EmptyMeasureError("cannot split the zero field")
    if abs(float(values.mean())) > MEAN_TOLERANCE * peak:
        raise PreconditionError(f"signed split needs a mean-free field (mean {values.mean():.3e})")
    grid = f.grid
    points = grid.points()
    flat = values.ravel()
    cutoff = SUPPORT_THRESHOLD * peak
    positive = flat > cutoff
    negative = flat < -cutoff
    if not positive.any() or not negative.any():
        raise EmptyMeasureError("mean-free field has an empty positive or negative part")
    mu = DiscreteMeasure(points[positive], flat[positive] * grid.cell_volume)
    nu = DiscreteMeasure(points[negative], -flat[negative] * grid.cell_volume)
    imbalance = abs(mu.total_mass - nu.total_mass) / mu.total_mass
    logger.debug("signed split: %d + %d points, relative imbalance %.3e", mu.size, nu.size, imbalance)
    if imbalance > MASS_TOLERANCE:
        logger.warning("signed split mass imbalance %.3e exceeds %.0e before rescaling", imbalance, MASS_TOLERANCE)
    return mu, nu.scaled(mu.total_mass / nu.total_mass)


def coarsen(measure: DiscreteMeasure, grid: TorusGrid, factor: int) -> Tuple[DiscreteMeasure, float]:
    """Aggregate the mass of every ``factor``^d box of grid cells at the box centre.

    Returns the coarse measure and the coarsening radius, the half diagonal of
    one box; total mass is preserved.
    """
    if factor < 1 or grid.n % factor:
        raise InvalidParameterError(f"coarsening factor {factor} must divide n={grid.n}")
    if factor == 1:
        return measure, 0.0
    h = grid.spacing
    index = np.rint(measure.points / h).astype(int) % grid.n
    boxes = index // factor
    keys, inverse = np.unique(boxes, axis=0, return_inverse=True)
    masses = np.bincount(inverse.ravel(), weights=measure.masses, minlength=keys.shape[0])
    centres = (keys * factor + 0.5 * (factor - 1)) * h
    radius = 0.5 * factor * h * math.sqrt(grid.d)
    logger.debug("coarsened %d points to %d (factor %d)", measure.size, keys.shape[0], factor)
    return DiscreteMeasure(centres, masses), radius


__all__ = ["DiscreteMeasure", "coarsen", "signed_split"]
