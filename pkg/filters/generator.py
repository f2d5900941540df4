"""Radial generator profiles for the dyadic partition of unity."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

from errors import InvalidGeneratorError

logger = logging.getLogger(__name__)

Profile = Callable[[np.ndarray], np.ndarray]


def _q(s: np.ndarray) -> np.ndarray:
    positive = s > 0.0
    safe = np.where(positive, s, 1.0)
    return np.where(positive, np.exp(-1.0 / safe), 0.0)


def smooth_bump(r: np.ndarray) -> np.ndarray:
    """C^∞ transition p(r) = q(2-2r) / (q(2-2r) + q(2r-1)), q(s) = e^{-1/s} for s > 0."""
    r = np.asarray(r, dtype=float)
    upper = _q(2.0 - 2.0 * r)
    lower = _q(2.0 * r - 1.0)
    # the denominator never vanishes: one of the two arguments is always >= 1/2
    return upper / (upper + lower)


def raised_cosine(r: np.ndarray) -> np.ndarray:
    """C^1 transition 1/2 (1 + cos(π(2r-1))) on [1/2, 1]."""
    r = np.asarray(r, dtype=float)
    middle = 0.5 * (1.0 + np.cos(np.pi * (2.0 * r - 1.0)))
    return np.where(r <= 0.5, 1.0, np.where(r >= 1.0, 0.0, middle))


@dataclass(frozen=True)
class GeneratorSpec:
    """Named profile p with p = 1 on [0, 1/2], p = 0 on [1, ∞), decreasing in between."""

    name: str
    profile: Profile

    def __call__(self, r: np.ndarray) -> np.ndarray:
        return self.profile(np.asarray(r, dtype=float))

    def validate(self, samples: int = 2049) -> None:
        """Raise :class:`InvalidGeneratorError` unless the profile has the required shape."""
        flat_one = np.linspace(0.0, 0.5, samples)
        flat_zero = np.linspace(1.0, 4.0, samples)
        transition = np.linspace(0.5, 1.0, samples)

        try:
            ones = self(flat_one)
            zeros = self(flat_zero)
            values = self(transition)
        except Exception as exc:
            raise InvalidGeneratorError(f"profile '{self.name}' could not be evaluated: {exc}") from exc

        for label, arr in (("[0, 1/2]", ones), ("[1, 4]", zeros), ("[1/2, 1]", values)):
            if arr.shape != (samples,) or not np.all(np.isfinite(arr)):
                raise InvalidGeneratorError(f"profile '{self.name}' is not finite on {label}")
        if not np.all(ones == 1.0):
            raise InvalidGeneratorError(f"profile '{self.name}' must equal 1 on [0, 1/2]")
        if not np.all(zeros == 0.0):
            raise InvalidGeneratorError(f"profile '{self.name}' must vanish on [1, inf)")
        if np.any(values < 0.0) or np.any(values > 1.0):
            raise InvalidGeneratorError(f"profile '{self.name}' leaves [0, 1]")
        # e^{-1/s} underflows next to the endpoints, so only interior plateaus are rejected
        if np.any(np.diff(values) > 0.0) or not 0.0 < float(self(np.array([0.75]))[0]) < 1.0:
            raise InvalidGeneratorError(f"profile '{self.name}' is not decreasing on (1/2, 1)")
        logger.debug("Generator profile '%s' validated on %d samples", self.name, samples)


GENERATORS: Dict[str, GeneratorSpec] = {
    "smooth_bump": GeneratorSpec("smooth_bump", smooth_bump),
    "cosine": GeneratorSpec("cosine", raised_cosine),
}


def get_generator(name: str = "smooth_bump") -> GeneratorSpec:
    try:
        return GENERATORS[name]
    except KeyError as exc:
        raise InvalidGeneratorError(
            f"unknown generator '{name}'; choose from {', '.join(sorted(GENERATORS))}"
        ) from exc


__all__ = ["GeneratorSpec", "GENERATORS", "get_generator", "smooth_bump", "raised_cosine"]
