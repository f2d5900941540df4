"""Logarithmic transport cost on the torus."""

from __future__ import annotations

import math
from typing import Union

import numpy as np

from errors import InvalidParameterError

ArrayLike = Union[float, np.ndarray]

PERIOD = 2.0 * math.pi


def _check_delta(delta: float) -> float:
    if not delta > 0.0:
        raise InvalidParameterError(f"cost scale delta must be > 0, got {delta}")
    return float(delta)


def log_cost(z: ArrayLike, delta: float) -> ArrayLike:
    """c_δ(z) = log(z/δ + 1); concave, increasing, c_δ(0) = 0."""
    delta = _check_delta(delta)
    z = np.asarray(z, dtype=float)
    if np.any(z < 0.0):
        raise InvalidParameterError("distances must be >= 0")
    out = np.log1p(z / delta)
    return float(out) if out.ndim == 0 else out


def torus_distance(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Geodesic distance on [0, 2π)^d; the last axis holds the coordinates."""
    diff = np.abs(np.asarray(x, dtype=float) - np.asarray(y, dtype=float)) % PERIOD
    diff = np.minimum(diff, PERIOD - diff)
    return np.sqrt(np.sum(diff * diff, axis=-1))


def _as_points(points: np.ndarray) -> np.ndarray:
    array = np.asarray(points, dtype=float)
    return array.reshape(-1, 1) if array.ndim == 1 else array


def cost_matrix(points_a: np.ndarray, points_b: np.ndarray, delta: float) -> np.ndarray:
    """d_δ(x_i, y_j) = c_δ(|x_i - y_j|_torus) for every pair."""
    a = _as_points(points_a)
    b = _as_points(points_b)
    return np.asarray(log_cost(torus_distance(a[:, None, :], b[None, :, :]), delta))


__all__ = ["PERIOD", "cost_matrix", "log_cost", "torus_distance"]
