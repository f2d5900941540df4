"""Ordinary least-squares fits in transformed coordinates."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Sequence, Tuple

import numpy as np

from errors import PreconditionError


@dataclass(frozen=True)
class RateFit:
    """y ≈ slope·x + intercept; ``residual`` is the root-mean-square misfit."""

    abscissa: Tuple[float, ...]
    ordinate: Tuple[float, ...]
    slope: float
    intercept: float
    residual: float
    transform: str = "linear"
    extras: Dict[str, Any] = field(default_factory=dict)

    def predict(self, x: Any) -> np.ndarray:
        return self.slope * np.asarray(x, dtype=float) + self.intercept

    def as_dict(self) -> Dict[str, Any]:
        return {
            "abscissa": list(self.abscissa),
            "ordinate": list(self.ordinate),
            "slope": self.slope,
            "intercept": self.intercept,
            "residual": self.residual,
            "transform": self.transform,
            **self.extras,
        }


def fit_line(x: Sequence[float], y: Sequence[float], *, transform: str = "linear") -> RateFit:
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    if xs.size < 2 or np.ptp(xs) == 0.0:
        raise PreconditionError("a line fit needs at least two distinct abscissae")
    slope, intercept = np.polyfit(xs, ys, 1)
    residual = math.sqrt(float(np.mean((ys - (slope * xs + intercept)) ** 2)))
    return RateFit(tuple(xs.tolist()), tuple(ys.tolist()), float(slope), float(intercept), residual, transform)


def log_log_factor(kappa: float, t: float) -> float:
    """log(log(2 + 1/(κt)))."""
    return math.log(math.log(2.0 + 1.0 / (kappa * t)))


def fit_log_rate(errors: Sequence[float], kappas: Sequence[float], t: float) -> RateFit:
    """Regress log(error) on log(log(2 + 1/(κt))); the slope is compared with -a."""
    pairs = [(log_log_factor(k, t), math.log(e)) for e, k in zip(errors, kappas) if e > 0.0 and k > 0.0]
    if len(pairs) < 2:
        raise PreconditionError("rate fit needs at least two positive errors")
    xs, ys = zip(*pairs)
    return fit_line(xs, ys, transform="log(error) ~ log(log(2 + 1/(kappa t)))")


__all__ = ["RateFit", "fit_line", "fit_log_rate", "log_log_factor"]
