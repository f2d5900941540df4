"""Diagnostics sampled along a simulation, including time-integral accumulators."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from errors import InvalidParameterError
from filters import LPFamily
from norms import besov_log_norm, besov_log_norm_equiv, gradient_besov_norm, homogeneous_sobolev_norm, log_sobolev_sum
from spectral import SpectralField, lq_norm, parseval_l2

from .velocity import VelocityModel, gradient_lp_norm, sample_velocity

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ObserverContext:
    kappa: float
    model: VelocityModel
    family: LPFamily


Integrand = Callable[[SpectralField, float, ObserverContext, Dict[str, float]], float]


def _param(params: Dict[str, float], key: str, name: str) -> float:
    if key not in params:
        raise InvalidParameterError(f"diagnostic '{name}' needs parameter '{key}='")
    return params[key]


def _instant(name: str) -> Dict[str, Integrand]:
    return {
        "l2": lambda th, t, ctx, prm: parseval_l2(th),
        "linf": lambda th, t, ctx, prm: lq_norm(th, math.inf),
        "lq": lambda th, t, ctx, prm: lq_norm(th, _param(prm, "q", name)),
        "mean": lambda th, t, ctx, prm: float(th.mean.real),
        "hminus1": lambda th, t, ctx, prm: homogeneous_sobolev_norm(th, -1.0),
        "hs": lambda th, t, ctx, prm: homogeneous_sobolev_norm(th, _param(prm, "s", name)),
        "grad_l2": lambda th, t, ctx, prm: homogeneous_sobolev_norm(th, 1.0),
        "besov": lambda th, t, ctx, prm: besov_log_norm(th, _param(prm, "a", name), ctx.family).value,
        "besov_equiv": lambda th, t, ctx, prm: besov_log_norm_equiv(th, _param(prm, "a", name), ctx.family).value,
        "logsum": lambda th, t, ctx, prm: log_sobolev_sum(th, _param(prm, "a", name)).value,
        "grad_besov": lambda th, t, ctx, prm: gradient_besov_norm(th, _param(prm, "a", name), ctx.family).value,
        "grad_u_norm": lambda th, t, ctx, prm: _grad_u(th, t, ctx, _param(prm, "p", name)),
    }


def _grad_u(theta: SpectralField, t: float, ctx: ObserverContext, p: float) -> float:
    return gradient_lp_norm(sample_velocity(ctx.model, t, theta.grid), p)


def _accumulators(name: str) -> Dict[str, Integrand]:
    return {
        "dissipation": lambda th, t, ctx, prm: 2.0 * ctx.kappa * homogeneous_sobolev_norm(th, 1.0) ** 2,
        "besov_dissipation": lambda th, t, ctx, prm: ctx.kappa
        * gradient_besov_norm(th, _param(prm, "a", name), ctx.family).value ** 2,
        "grad_u": lambda th, t, ctx, prm: _grad_u(th, t, ctx, _param(prm, "p", name)),
    }


@dataclass(frozen=True)
class Diagnostic:
    """One named column; accumulators integrate their integrand in time by the trapezoid rule."""

    name: str
    integrand: Integrand
    params: Tuple[Tuple[str, float], ...] = ()
    accumulator: bool = False

    def evaluate(self, theta: SpectralField, t: float, ctx: ObserverContext) -> float:
        return float(self.integrand(theta, t, ctx, dict(self.params)))


def _parse_params(name: str, text: str) -> Dict[str, float]:
    params: Dict[str, float] = {}
    for chunk in filter(None, (part.strip() for part in text.split(";"))):
        if "=" not in chunk:
            raise InvalidParameterError(f"diagnostic '{name}' has malformed parameter '{chunk}'")
        key, value = chunk.split("=", 1)
        try:
            params[key.strip()] = float(value.strip())
        except ValueError as exc:
            raise InvalidParameterError(f"diagnostic '{name}' has non-numeric '{chunk}'") from exc
    return params


def parse_diagnostic(token: str) -> Diagnostic:
    """Parse ``name`` or ``name:key=value`` (e.g. ``besov:a=0.9``, ``grad_u:p=inf``)."""
    token = token.strip()
    base, _, rest = token.partition(":")
    params = _parse_params(token, rest)
    accumulators = _accumulators(token)
    if base in accumulators:
        return Diagnostic(token, accumulators[base], tuple(sorted(params.items())), accumulator=True)
    instants = _instant(token)
    if base in instants:
        return Diagnostic(token, instants[base], tuple(sorted(params.items())))
    known = ", ".join(sorted({*accumulators, *instants}))
    raise InvalidParameterError(f"unknown diagnostic '{base}'; choose from {known}")


def parse_diagnostics(text: str) -> Tuple[Diagnostic, ...]:
    """Split a comma-separated list such as ``l2,linf,besov:a=0.9,hminus1``."""
    return tuple(parse_diagnostic(token) for token in text.split(",") if token.strip())


@dataclass(frozen=True)
class ObserverSet:
    """Diagnostics recorded every ``stride`` steps and at the final time."""

    diagnostics: Tuple[Diagnostic, ...] = ()
    stride: int = 1
    keep_snapshots: bool = False

    def __post_init__(self) -> None:
        if self.stride < 1:
            raise InvalidParameterError(f"observer stride must be >= 1, got {self.stride}")

    @classmethod
    def parse(cls, text: str, *, stride: int = 1, keep_snapshots: bool = False) -> "ObserverSet":
        return cls(parse_diagnostics(text), stride, keep_snapshots)

    @property
    def names(self) -> List[str]:
        return [d.name for d in self.diagnostics]

    @property
    def accumulators(self) -> Tuple[Diagnostic, ...]:
        return tuple(d for d in self.diagnostics if d.accumulator)

    def wants(self, step: int, final: bool) -> bool:
        return final or step % self.stride == 0


@dataclass
class TimeSeries:
    """Sampled diagnostics of one run plus its conservation residuals."""

    times: List[float] = field(default_factory=list)
    columns: Dict[str, List[float]] = field(default_factory=dict)
    snapshots: List[SpectralField] = field(default_factory=list)
    residuals: Dict[str, float] = field(default_factory=dict)
    steps: int = 0
    dt: float = 0.0

    def append(self, t: float, values: Dict[str, float], snapshot: Optional[SpectralField] = None) -> None:
        self.times.append(float(t))
        for name, value in values.items():
            self.columns.setdefault(name, []).append(float(value))
        if snapshot is not None:
            self.snapshots.append(snapshot)

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise KeyError(f"no diagnostic '{name}' in series (have {', '.join(self.columns)})")
        return np.asarray(self.columns[name])

    @property
    def final(self) -> Dict[str, float]:
        return {name: values[-1] for name, values in self.columns.items() if values}

    def rows(self) -> List[Dict[str, float]]:
        names = list(self.columns)
        return [
            {"t": t, **{name: self.columns[name][i] for name in names}}
            for i, t in enumerate(self.times)
        ]

    def as_dict(self) -> Dict[str, Any]:
        return {
            "times": list(self.times),
            "columns": {k: list(v) for k, v in self.columns.items()},
            "residuals": dict(self.residuals),
            "steps": self.steps,
            "dt": self.dt,
        }


__all__ = [
    "Diagnostic",
    "ObserverContext",
    "ObserverSet",
    "TimeSeries",
    "parse_diagnostic",
    "parse_diagnostics",
]
