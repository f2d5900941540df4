"""KR distance D_δ between grid fields and the L¹ transport interpolation check."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Literal, Optional, Sequence

import numpy as np

from errors import InvalidParameterError, PreconditionError
from filters import LPFamily
from norms import InequalityReport, besov_log_norm
from spectral import lq_norm
from spectral.ops import FieldLike, as_physical

from .cost import log_cost
from .entropic import entropic_ot
from .exact import exact_ot
from .measures import coarsen, signed_split

logger = logging.getLogger(__name__)

COARSE_SUPPORT = 2048


@dataclass(frozen=True)
class KRDistance:
    """D_δ(θ₁, θ₂) together with how it was computed."""

    value: float
    method: str
    delta: float
    gap: float = 0.0
    source_support: int = 0
    target_support: int = 0
    coarsening_factor: int = 1
    coarsening_radius: float = 0.0
    extras: Dict[str, Any] = field(default_factory=dict)

    def __float__(self) -> float:
        return self.value

    def as_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "method": self.method,
            "delta": self.delta,
            "gap": self.gap,
            "source_support": self.source_support,
            "target_support": self.target_support,
            "coarsening_factor": self.coarsening_factor,
            "coarsening_radius": self.coarsening_radius,
            **self.extras,
        }


def kr_transport(
    theta1: FieldLike,
    theta2: FieldLike,
    delta: float,
    method: Literal["exact", "entropic"] = "exact",
    *,
    max_support: int = COARSE_SUPPORT,
    eps: Optional[float] = None,
) -> KRDistance:
    """Split θ₁ - θ₂ into its positive and negative parts and transport one onto the other.

    Supports whose combined size exceeds ``max_support`` are aggregated into
    dyadic boxes of grid cells until they fit; the box half diagonal is reported.
    """
    log_cost(0.0, delta)
    a, b = as_physical(theta1), as_physical(theta2)
    if a.grid != b.grid:
        raise PreconditionError("fields live on different grids")
    sigma = a - b
    if not np.any(sigma.values):
        return KRDistance(value=0.0, method=method, delta=delta)
    mu, nu = signed_split(sigma)
    grid = sigma.grid
    factor, radius = 1, 0.0
    coarse_mu, coarse_nu = mu, nu
    while coarse_mu.size + coarse_nu.size > max_support:
        factor *= 2
        if factor > grid.n:
            raise InvalidParameterError(f"cannot coarsen below {max_support} points on n={grid.n}")
        coarse_mu, radius = coarsen(mu, grid, factor)
        coarse_nu, _ = coarsen(nu, grid, factor)
    if factor > 1:
        logger.debug("coarsened supports by %d (radius %.4g)", factor, radius)

    if method == "exact":
        result = exact_ot(coarse_mu, coarse_nu, delta)
    elif method == "entropic":
        result = entropic_ot(coarse_mu, coarse_nu, delta, eps if eps is not None else 1e-2 * math.log(2.0))
    else:
        raise InvalidParameterError(f"unknown transport method '{method}'")
    return KRDistance(
        value=result.cost,
        method=method,
        delta=delta,
        gap=result.gap,
        source_support=coarse_mu.size,
        target_support=coarse_nu.size,
        coarsening_factor=factor,
        coarsening_radius=radius,
        extras={"marginal_violation": result.marginal_violation, "iterations": result.iterations},
    )


def kr_distance(
    theta1: FieldLike,
    theta2: FieldLike,
    delta: float,
    method: Literal["exact", "entropic"] = "exact",
    **options: Any,
) -> float:
    return kr_transport(theta1, theta2, delta, method, **options).value


def check_l1_transport_interpolation(
    sigma: FieldLike,
    a: float,
    ells: Sequence[float],
    delta: float,
    fam: Optional[LPFamily] = None,
    **options: Any,
) -> InequalityReport:
    """‖σ‖_{L¹} against D_δ(σ)/c_δ(1/ℓ) + log^{-a}(ℓ) ‖σ‖_{B^{log,a}} for each ℓ >= 2."""
    f = as_physical(sigma)
    l1 = lq_norm(f, 1.0)
    besov = besov_log_norm(f, a, fam).value
    zero = f.scaled(0.0)
    transport = kr_distance(f, zero, delta, **options) if l1 > 0.0 else 0.0
    report = InequalityReport(
        "l1_transport_interpolation",
        inputs={"a": a, "delta": delta, "l1": l1, "besov": besov, "transport": transport},
    )
    for ell in ells:
        if ell < 2.0:
            raise InvalidParameterError(f"scale parameter ell must be >= 2, got {ell}")
        rhs = transport / log_cost(1.0 / ell, delta) + math.log(ell) ** (-a) * besov
        report.add(l1, rhs, ell=float(ell))
    return report


__all__ = [
    "COARSE_SUPPORT",
    "KRDistance",
    "check_l1_transport_interpolation",
    "kr_distance",
    "kr_transport",
]
