"""Interpolation-type quantities and empirical inequality checks."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from errors import InvalidExponentError, InvalidParameterError, PreconditionError, UndefinedRatioError
from filters import LPFamily, family_for, high_pass
from spectral import PhysicalField, SpectralField, inverse_transform, lq_norm
from spectral.ops import FieldLike, as_spectral, nyquist_free_wavenumbers

from .besov import besov_log_norm, gradient_besov_norm, homogeneous_sobolev_norm

logger = logging.getLogger(__name__)

# multipliers of the k-th member of a mollifier family (one per vector component)
FamilyMultipliers = Callable[[LPFamily, int], Sequence[np.ndarray]]


@dataclass
class InequalityReport:
    """Both sides of lhs <= C * rhs over a parameter sweep, with the inputs that produced them."""

    name: str
    rows: List[Dict[str, float]] = field(default_factory=list)
    inputs: Dict[str, Any] = field(default_factory=dict)

    def add(self, lhs: float, rhs: float, **params: float) -> None:
        self.rows.append({**params, "lhs": float(lhs), "rhs": float(rhs), "ratio": _ratio(lhs, rhs)})

    @property
    def lhs(self) -> float:
        return self._binding_row().get("lhs", 0.0)

    @property
    def rhs(self) -> float:
        return self._binding_row().get("rhs", 0.0)

    @property
    def minimal_constant(self) -> float:
        """Smallest C with lhs <= C * rhs on every row (0 when every lhs vanishes)."""
        return max((row["ratio"] for row in self.rows), default=0.0)

    def holds(self, constant: float, *, tolerance: float = 1e-12) -> bool:
        return all(row["lhs"] <= constant * row["rhs"] + tolerance for row in self.rows)

    def _binding_row(self) -> Dict[str, float]:
        if not self.rows:
            return {}
        return max(self.rows, key=lambda row: row["ratio"])

    def as_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "minimal_constant": self.minimal_constant,
            "rows": [dict(row) for row in self.rows],
            "inputs": dict(self.inputs),
        }


def _ratio(lhs: float, rhs: float) -> float:
    if lhs == 0.0:
        return 0.0
    if rhs == 0.0:
        return math.inf
    return lhs / rhs


def _fam(F: SpectralField, fam: Optional[LPFamily]) -> LPFamily:
    return fam or family_for(F.grid)


def interp_sup_quantity(
    theta: FieldLike,
    b: float,
    r: float,
    variant: str = "highpass",
    fam: Optional[LPFamily] = None,
) -> float:
    """‖sup_k k^b |θ_k^≥|‖_{L^r} (``highpass``) or ‖sup_k k^b |θ_k|‖_{L^r} (``block``)."""
    if not r >= 2.0:
        raise InvalidExponentError(f"r must be >= 2, got {r}")
    if not b >= 0.0:
        raise InvalidParameterError(f"b must be >= 0, got {b}")
    if variant not in {"highpass", "block"}:
        raise InvalidParameterError(f"unknown variant '{variant}'")
    F = as_spectral(theta)
    fam = _fam(F, fam)
    envelope = np.zeros(F.grid.shape)
    for k in fam.block_indices():
        filtered = high_pass(F, k, fam) if variant == "highpass" else F.multiply(fam.phi_hat(k))
        np.maximum(envelope, k**b * np.abs(inverse_transform(filtered).values), out=envelope)
    return lq_norm(_physical(F, envelope), r)


def _physical(F: SpectralField, values: np.ndarray) -> PhysicalField:
    return PhysicalField(F.grid, values)


def _block_family(fam: LPFamily, k: int) -> Sequence[np.ndarray]:
    return (fam.phi_hat(k),)


def _scaled_gradient_family(fam: LPFamily, k: int) -> Sequence[np.ndarray]:
    phi = fam.phi_hat(k)
    return tuple(1j * eta * phi / 2.0**k for eta in nyquist_free_wavenumbers(fam.grid))


FAMILIES: Dict[str, FamilyMultipliers] = {
    "blocks": _block_family,
    "grad_blocks": _scaled_gradient_family,
}


def square_function_quantity(
    theta: FieldLike,
    b: float,
    r: float,
    family: Union[str, FamilyMultipliers] = "blocks",
    fam: Optional[LPFamily] = None,
) -> float:
    """‖(Σ_k k^{2b} |θ ∗ η_k|²)^{1/2}‖_{L^r} for a mean-free mollifier family {η_k}."""
    if not r >= 1.0:
        raise InvalidExponentError(f"r must be >= 1, got {r}")
    members = FAMILIES[family] if isinstance(family, str) else family
    F = as_spectral(theta)
    fam = _fam(F, fam)
    total = np.zeros(F.grid.shape)
    for k in fam.block_indices():
        for multiplier in members(fam, k):
            if abs(multiplier.flat[0]) > 0.0:
                raise PreconditionError(f"family member {k} does not vanish at η = 0")
            values = inverse_transform(F.multiply(multiplier)).values
            total += k ** (2 * b) * values**2
    return lq_norm(_physical(F, np.sqrt(total)), r)


def _interpolation_rhs(linf: float, besov: float, a: float, b: float) -> float:
    ratio = b / a
    return linf ** (1.0 - ratio) * besov**ratio


def check_sup_interpolation(
    theta: FieldLike,
    a: float,
    bs: Sequence[float],
    variant: str = "highpass",
    fam: Optional[LPFamily] = None,
) -> InequalityReport:
    """‖sup_k k^b|·|‖_{L^r} <= C ‖θ‖_∞^{1-b/a} ‖θ‖_{B^{log,a}}^{b/a} with r = 2a/b."""
    F = as_spectral(theta)
    fam = _fam(F, fam)
    linf = lq_norm(F, math.inf)
    besov = besov_log_norm(F, a, fam).value
    report = InequalityReport(
        name=f"sup_interpolation_{variant}", inputs={"a": a, "linf": linf, "besov": besov}
    )
    for b in bs:
        if not 0.0 < b <= a:
            raise InvalidParameterError(f"b must lie in (0, a], got {b}")
        r = 2.0 * a / b
        lhs = interp_sup_quantity(F, b, r, variant, fam)
        report.add(lhs, _interpolation_rhs(linf, besov, a, b), b=b, r=r)
    return report


def check_square_function_interpolation(
    theta: FieldLike,
    a: float,
    pairs: Sequence[Tuple[float, float]],
    family: str = "blocks",
    fam: Optional[LPFamily] = None,
) -> InequalityReport:
    """Weighted square function <= C ‖θ‖_∞^{1-b/a} ‖θ‖_{B^{log,a}}^{b/a} for b < 2a/r."""
    F = as_spectral(theta)
    fam = _fam(F, fam)
    linf = lq_norm(F, math.inf)
    besov = besov_log_norm(F, a, fam).value
    report = InequalityReport(
        name=f"square_function_{family}", inputs={"a": a, "linf": linf, "besov": besov}
    )
    for b, r in pairs:
        if not 0.0 <= b < 2.0 * a / r:
            raise InvalidParameterError(f"need 0 <= b < 2a/r, got b={b}, r={r}")
        lhs = square_function_quantity(F, b, r, family, fam)
        report.add(lhs, _interpolation_rhs(linf, besov, a, b), b=b, r=r)
    return report


def check_gradient_interpolation(
    theta: FieldLike,
    a: float,
    ells: Sequence[float],
    fam: Optional[LPFamily] = None,
) -> InequalityReport:
    """‖∇θ‖_{L²} <= C (ℓ log^{-a}ℓ ‖θ‖_{B^{log,a}} + log^{-a}ℓ ‖∇θ‖_{B^{log,a}}) for ℓ >= 2."""
    F = as_spectral(theta)
    fam = _fam(F, fam)
    lhs = homogeneous_sobolev_norm(F, 1.0)
    besov = besov_log_norm(F, a, fam).value
    grad_besov = gradient_besov_norm(F, a, fam).value
    report = InequalityReport(
        name="gradient_interpolation",
        inputs={"a": a, "grad_l2": lhs, "besov": besov, "grad_besov": grad_besov},
    )
    for ell in ells:
        if not ell >= 2.0:
            raise InvalidParameterError(f"ℓ must be >= 2, got {ell}")
        damping = math.log(ell) ** (-a)
        low = ell * damping * besov
        high = damping * grad_besov
        report.add(lhs, low + high, ell=ell, low_term=low, high_term=high)
    return report


def mixing_duality_check(theta: FieldLike, a: float, fam: Optional[LPFamily] = None) -> InequalityReport:
    """‖θ‖_{L²} <= C exp((‖θ‖_{B^{log,a}} / ‖θ‖_{L²})^{1/a}) ‖θ‖_{Ḣ^{-1}}."""
    if not a > 0.0:
        raise InvalidParameterError(f"a must be > 0, got {a}")
    F = as_spectral(theta)
    l2 = homogeneous_sobolev_norm(F, 0.0)
    if l2 == 0.0:
        raise UndefinedRatioError("mixing duality is undefined for the zero field")
    besov = besov_log_norm(F, a, _fam(F, fam)).value
    hminus1 = homogeneous_sobolev_norm(F, -1.0)
    exponent = (besov / l2) ** (1.0 / a)
    report = InequalityReport(
        name="mixing_duality",
        inputs={"a": a, "l2": l2, "besov": besov, "hminus1": hminus1, "exponent": exponent},
    )
    report.add(l2, math.exp(exponent) * hminus1, a=a)
    return report


@dataclass(frozen=True)
class ChainConstants:
    """Per-j ratios of the two-sided tail chain; NaN where a denominator vanishes."""

    j: Tuple[int, ...]
    upper: Tuple[float, ...]
    lower: Tuple[float, ...]

    @property
    def max_upper(self) -> float:
        return float(np.nanmax(self.upper)) if self.upper else 0.0

    @property
    def max_lower(self) -> float:
        return float(np.nanmax(self.lower)) if self.lower else 0.0


def chain_constants(theta: FieldLike, fam: Optional[LPFamily] = None) -> ChainConstants:
    """Ratios ‖Σ_{k>=j}θ_k‖² / Σ_{k>=j-1}‖θ_k‖² and Σ_{k>=j-1}‖θ_k‖² / ‖Σ_{k>=j-2}θ_k‖²."""
    F = as_spectral(theta)
    fam = _fam(F, fam)
    volume = F.grid.volume
    top = fam.saturation + 1
    block_energy = {k: volume * float(np.sum(np.abs(F.coeffs * fam.phi_hat(k)) ** 2)) for k in range(1, top + 1)}

    def tail_energy(j: int) -> float:
        return volume * float(np.sum(np.abs(F.coeffs * (1.0 - fam.psi_hat(j - 1))) ** 2))

    def block_sum(j: int) -> float:
        return sum(block_energy[k] for k in range(j, top + 1))

    js, upper, lower = [], [], []
    for j in range(3, fam.k_max + 1):
        middle = block_sum(j - 1)
        outer = tail_energy(j - 2)
        js.append(j)
        upper.append(tail_energy(j) / middle if middle > 0 else math.nan)
        lower.append(middle / outer if outer > 0 else math.nan)
    return ChainConstants(tuple(js), tuple(upper), tuple(lower))


__all__ = [
    "InequalityReport",
    "ChainConstants",
    "FAMILIES",
    "interp_sup_quantity",
    "square_function_quantity",
    "check_sup_interpolation",
    "check_square_function_interpolation",
    "check_gradient_interpolation",
    "mixing_duality_check",
    "chain_constants",
]
