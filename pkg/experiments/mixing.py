"""Mixing-norm decay and enhanced dissipation diagnostics."""

from __future__ import annotations

import logging
import math
from functools import partial
from typing import Any, Dict, List, Mapping, Optional, Tuple

import numpy as np

from solver import TimeSeries, VelocityModel, gradient_lp_norm, sample_velocity

from .common import Experiment, ExperimentResult, Job, kappa_key, run_sequential, simulate
from .config import ExperimentConfig
from .fits import RateFit, fit_line

logger = logging.getLogger(__name__)

TAIL_START = 0.25
# late-tail decay rate below this fraction of the early-tail rate counts as slowing down
SLOWDOWN = 0.75


def normalised_model(config: ExperimentConfig) -> VelocityModel:
    """The configured flow rescaled so that ‖∇u‖_{L^p} = 1 (flows with ∇u = 0 are left alone)."""
    unit = config.velocity_model().with_amplitude(1.0)
    norm = gradient_lp_norm(sample_velocity(unit, 0.0, config.grid), config.p)
    return unit.with_amplitude(1.0 / norm) if norm > 0.0 else unit


def plan_mixing(config: ExperimentConfig) -> List[Job]:
    model = normalised_model(config)
    jobs = [Job(kappa_key(0.0), partial(simulate, config, 0.0, "hminus1,l2", model=model))]
    jobs.extend(
        Job(kappa_key(k), partial(simulate, config, k, "l2,hminus1,dissipation", model=model))
        for k in config.kappas
        if k > 0.0
    )
    return jobs


def _half_energy_time(times: List[float], energy: np.ndarray) -> Optional[float]:
    below = np.nonzero(energy <= 0.5 * energy[0])[0]
    return float(times[below[0]]) if below.size else None


def enhanced_dissipation(kappa: float, series: TimeSeries) -> Dict[str, Any]:
    """Decay rate D of ‖θ^κ‖_{L²}, half-energy time and the energy-balance consequence."""
    l2 = series.column("l2")
    energy = l2**2
    fit = fit_line(series.times, np.log(l2), transform="log ||theta||_L2 ~ t")
    rate = -fit.slope
    dissipated = 2.0 * float(series.column("dissipation")[-1])
    threshold = math.log(2.0) / (2.0 * rate) if rate > 0.0 else math.inf
    applies = series.times[-1] >= threshold
    return {
        "kappa": kappa,
        "decay_rate": rate,
        "half_energy_time": _half_energy_time(series.times, energy),
        "rate_times_log": rate * math.log(1.0 / kappa),
        "consequence_time": threshold,
        "consequence_applies": bool(applies),
        "consequence_holds": bool(energy[0] <= dissipated * (1.0 + 1e-9)) if applies else None,
        "initial_energy": float(energy[0]),
        "four_kappa_dissipation": dissipated,
    }


def _tail_rates(times: np.ndarray, log_h: np.ndarray) -> Optional[Tuple[RateFit, RateFit]]:
    """Decay-rate fits on the two halves of t >= t_end/4, or None when the tail is too short."""
    tail = times >= TAIL_START * times[-1]
    t_tail, h_tail = times[tail], log_h[tail]
    if t_tail.size < 4:
        return None
    middle = 0.5 * (t_tail[0] + t_tail[-1])
    early = t_tail <= middle
    if early.sum() < 2 or (~early).sum() < 2:
        return None
    return (
        fit_line(t_tail[early], h_tail[early], transform="early tail: log ||theta||_H^-1 ~ t"),
        fit_line(t_tail[~early], h_tail[~early], transform="late tail: log ||theta||_H^-1 ~ t"),
    )


def analyse_mixing(config: ExperimentConfig, outcomes: Mapping[str, Any]) -> ExperimentResult:
    series: TimeSeries = outcomes[kappa_key(0.0)]
    times = np.asarray(series.times)
    log_h = np.log(series.column("hminus1"))
    exponential = fit_line(times, log_h, transform="log ||theta||_H^-1 ~ t")
    # largest line of the fitted slope lying below the whole series
    envelope_intercept = float(np.min(log_h - exponential.slope * times))
    envelope = envelope_intercept + exponential.slope * times
    margin = exponential.intercept - envelope_intercept
    rows = [
        {"t": float(t), "hminus1": float(math.exp(h)), "log_hminus1": float(h), "envelope": float(e)}
        for t, h, e in zip(times, log_h, envelope)
    ]
    fits = {"exponential": exponential}
    summary: Dict[str, Any] = {
        "rate": -exponential.slope + 0.0,
        "exponential_residual": exponential.residual,
        "envelope_intercept": envelope_intercept,
        "envelope_margin": margin,
        "envelope_holds": bool(margin <= config.envelope_tolerance),
        "envelope_tolerance": config.envelope_tolerance,
        "sub_exponential": False,
    }
    halves = _tail_rates(times, log_h)
    if halves is not None:
        early, late = halves
        early_rate, late_rate = -early.slope + 0.0, -late.slope + 0.0
        decaying = bool(np.ptp(log_h) > 1e-9 and early_rate > 0.0)
        fits.update(early_tail=early, late_tail=late)
        summary.update(
            early_tail_rate=early_rate,
            late_tail_rate=late_rate,
            sub_exponential=bool(decaying and late_rate < SLOWDOWN * early_rate),
        )
        tail = times >= TAIL_START * times[-1]
        if decaying and times[tail][0] > 0.0:
            tail_exp = fit_line(times[tail], log_h[tail], transform="tail: log ||theta||_H^-1 ~ t")
            tail_alg = fit_line(np.log(times[tail]), log_h[tail], transform="tail: log ||theta||_H^-1 ~ log t")
            fits.update(tail_exponential=tail_exp, tail_algebraic=tail_alg)
            summary.update(tail_exponential_residual=tail_exp.residual, tail_algebraic_residual=tail_alg.residual)
    else:
        logger.warning("mixing: fewer than four samples in t >= %.3g, decay is not classified", TAIL_START * times[-1])
    summary["amplitude"] = normalised_model(config).amplitude
    summary["enhanced_dissipation"] = [enhanced_dissipation(k, outcomes[kappa_key(k)]) for k in config.kappas if k > 0.0]
    logger.info(
        "mixing: rate %.4g (residual %.3g), sub-exponential=%s",
        summary["rate"],
        exponential.residual,
        summary["sub_exponential"],
    )
    return ExperimentResult("mixing", config.as_record(), rows, summary, fits=fits)


MIXING = Experiment("mixing", plan_mixing, analyse_mixing, "Exponential lower envelope of the H^{-1} mixing norm")


def run_mixing(config: ExperimentConfig) -> ExperimentResult:
    return run_sequential(MIXING, config)


def get_experiments() -> Dict[str, Experiment]:
    return {"mixing": MIXING}


__all__ = ["MIXING", "enhanced_dissipation", "get_experiments", "normalised_model", "run_mixing"]
