"""Rates of convergence in the zero-diffusivity limit: strong, dissipative and weak."""

from __future__ import annotations

import logging
import math
from functools import partial
from typing import Any, Dict, List, Mapping

from errors import ConfigError
from norms import InequalityReport
from solver import TimeSeries
from spectral import lq_norm, parseval_l2
from transport import kr_transport

from .bounds import RateBoundInputs, dissipation_rhs, strong_rhs, weak_rhs, weak_scale
from .common import Experiment, ExperimentResult, Job, kappa_key, ratio, run_sequential, simulate
from .config import ExperimentConfig
from .fits import fit_log_rate

logger = logging.getLogger(__name__)

MIN_DECADES = 4
SLOPE_MARGIN = 0.3


def _diagnostics(config: ExperimentConfig) -> str:
    return f"l2,linf,besov:a={config.a:g},grad_u:p={config.p:g},dissipation"


def _check_kappas(config: ExperimentConfig) -> None:
    positive = [k for k in config.kappas if k > 0.0]
    decades = {math.floor(math.log10(k)) for k in positive}
    if len(positive) != len(config.kappas) or len(decades) < MIN_DECADES:
        raise ConfigError(
            f"zero-diffusivity sweep needs positive kappas covering >= {MIN_DECADES} decades, got {list(config.kappas)}"
        )


def plan_zerodiff(config: ExperimentConfig) -> List[Job]:
    _check_kappas(config)
    diagnostics = _diagnostics(config)
    jobs = [Job(kappa_key(0.0), partial(simulate, config, 0.0, diagnostics, keep_snapshots=True))]
    jobs.extend(
        Job(kappa_key(k), partial(simulate, config, k, diagnostics, keep_snapshots=True)) for k in config.kappas
    )
    return jobs


def rate_inputs(config: ExperimentConfig, reference: TimeSeries) -> RateBoundInputs:
    return RateBoundInputs(
        linf0=float(reference.column("linf")[0]),
        besov0=float(reference.column(f"besov:a={config.a:g}")[0]),
        grad_u_integral=float(reference.column(f"grad_u:p={config.p:g}")[-1]),
        a=config.a,
    )


def analyse_zerodiff(config: ExperimentConfig, outcomes: Mapping[str, Any]) -> ExperimentResult:
    reference: TimeSeries = outcomes[kappa_key(0.0)]
    inputs = rate_inputs(config, reference)
    t = reference.times[-1]
    theta_t = reference.snapshots[-1]
    reports = {
        name: InequalityReport(name, inputs={**inputs.as_dict(), "t": t, "p": config.p})
        for name in ("strong", "dissipation", "weak")
    }
    rows: List[Dict[str, Any]] = []
    for kappa in sorted(config.kappas, reverse=True):
        series: TimeSeries = outcomes[kappa_key(kappa)]
        theta_k = series.snapshots[-1]
        strong = parseval_l2(theta_t - theta_k)
        sup_lq = max(lq_norm(a - b, config.q) for a, b in zip(reference.snapshots, series.snapshots))
        dissipation = math.sqrt(max(series.column("dissipation")[-1], 0.0) / 2.0)
        delta = weak_scale(kappa, t, config.a)
        weak = kr_transport(theta_t, theta_k, delta, config.ot_method, max_support=config.ot_max_support)
        bounds = {
            "strong": strong_rhs(inputs, kappa, t, config.p),
            "dissipation": dissipation_rhs(inputs, kappa, t),
            "weak": weak_rhs(inputs, kappa, t, delta, sup_lq),
        }
        errors = {"strong": strong, "dissipation": dissipation, "weak": weak.value}
        for name, report in reports.items():
            report.add(errors[name], bounds[name], kappa=kappa)
        rows.append(
            {
                "kappa": kappa,
                "t": t,
                "delta": delta,
                "strong_error": strong,
                "strong_rhs": bounds["strong"],
                "dissipation": dissipation,
                "dissipation_rhs": bounds["dissipation"],
                "weak_error": weak.value,
                "weak_rhs": bounds["weak"],
                "sup_lq_error": sup_lq,
                "coarsening_radius": weak.coarsening_radius,
                "strong_C": ratio(strong, bounds["strong"]),
                "dissipation_C": ratio(dissipation, bounds["dissipation"]),
                "weak_C": ratio(weak.value, bounds["weak"]),
            }
        )
        logger.info("zerodiff kappa=%g: strong=%.4g dissipation=%.4g weak=%.4g", kappa, strong, dissipation, weak.value)

    kappas = [row["kappa"] for row in rows]
    fits = {
        name: fit_log_rate([row[column] for row in rows], kappas, t)
        for name, column in (("strong", "strong_error"), ("dissipation", "dissipation"), ("weak", "weak_error"))
    }
    strong_slope = fits["strong"].slope
    summary = {
        "t": t,
        "inputs": inputs.as_dict(),
        "minimal_C": {name: report.minimal_constant for name, report in reports.items()},
        "slopes": {name: fit.slope for name, fit in fits.items()},
        "target_slope": -config.a,
        "slope_within_margin": strong_slope <= -config.a + SLOPE_MARGIN,
        "slope_steeper_than_bound": strong_slope < -config.a,
    }
    return ExperimentResult("zerodiff", config.as_record(), rows, summary, fits=fits, reports=reports)


ZERODIFF = Experiment(
    "zerodiff",
    plan_zerodiff,
    analyse_zerodiff,
    "κ-sweep of strong, dissipative and weak errors against their log^{-a} bounds",
)


def run_zero_diffusivity_sweep(config: ExperimentConfig) -> ExperimentResult:
    return run_sequential(ZERODIFF, config)


def get_experiments() -> Dict[str, Experiment]:
    return {"zerodiff": ZERODIFF}


__all__ = ["ZERODIFF", "get_experiments", "rate_inputs", "run_zero_diffusivity_sweep"]
