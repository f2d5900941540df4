"""Propagation of logarithmic regularity, with and without diffusion."""

from __future__ import annotations

import logging
from functools import partial
from typing import Any, Dict, List, Mapping

import numpy as np

from errors import ConfigError
from norms import InequalityReport
from solver import TimeSeries

from .common import Experiment, ExperimentResult, Job, kappa_key, ratio, run_sequential, simulate
from .config import ExperimentConfig

logger = logging.getLogger(__name__)


def _columns(config: ExperimentConfig) -> Dict[str, str]:
    return {
        "besov": f"besov:a={config.a:g}",
        "grad_u": f"grad_u:p={config.p:g}",
        "besov_dissipation": f"besov_dissipation:a={config.a:g}",
    }


def _diagnostics(config: ExperimentConfig, *, diffusive: bool) -> str:
    cols = _columns(config)
    names = ["linf", cols["besov"], cols["grad_u"]]
    if diffusive:
        names.append(cols["besov_dissipation"])
    return ",".join(names)


def _bound_rows(
    config: ExperimentConfig,
    series: TimeSeries,
    report: InequalityReport,
    *,
    kappa: float = 0.0,
) -> List[Dict[str, Any]]:
    """Rows comparing the tracked quantity with (∫‖∇u‖)^a ‖θ₀‖_∞ + ‖θ₀‖_{B^{log,a}}."""
    cols = _columns(config)
    besov = series.column(cols["besov"])
    integral = series.column(cols["grad_u"])
    linf0 = float(series.column("linf")[0])
    besov0 = float(besov[0])
    dissipation = (
        np.sqrt(np.maximum(series.column(cols["besov_dissipation"]), 0.0))
        if kappa > 0.0
        else np.zeros_like(besov)
    )
    rows = []
    for t, b, g, diss in zip(series.times, besov, integral, dissipation):
        first = float(g) ** config.a * linf0
        lhs = float(b) + float(diss)
        rhs = first + besov0
        report.add(lhs, rhs, t=t, kappa=kappa)
        rows.append(
            {
                "kappa": kappa,
                "t": t,
                "besov": float(b),
                "dissipation_term": float(diss),
                "grad_u_integral": float(g),
                "bound_first": first,
                "bound_second": besov0,
                "minimal_C": ratio(lhs, rhs),
            }
        )
    return rows


def plan_regularity(config: ExperimentConfig) -> List[Job]:
    if any(k > 0.0 for k in config.kappas):
        raise ConfigError("regularity runs are inviscid; use the diffusive experiment for kappa > 0")
    diagnostics = _diagnostics(config, diffusive=False)
    return [Job(kappa_key(0.0), partial(simulate, config, 0.0, diagnostics))]


def analyse_regularity(config: ExperimentConfig, outcomes: Mapping[str, Any]) -> ExperimentResult:
    series: TimeSeries = outcomes[kappa_key(0.0)]
    report = InequalityReport("regularity", inputs={"a": config.a, "p": config.p})
    rows = _bound_rows(config, series, report)
    summary = {
        "sup_minimal_C": report.minimal_constant,
        "besov0": rows[0]["besov"],
        "linf0": float(series.column("linf")[0]),
        "grad_u_integral": rows[-1]["grad_u_integral"],
        "steps": series.steps,
        "residuals": dict(series.residuals),
    }
    logger.info("regularity: sup minimal C = %.6g over %d samples", summary["sup_minimal_C"], len(rows))
    return ExperimentResult("regularity", config.as_record(), rows, summary, reports={"regularity": report})


def plan_diffusive(config: ExperimentConfig) -> List[Job]:
    if not config.kappas or any(k <= 0.0 for k in config.kappas):
        raise ConfigError("diffusive runs need a nonempty list of kappa > 0")
    diagnostics = _diagnostics(config, diffusive=True)
    return [Job(kappa_key(k), partial(simulate, config, k, diagnostics)) for k in config.kappas]


def analyse_diffusive(config: ExperimentConfig, outcomes: Mapping[str, Any]) -> ExperimentResult:
    """One constant C for ‖θ^κ‖_B + (κ∫‖∇θ^κ‖²_B)^{1/2} over every κ and sample time."""
    report = InequalityReport("diffusive", inputs={"a": config.a, "p": config.p, "kappas": list(config.kappas)})
    rows: List[Dict[str, Any]] = []
    per_kappa: Dict[str, Dict[str, float]] = {}
    for kappa in config.kappas:
        series: TimeSeries = outcomes[kappa_key(kappa)]
        sub = InequalityReport("diffusive_single")
        kappa_rows = _bound_rows(config, series, sub, kappa=kappa)
        for row in kappa_rows:
            report.add(row["besov"] + row["dissipation_term"], row["bound_first"] + row["bound_second"], t=row["t"], kappa=kappa)
        rows.extend(kappa_rows)
        per_kappa[kappa_key(kappa)] = {
            "minimal_C": sub.minimal_constant,
            "final_besov": kappa_rows[-1]["besov"],
            "final_dissipation_term": kappa_rows[-1]["dissipation_term"],
            "energy_balance": series.residuals.get("energy_balance", 0.0),
        }
    summary = {"sup_minimal_C": report.minimal_constant, "per_kappa": per_kappa}
    logger.info("diffusive: single constant C = %.6g over %d diffusivities", report.minimal_constant, len(config.kappas))
    return ExperimentResult("diffusive", config.as_record(), rows, summary, reports={"diffusive": report})


REGULARITY = Experiment(
    "regularity",
    plan_regularity,
    analyse_regularity,
    "Inviscid propagation of the B^{log,a} norm against (∫‖∇u‖)^a‖θ₀‖_∞ + ‖θ₀‖_B",
)
DIFFUSIVE = Experiment(
    "diffusive",
    plan_diffusive,
    analyse_diffusive,
    "Diffusive propagation including the κ-weighted Besov dissipation",
)


def run_regularity(config: ExperimentConfig) -> ExperimentResult:
    return run_sequential(REGULARITY, config)


def run_diffusive(config: ExperimentConfig) -> ExperimentResult:
    return run_sequential(DIFFUSIVE, config)


def get_experiments() -> Dict[str, Experiment]:
    return {"regularity": REGULARITY, "diffusive": DIFFUSIVE}


__all__ = ["DIFFUSIVE", "REGULARITY", "get_experiments", "run_diffusive", "run_regularity"]
