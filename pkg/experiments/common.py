"""Shared pieces of the experiment runners: jobs, results and the simulation helper."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional

from norms import InequalityReport
from solver import ObserverSet, TimeSeries, VelocityModel, solve
from spectral import SpectralField

from .config import ExperimentConfig
from .fits import RateFit
from .presets import initial_datum

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Job:
    """One independent unit of work (typically a single simulation of a κ-sweep)."""

    key: str
    run: Callable[[], Any]


@dataclass
class ExperimentResult:
    kind: str
    config: Dict[str, Any]
    records: List[Dict[str, Any]] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    fits: Dict[str, RateFit] = field(default_factory=dict)
    reports: Dict[str, InequalityReport] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "config": dict(self.config),
            "seed": self.config.get("seed"),
            "records": [dict(row) for row in self.records],
            "summary": dict(self.summary),
            "fits": {name: fit.as_dict() for name, fit in self.fits.items()},
            "reports": {name: report.as_dict() for name, report in self.reports.items()},
        }


Planner = Callable[[ExperimentConfig], List[Job]]
Analyser = Callable[[ExperimentConfig, Mapping[str, Any]], ExperimentResult]


@dataclass(frozen=True)
class Experiment:
    """A registered experiment: how to split it into jobs and how to combine their outcomes."""

    kind: str
    plan: Planner
    analyse: Analyser
    description: str = ""


def run_sequential(experiment: Experiment, config: ExperimentConfig) -> ExperimentResult:
    """Run every job in order and analyse; the harness offers the concurrent variant."""
    outcomes = {job.key: job.run() for job in experiment.plan(config)}
    return experiment.analyse(config, outcomes)


def kappa_key(kappa: float) -> str:
    return f"kappa={kappa:g}"


def observer_stride(config: ExperimentConfig) -> int:
    steps = max(1, int(math.ceil(config.t_end / config.dt - 1e-9)))
    return max(1, steps // (config.samples - 1))


def simulate(
    config: ExperimentConfig,
    kappa: float,
    diagnostics: str,
    *,
    keep_snapshots: bool = False,
    model: Optional[VelocityModel] = None,
    theta0: Optional[SpectralField] = None,
) -> TimeSeries:
    """Solve from the configured preset with ``diagnostics`` sampled ``config.samples`` times."""
    observers = ObserverSet.parse(diagnostics, stride=observer_stride(config), keep_snapshots=keep_snapshots)
    return solve(
        config.solver_config(kappa),
        model or config.velocity_model(),
        theta0 if theta0 is not None else initial_datum(config),
        config.t_end,
        observers,
    )


def ratio(lhs: float, rhs: float) -> float:
    if lhs == 0.0:
        return 0.0
    return lhs / rhs if rhs > 0.0 else math.inf


__all__ = [
    "Experiment",
    "ExperimentResult",
    "Job",
    "kappa_key",
    "observer_stride",
    "ratio",
    "run_sequential",
    "simulate",
]
