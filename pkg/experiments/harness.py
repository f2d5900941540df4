"""Staged experiment workflow: plan, simulate concurrently, analyse, emit."""

from __future__ import annotations

import asyncio
import logging
import os
from collections.abc import Awaitable, Callable
from typing import Any, Dict, Mapping, Optional

from states.state import ExperimentStage, ExperimentState

from .common import Experiment, ExperimentResult, Job
from .config import ExperimentConfig
from .emit import emit_outputs
from .registry import auto_load_experiments, get_experiment

logger = logging.getLogger(__name__)

ProgressHandler = Callable[[Dict[str, Any]], Awaitable[None] | None]


def default_workers() -> int:
    try:
        return max(1, int(os.getenv("LOGBESOV_WORKERS", "4")))
    except ValueError:
        logger.warning("Ignoring non-integer LOGBESOV_WORKERS=%r", os.getenv("LOGBESOV_WORKERS"))
        return 4


def _update_stage(state: ExperimentState, stage: ExperimentStage) -> None:
    state.step(stage)
    logger.info("Experiment '%s' stage advanced to '%s'", state.kind, stage)


async def _notify(progress_handler: Optional[ProgressHandler], snapshot: Dict[str, Any]) -> None:
    if progress_handler is None:
        return
    maybe = progress_handler(snapshot)
    if asyncio.iscoroutine(maybe):
        await maybe


async def _run_job(
    job: Job,
    state: ExperimentState,
    limiter: asyncio.Semaphore,
    progress_handler: Optional[ProgressHandler],
) -> Any:
    """Run one simulation job in a worker thread and record it into state."""
    async with limiter:
        logger.info("Running job '%s'", job.key)
        try:
            outcome = await asyncio.to_thread(job.run)
        except Exception as exc:
            logger.exception("Job '%s' failed: %s", job.key, exc)
            raise
    steps = getattr(outcome, "steps", None)
    state.log("simulate", f"{job.key}: {steps if steps is not None else '?'} steps")
    snapshot = state.snapshot(stage="simulate", result={"job": job.key, "steps": steps})
    await _notify(progress_handler, snapshot)
    return outcome


def build_experiment_workflow(
    experiments: Optional[Mapping[str, Experiment]] = None,
    *,
    workers: Optional[int] = None,
):
    """Return an async callable that runs one experiment through all stages."""
    registry = dict(experiments) if experiments is not None else auto_load_experiments()
    limit = workers or default_workers()

    async def run_experiment_job(
        config: ExperimentConfig,
        *,
        progress_handler: Optional[ProgressHandler] = None,
        state: Optional[ExperimentState] = None,
        emit: bool = True,
    ) -> ExperimentState:
        experiment = registry.get(config.kind) or get_experiment(config.kind)
        run_state = state or ExperimentState(kind=config.kind, config=config.as_record())
        logger.info("Experiment '%s' started with %d workers", config.kind, limit)

        _update_stage(run_state, "setup")
        jobs = experiment.plan(config)
        run_state.log("setup", f"{len(jobs)} jobs: {', '.join(job.key for job in jobs)}")
        await _notify(progress_handler, run_state.snapshot(stage="setup", result={"jobs": [j.key for j in jobs]}))

        _update_stage(run_state, "simulate")
        limiter = asyncio.Semaphore(limit)
        results = await asyncio.gather(*(_run_job(job, run_state, limiter, progress_handler) for job in jobs))
        outcomes = {job.key: outcome for job, outcome in zip(jobs, results)}

        _update_stage(run_state, "analyse")
        result: ExperimentResult = await asyncio.to_thread(experiment.analyse, config, outcomes)
        run_state.result = result
        run_state.records = list(result.records)
        run_state.summary = dict(result.summary)
        await _notify(progress_handler, run_state.snapshot(stage="analyse", result=result.summary))

        if emit:
            _update_stage(run_state, "emit")
            run_state.outputs = emit_outputs(result, config)
            for fmt, path in run_state.outputs.items():
                run_state.log("emit", f"{fmt}: {path}")
            await _notify(progress_handler, run_state.snapshot(stage="emit", result=run_state.outputs))

        _update_stage(run_state, "done")
        logger.info("Experiment '%s' completed after %d steps", config.kind, run_state.total_steps)
        return run_state

    return run_experiment_job


def run_experiment(config: ExperimentConfig, *, workers: Optional[int] = None, emit: bool = True) -> ExperimentResult:
    """Synchronous entry point around the async workflow."""
    workflow = build_experiment_workflow(workers=workers)
    state = asyncio.run(workflow(config, emit=emit))
    return state.result


__all__ = ["build_experiment_workflow", "default_workers", "run_experiment"]
