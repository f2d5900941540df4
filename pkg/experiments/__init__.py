"""Experiment runners, configuration, fitting and output emission."""

from .bounds import RateBoundInputs, dissipation_rhs, log_weight, strong_rhs, weak_rhs, weak_scale
from .common import Experiment, ExperimentResult, Job, kappa_key, simulate
from .config import ExperimentConfig, load_config, make_config, read_config_file
from .emit import emit, emit_outputs, load_result
from .fits import RateFit, fit_line, fit_log_rate, log_log_factor
from .harness import build_experiment_workflow, run_experiment
from .mixing import enhanced_dissipation, normalised_model, run_mixing
from .presets import PRESETS, checkerboard, harmonic, initial_datum, random_band_limited
from .regularity import run_diffusive, run_regularity
from .registry import auto_load_experiments, get_experiment
from .zerodiff import run_zero_diffusivity_sweep

__all__ = [
    "Experiment",
    "ExperimentConfig",
    "ExperimentResult",
    "Job",
    "PRESETS",
    "RateBoundInputs",
    "RateFit",
    "auto_load_experiments",
    "build_experiment_workflow",
    "checkerboard",
    "dissipation_rhs",
    "emit",
    "emit_outputs",
    "enhanced_dissipation",
    "fit_line",
    "fit_log_rate",
    "get_experiment",
    "harmonic",
    "initial_datum",
    "kappa_key",
    "load_config",
    "load_result",
    "log_log_factor",
    "log_weight",
    "make_config",
    "normalised_model",
    "random_band_limited",
    "read_config_file",
    "run_diffusive",
    "run_experiment",
    "run_mixing",
    "run_regularity",
    "run_zero_diffusivity_sweep",
    "simulate",
    "strong_rhs",
    "weak_rhs",
    "weak_scale",
]
