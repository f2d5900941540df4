"""Dynamic experiment loader: every runner module exposing ``get_experiments`` is registered."""

from __future__ import annotations

import importlib
import pkgutil
from pathlib import Path
from types import ModuleType
from typing import Dict, Mapping

from errors import ConfigError

from .common import Experiment

_SUPPORT_MODULES = {
    "__init__",
    "registry",
    "harness",
    "emit",
    "common",
    "config",
    "presets",
    "fits",
    "bounds",
}


def _discover_modules(prefix: str = "experiments") -> list[ModuleType]:
    """Find all runner modules under the experiments package."""
    package_dir = str(Path(__file__).resolve().parent)
    return [
        importlib.import_module(f"{prefix}.{name}")
        for _, name, ispkg in pkgutil.iter_modules([package_dir])
        if not ispkg and name not in _SUPPORT_MODULES
    ]


def _merge_experiments(
    target: Dict[str, Experiment],
    new_experiments: Mapping[str, Experiment],
    *,
    module_name: str,
) -> None:
    if not isinstance(new_experiments, Mapping):
        raise TypeError(
            f"Module '{module_name}' returned a non-mapping from get_experiments;"
            " expected a dict keyed by experiment kind."
        )
    for kind, experiment in new_experiments.items():
        if kind in target:
            raise ConfigError(f"experiment kind '{kind}' is registered twice (again by {module_name})")
        target[kind] = experiment


def auto_load_experiments() -> Dict[str, Experiment]:
    """Gather the experiments of every runner module keyed by kind."""
    aggregated: Dict[str, Experiment] = {}
    for mod in _discover_modules():
        getter = getattr(mod, "get_experiments", None)
        if getter is None:
            continue
        _merge_experiments(aggregated, getter(), module_name=mod.__name__)
    return dict(sorted(aggregated.items()))


def get_experiment(kind: str) -> Experiment:
    experiments = auto_load_experiments()
    try:
        return experiments[kind]
    except KeyError as exc:
        raise ConfigError(f"unknown experiment kind '{kind}'; available: {', '.join(experiments)}") from exc


__all__ = ["auto_load_experiments", "get_experiment"]
