"""Experiment configuration: a validated pydantic model plus a ``key = value`` file reader."""

from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Any, Dict, Literal, Mapping, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from errors import ConfigError
from solver import SolverConfig, VelocityModel
from solver.velocity import VelocityKind
from spectral import TorusGrid

logger = logging.getLogger(__name__)

ExperimentKind = Literal["regularity", "diffusive", "zerodiff", "mixing"]
PresetName = Literal["harmonic", "random", "checkerboard"]


class ExperimentConfig(BaseModel):
    """Everything needed to reproduce one experiment run."""

    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="forbid")

    kind: ExperimentKind = Field(..., description="Which experiment to run")
    velocity: VelocityKind = Field(default="alternating_shear", description="Velocity model")
    amplitude: float = Field(default=1.0, ge=0.0)
    period: float = Field(default=2.0, gt=0.0)
    beta: float = Field(default=0.5, gt=0.0, lt=1.0)
    r0: float = Field(default=3.0, gt=0.0, le=math.pi)
    drift: Tuple[float, float] = Field(default=(1.0, 0.0), description="Uniform flow velocity")

    preset: PresetName = Field(default="random", description="Initial datum preset")
    mode: int = Field(default=4, ge=1, description="Wave number of the harmonic preset")
    band: int = Field(default=8, ge=1, description="Spectral radius of the random preset")
    cells: int = Field(default=4, ge=1, description="Checkerboard cells per axis")
    seed: int = Field(default=0, ge=0)

    d: int = Field(default=2, ge=1, le=2)
    n: int = Field(default=64, ge=8)
    a: float = Field(default=0.9, description="Logarithmic smoothness exponent")
    p: float = Field(default=2.0, gt=1.0, description="Integrability of ∇u")
    kappas: Tuple[float, ...] = Field(default=(), description="Diffusivities of the sweep")
    t_end: float = Field(default=1.0, gt=0.0)
    dt: float = Field(default=1e-3, gt=0.0)
    samples: int = Field(default=20, ge=2, description="Number of observer times")
    generator: str = Field(default="smooth_bump")
    dealias: bool = True

    ot_method: Literal["exact", "entropic"] = "exact"
    ot_max_support: int = Field(default=2048, ge=16)
    envelope_tolerance: float = Field(default=0.5, ge=0.0)

    csv_path: Optional[Path] = Field(default=None, alias="csv")
    json_path: Optional[Path] = Field(default=None, alias="json")
    report_path: Optional[Path] = Field(default=None, alias="report")

    @field_validator("kappas", "drift", mode="before")
    @classmethod
    def _split_lists(cls, value: Any) -> Any:
        if isinstance(value, str):
            return tuple(float(item) for item in value.split(",") if item.strip())
        if isinstance(value, (int, float)):
            return (float(value),)
        return value

    @field_validator("kappas")
    @classmethod
    def _nonnegative(cls, value: Tuple[float, ...]) -> Tuple[float, ...]:
        if any(not k >= 0.0 for k in value):
            raise ValueError("diffusivities must be >= 0")
        return value

    @model_validator(mode="after")
    def _exponents(self) -> "ExperimentConfig":
        if not 0.5 <= self.a < self.p / 2.0:
            raise ValueError(f"a must lie in [1/2, p/2) = [0.5, {self.p / 2.0:g}), got {self.a}")
        if self.n & (self.n - 1):
            raise ValueError(f"n must be a power of two, got {self.n}")
        return self

    @property
    def q(self) -> float:
        """Hölder conjugate of ``p``."""
        return self.p / (self.p - 1.0)

    @property
    def grid(self) -> TorusGrid:
        return TorusGrid(d=self.d, n=self.n)

    def velocity_model(self) -> VelocityModel:
        return VelocityModel(
            kind=self.velocity,
            amplitude=self.amplitude,
            c=self.drift,
            period=self.period,
            beta=self.beta,
            r0=self.r0,
        )

    def solver_config(self, kappa: float = 0.0) -> SolverConfig:
        return SolverConfig(kappa=kappa, dt=self.dt, grid=self.grid, dealias=self.dealias, generator=self.generator)

    def as_record(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)


def make_config(values: Mapping[str, Any], *, source: str = "<mapping>") -> ExperimentConfig:
    """Validate ``values``; pydantic failures become :class:`ConfigError` naming ``source``."""
    try:
        return ExperimentConfig.model_validate(dict(values))
    except ValidationError as exc:
        raise ConfigError(f"invalid experiment configuration in {source}: {exc}") from exc


def read_config_file(path: Union[str, Path]) -> Dict[str, str]:
    """Parse ``key = value`` lines; ``#`` comments and blank lines are skipped, quotes stripped."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc

    values: Dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{number}: expected 'key = value', got {line.strip()!r}")
        key, value = stripped.split("=", 1)
        key = key.strip()
        value = value.strip().strip("\"'")
        if not key:
            raise ConfigError(f"{path}:{number}: empty key")
        values[key] = value
    return values


def load_config(path: Union[str, Path], **overrides: Any) -> ExperimentConfig:
    """Read ``path``, apply non-``None`` ``overrides`` and validate."""
    values: Dict[str, Any] = dict(read_config_file(path))
    values.update({key: value for key, value in overrides.items() if value is not None})
    config = make_config(values, source=str(path))
    logger.info("Loaded %s experiment config from %s", config.kind, path)
    return config


__all__ = [
    "ExperimentConfig",
    "ExperimentKind",
    "load_config",
    "make_config",
    "read_config_file",
]
