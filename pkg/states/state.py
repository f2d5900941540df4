from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Literal
from dataclasses import dataclass, field

from spectral import SpectralField

ExperimentStage = Literal["setup", "simulate", "analyse", "emit", "done"]


def _serialise(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, dict):
        return {str(key): _serialise(val) for key, val in value.items()}
    if isinstance(value, (list, tuple)):
        return [_serialise(item) for item in value]
    if isinstance(value, set):
        return [_serialise(item) for item in sorted(value)]
    if hasattr(value, "tolist"):
        return value.tolist()
    return str(value)


@dataclass
class SimulationState:
    """Mutable state of one time integration; the mean coefficient stays pinned."""

    theta: SpectralField
    t: float = 0.0
    total_steps: int = 0
    max_steps: int = 10_000_000
    integrals: Dict[str, float] = field(default_factory=dict)

    def step(self, dt: float) -> None:
        """Advance the clock and guard against runaway integrations."""
        self.total_steps += 1
        self.t += dt
        if self.total_steps > self.max_steps:
            raise RuntimeError(f"Exceeded max step limit ({self.max_steps}) at t={self.t:.6g}.")

    def accumulate(self, name: str, increment: float) -> None:
        self.integrals[name] = self.integrals.get(name, 0.0) + increment


@dataclass
class ExperimentState:
    """Progress of one experiment job through the harness stages."""

    kind: str
    config: Dict[str, Any]
    stage: ExperimentStage = "setup"
    notes: Dict[str, List[str]] = field(default_factory=dict)
    records: List[Dict[str, Any]] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    outputs: Dict[str, str] = field(default_factory=dict)
    total_steps: int = 0
    max_steps: int = 50
    history: List[Dict[str, Any]] = field(default_factory=list)
    result: Optional[Any] = None

    def log(self, stage: str, message: str):
        self.notes.setdefault(stage, []).append(message)

    def step(self, stage: ExperimentStage):
        """Track stage transitions and prevent runaway workflows."""
        self.stage = stage
        self.total_steps += 1
        if self.total_steps > self.max_steps:
            raise RuntimeError(f"Exceeded max step limit ({self.max_steps}) in stage {stage!r}.")

    def snapshot(self, *, stage: str, result: Any) -> Dict[str, Any]:
        """Capture a serialisable view of the experiment's progress."""
        entry = {
            "step": self.total_steps,
            "stage": stage,
            "kind": self.kind,
            "result": _serialise(result),
            "notes": list(self.notes.get(stage, [])),
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        }
        self.history.append(entry)
        return entry
