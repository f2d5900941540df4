"""State objects for simulations and experiment jobs."""

from .state import ExperimentState, SimulationState

__all__ = ["ExperimentState", "SimulationState"]
