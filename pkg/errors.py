"""Exception hierarchy shared by every package of the toolkit."""

from __future__ import annotations

from typing import Optional


class LogBesovError(Exception):
    """Base class for all domain errors raised by the toolkit."""


class SymmetryViolationError(LogBesovError, ValueError):
    """Spectral coefficients do not describe a real field."""


class InvalidExponentError(LogBesovError, ValueError):
    """An integrability exponent lies outside its admissible range."""


class InvalidGeneratorError(LogBesovError, ValueError):
    """A generator profile violates the partition-of-unity requirements."""


class BlockIndexError(LogBesovError, IndexError):
    """A dyadic block index is outside the resolved range."""


class PreconditionError(LogBesovError, ValueError):
    """An operation was called on input that violates its precondition."""


class UndefinedRatioError(PreconditionError):
    """A ratio-type quantity was requested for a zero field."""


class NonFiniteFieldError(PreconditionError):
    """Grid samples contain NaN or infinite values."""


class EmptyMeasureError(PreconditionError):
    """A measure would carry no mass."""


class MassMismatchError(PreconditionError):
    """Two measures to be coupled carry different total masses."""


class ResourceLimitError(LogBesovError, RuntimeError):
    """An input is too large for a quadratic-cost diagnostic or solver."""


class StepSizeError(LogBesovError, ValueError):
    """The time step violates the CFL restriction."""


class SolverDivergenceError(LogBesovError, RuntimeError):
    """The time integration produced non-finite values."""

    def __init__(self, message: str, *, step: int, time: float) -> None:
        super().__init__(message)
        self.step = step
        self.time = time


class InvalidParameterError(LogBesovError, ValueError):
    """A scalar parameter lies outside its admissible range."""


class ConvergenceError(LogBesovError, RuntimeError):
    """An iterative method stopped before reaching its tolerance."""

    def __init__(self, message: str, *, residual: float, iterations: int) -> None:
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class ConfigError(LogBesovError, ValueError):
    """An experiment or solver configuration is inconsistent."""


class EmitError(LogBesovError, OSError):
    """Results could not be written to or read from disk."""

    def __init__(self, message: str, *, path: Optional[str] = None) -> None:
        super().__init__(message)
        self.path = path


class SnapshotFormatError(LogBesovError, ValueError):
    """A field snapshot file is malformed."""


__all__ = [
    "LogBesovError",
    "SymmetryViolationError",
    "InvalidExponentError",
    "InvalidGeneratorError",
    "BlockIndexError",
    "PreconditionError",
    "UndefinedRatioError",
    "NonFiniteFieldError",
    "EmptyMeasureError",
    "MassMismatchError",
    "ResourceLimitError",
    "StepSizeError",
    "SolverDivergenceError",
    "InvalidParameterError",
    "ConvergenceError",
    "ConfigError",
    "EmitError",
    "SnapshotFormatError",
]
