"""Exception types shared across the package."""

from __future__ import annotations


class ConfigError(ValueError):
    """Invalid configuration text or parameter value.

    `key` names the offending entry; `line` is the 1-based line number when
    the error comes from parsing a config file (None otherwise).
    """

    def __init__(self, message: str, *, key: str | None = None, line: int | None = None):
        super().__init__(message)
        self.key = key
        self.line = line


class OutOfDomainError(ValueError):
    """A point fell outside the closed meridian domain. Carries the point."""

    def __init__(self, point, message: str | None = None):
        self.point = tuple(float(c) for c in point)
        super().__init__(message or f"point {self.point} lies outside the closed domain")


class SolverError(RuntimeError):
    """Base class for time-stepping failures."""


class StepFailure(SolverError):
    """Linear solve failed to reach the residual target within the iteration cap.

    `residuals` is the history of relative residuals, one entry per attempt.
    """

    def __init__(self, message: str, residuals):
        super().__init__(message)
        self.residuals = list(residuals)


class DivergenceError(SolverError):
    """Non-finite values appeared in the advanced state. Carries the time stamp."""

    def __init__(self, time: float):
        super().__init__(f"non-finite values in state at t={time:.6g}")
        self.time = float(time)
