"""Exception types raised across the package."""

from __future__ import annotations


class ArgumentError(ValueError):
    """Bad shape, index, slot name or mixed scalar modes."""


class DomainError(ValueError):
    """A coordinate lies outside the admissible domain of the potential."""


class DegeneracyError(DomainError):
    """Coincident values make an explicit inverse formula singular."""


class UnsupportedCaseError(ValueError):
    """The requested check has no meaning for this model case."""


class EvolutionError(RuntimeError):
    """A trajectory left the admissible domain.

    ``last_step`` is the index of the last admissible point and
    ``trajectory`` holds the points computed up to and including it.
    """

    def __init__(self, message: str, last_step: int, trajectory=None):
        super().__init__(message)
        self.last_step = last_step
        self.trajectory = trajectory if trajectory is not None else []


class ConvergenceError(RuntimeError):
    """More than half of the Newton trials failed to converge."""
