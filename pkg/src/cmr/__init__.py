"""Dynamical and constant r-matrices for the gl_n Calogero-Moser model."""

from .errors import (ArgumentError, ConvergenceError, DegeneracyError, DomainError,
                     EvolutionError, UnsupportedCaseError)
from .potentials import ModelCase

__version__ = "0.1.0"

__all__ = [
    "ArgumentError", "ConvergenceError", "DegeneracyError", "DomainError",
    "EvolutionError", "UnsupportedCaseError", "ModelCase", "__version__",
]
