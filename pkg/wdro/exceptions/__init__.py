"""
Exception module initialization.
"""

from .base import WdroException
from .validation import ConfigError, InvalidConfig, ShapeMismatch
from .solver import (
    SolverError, InfeasibleConstraints, DegenerateMarginal, SizeLimitExceeded
)
from .data import (
    DataError, UnobservedGroup, EmptySplit, EmptyTrainSet, DatasetIOError
)
from .training import TrainingError, NonFiniteLoss, UpperBoundViolation

__all__ = [
    # Base exception
    "WdroException",

    # Validation exceptions
    "ConfigError",
    "InvalidConfig",
    "ShapeMismatch",

    # Solver exceptions
    "SolverError",
    "InfeasibleConstraints",
    "DegenerateMarginal",
    "SizeLimitExceeded",

    # Data exceptions
    "DataError",
    "UnobservedGroup",
    "EmptySplit",
    "EmptyTrainSet",
    "DatasetIOError",

    # Training exceptions
    "TrainingError",
    "NonFiniteLoss",
    "UpperBoundViolation"
]
