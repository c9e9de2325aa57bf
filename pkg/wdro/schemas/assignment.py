from pydantic import BaseModel, Field, field_validator, model_validator
from typing import List, Tuple, Dict, Any
import numpy as np

from wdro.constants import SIMPLEX_TOL
from wdro.schemas.weights import GroupWeights


class ConstraintSpec(BaseModel):
    """Marginal vector, slack and pinned labeled rows defining the constraint set."""

    marginals: List[float]
    epsilon: float = Field(default=0.0, ge=0)
    pinned: List[Tuple[int, int]] = []

    @field_validator("marginals")
    def validate_marginals(cls, v):
        if len(v) < 1:
            raise ValueError("At least one marginal is required")
        if not all(np.isfinite(v)):
            raise ValueError("Marginals must be finite")
        if abs(sum(v) - 1.0) > SIMPLEX_TOL:
            raise ValueError(f"Marginals must sum to 1, got {sum(v)!r}")
        return v

    @model_validator(mode="after")
    def validate_pinned(self):
        rows = [row for row, _ in self.pinned]
        if len(set(rows)) != len(rows):
            raise ValueError("Pinned row indices must be unique")
        for row, group in self.pinned:
            if row < 0:
                raise ValueError(f"Pinned row {row} is negative")
            if not 0 <= group < len(self.marginals):
                raise ValueError(f"Pinned group {group} out of range")
        return self

    @property
    def n_groups(self) -> int:
        return len(self.marginals)

    def pinned_counts(self) -> np.ndarray:
        counts = np.zeros(self.n_groups)
        for _, group in self.pinned:
            counts[group] += 1.0
        return counts

    def with_epsilon(self, epsilon: float) -> "ConstraintSpec":
        return self.model_copy(update={"epsilon": float(epsilon)})


class AssignmentMatrix(BaseModel):
    """Row-stochastic soft group assignment, with the slack it was solved under."""

    values: np.ndarray
    epsilon: float = Field(default=0.0, ge=0)
    relaxed: bool = False

    @field_validator("values", mode="before")
    def validate_values(cls, v):
        arr = np.asarray(v, dtype=float)
        if arr.ndim != 2:
            raise ValueError("Assignment matrix must be 2-D")
        if not np.all(np.isfinite(arr)):
            raise ValueError("Assignment matrix must be finite")
        return arr

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    def column_sums(self) -> np.ndarray:
        return self.values.sum(axis=0)

    def to_rows(self) -> List[List[float]]:
        return self.values.tolist()

    class Config:
        arbitrary_types_allowed = True


class SolveProblem(BaseModel):
    """Per-sample losses, group weights and constraints for one assignment solve."""

    losses: np.ndarray
    weights: GroupWeights
    constraints: ConstraintSpec

    @field_validator("losses", mode="before")
    def validate_losses(cls, v):
        arr = np.asarray(v, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("Losses must be a non-empty vector")
        if not np.all(np.isfinite(arr)):
            raise ValueError("Losses must be finite")
        if np.any(arr < 0):
            raise ValueError("Losses must be nonnegative")
        return arr

    @model_validator(mode="after")
    def validate_shapes(self):
        m = self.constraints.n_groups
        if m < 2:
            raise ValueError("At least two groups are required")
        if self.weights.m != m:
            raise ValueError(f"Expected {m} group weights, got {self.weights.m}")
        n = self.losses.size
        for row, _ in self.constraints.pinned:
            if row >= n:
                raise ValueError(f"Pinned row {row} out of range for {n} samples")
        return self

    @property
    def n(self) -> int:
        return int(self.losses.size)

    @property
    def m(self) -> int:
        return self.constraints.n_groups

    @property
    def theta(self) -> np.ndarray:
        """Column cost q_j / (N p_j)."""
        marginals = np.asarray(self.constraints.marginals, dtype=float)
        return self.weights.values / (self.n * marginals)

    class Config:
        arbitrary_types_allowed = True


class SolverReport(BaseModel):
    instances: int
    max_objective_gap: float
    violations: List[Dict[str, Any]] = []
    passed: bool
