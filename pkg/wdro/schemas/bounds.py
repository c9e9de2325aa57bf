from pydantic import BaseModel, Field, field_validator
from typing import List, Optional, Dict, Any


class CoverageReport(BaseModel):
    """Monte Carlo containment frequencies next to the analytic bound."""

    per_group_frequency: List[float]
    joint_frequency: float = Field(ge=0, le=1)
    analytic_bound: float
    trials: int = Field(ge=1)
    n: int
    eps: float
    k: Optional[int] = None
    delta: Optional[float] = None

    @field_validator("per_group_frequency")
    def validate_frequencies(cls, v):
        if any(not 0.0 <= f <= 1.0 for f in v):
            raise ValueError("Frequencies must be in [0, 1]")
        return v


class BoundsCheckRow(BaseModel):
    kind: str
    n: int
    eps: float
    k: Optional[int] = None
    delta: Optional[float] = None
    analytic_bound: float
    min_group_frequency: float
    joint_frequency: float
    tolerance: float
    passed: bool


class BoundsReport(BaseModel):
    rows: List[BoundsCheckRow]
    trials: int
    passed: bool


class UpperBoundReport(BaseModel):
    instances: int
    violations: List[Dict[str, Any]] = []
    nesting_violations: List[Dict[str, Any]] = []
    passed: bool
