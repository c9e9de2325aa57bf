from pydantic import BaseModel, Field, field_validator
from typing import List, Optional

from wdro.constants import Split


class EvaluationResult(BaseModel):
    """Per-group and overall accuracy of a predictor on one split."""

    loss: float
    acc_overall: float = Field(ge=0, le=1)
    acc_group: List[float]
    group_counts: List[int]
    absent: List[bool]

    @field_validator("acc_group")
    def validate_acc_group(cls, v):
        if any(not 0.0 <= acc <= 1.0 for acc in v):
            raise ValueError("Accuracies must be in [0, 1]")
        return v


class RunRecord(BaseModel):
    """One line of the metrics stream."""

    epoch: int
    split: Split
    loss: float
    acc_overall: float = Field(ge=0, le=1)
    acc_group: List[float]
    group_counts: List[int] = []
    absent: List[bool] = []
    q: List[float] = []
    eps_relaxations: int = 0

    @classmethod
    def from_evaluation(
        cls,
        result: EvaluationResult,
        epoch: int,
        split: Split,
        q: Optional[List[float]] = None,
        eps_relaxations: int = 0,
    ) -> "RunRecord":
        return cls(
            epoch=epoch,
            split=split,
            loss=result.loss,
            acc_overall=result.acc_overall,
            acc_group=result.acc_group,
            group_counts=result.group_counts,
            absent=result.absent,
            q=q or [],
            eps_relaxations=eps_relaxations,
        )


class AblationRow(BaseModel):
    config_id: str
    value: float
    seed_count: int
    min_acc_mean: float
    min_acc_sd: float
    avg_acc_mean: float
    avg_acc_sd: float
