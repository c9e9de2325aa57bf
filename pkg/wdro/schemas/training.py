from pydantic import BaseModel, Field, field_validator
from typing import List, Optional, Union, Literal

from wdro.constants import Algorithm, FULL_BATCH
from wdro.schemas.model import ModelSpec, ModelParams
from wdro.schemas.evaluation import RunRecord


class TrainConfig(BaseModel):
    """Hyper-parameters of one training run."""

    algorithm: Algorithm = Algorithm.ERM
    eta_w: float = Field(default=0.1, ge=0)
    eta_q: float = Field(default=0.01, ge=0)
    weight_decay: float = Field(default=0.001, ge=0)
    epsilon: float = Field(default=0.01, ge=0)
    eta_udro: float = Field(default=0.5, gt=0, lt=1)
    batch_size: Union[int, Literal["full"]] = FULL_BATCH
    epochs: int = Field(default=100, ge=0)
    momentum: float = Field(default=0.0, ge=0, lt=1)
    seed: int = Field(default=0, ge=0)
    model: ModelSpec = ModelSpec()
    audit_upper_bound: bool = False

    @field_validator("batch_size")
    def validate_batch_size(cls, v):
        if isinstance(v, int) and v < 1:
            raise ValueError("batch_size must be positive or 'full'")
        return v

    @property
    def batch_limit(self) -> Optional[int]:
        """Batch size, or None for full-batch training."""
        return None if self.batch_size == FULL_BATCH else int(self.batch_size)


class TrainedRun(BaseModel):
    """Final parameters, per-epoch records and run warnings."""

    algorithm: Algorithm
    params: ModelParams
    records: List[RunRecord] = []
    warnings: List[str] = []
    eps_relaxations: int = 0
    final_q: List[float] = []


class SweepEntry(BaseModel):
    config_id: int
    config: TrainConfig
    val: Optional[RunRecord] = None
    test: Optional[RunRecord] = None
    error: Optional[str] = None


class SweepResult(BaseModel):
    """One entry per configuration, in configuration order."""

    entries: List[SweepEntry]
    minority_group: int
