from pydantic import BaseModel, Field, model_validator
from typing import Dict, List, Optional, Any

from wdro.constants import EPSILON_GRID, LABELED_FRACTION_GRID, NVP_TOP_K
from wdro.schemas.dataset import DataConfig
from wdro.schemas.training import TrainConfig


class ExperimentConfig(BaseModel):
    """Dataset source, training configuration, grids and output location."""

    dataset: Optional[DataConfig] = None
    dataset_path: Optional[str] = None
    train: TrainConfig = TrainConfig()
    grid: Dict[str, List[Any]] = {}
    fractions: List[float] = list(LABELED_FRACTION_GRID)
    eps_values: List[float] = list(EPSILON_GRID)
    seeds: List[int] = [0, 1, 2]
    top_k: int = Field(default=NVP_TOP_K, ge=1)
    out_dir: str = "runs"
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def validate_dataset_source(self):
        if (self.dataset is None) == (self.dataset_path is None):
            raise ValueError("Exactly one of 'dataset' and 'dataset_path' is required")
        return self

    @model_validator(mode="after")
    def validate_grid_keys(self):
        unknown = set(self.grid) - set(TrainConfig.model_fields)
        if unknown:
            raise ValueError(f"Unknown grid parameters: {sorted(unknown)}")
        return self
