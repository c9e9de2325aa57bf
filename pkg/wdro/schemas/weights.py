from pydantic import BaseModel, field_validator
from typing import List
import numpy as np

from wdro.constants import SIMPLEX_TOL


class GroupWeights(BaseModel):
    """Simplex vector q over the M groups."""

    values: np.ndarray

    @field_validator("values", mode="before")
    def validate_values(cls, v):
        arr = np.asarray(v, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("Group weights must be a non-empty vector")
        if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
            raise ValueError("Group weights must be finite and positive")
        if abs(arr.sum() - 1.0) > SIMPLEX_TOL:
            raise ValueError(f"Group weights must sum to 1, got {arr.sum()!r}")
        return arr

    @classmethod
    def uniform(cls, m: int) -> "GroupWeights":
        return cls(values=np.full(m, 1.0 / m))

    @property
    def m(self) -> int:
        return int(self.values.size)

    def to_list(self) -> List[float]:
        return self.values.tolist()

    class Config:
        arbitrary_types_allowed = True
