from pydantic import BaseModel, Field, field_validator, model_validator
from typing import List, Optional
import numpy as np

from wdro.constants import (
    Split,
    GeneratorName,
    MISSING_GROUP,
    SIMPLEX_TOL,
    CMNIST_FLIP_PROBS,
    CMNIST_GROUP_FRACTIONS,
    CMNIST_CORE_SNR,
    CMNIST_SPURIOUS_SNR,
    ADULT_POS_RATES,
    ADULT_GROUP_FRACTIONS,
    ADULT_CORE_SNR,
    ADULT_GROUP_SNR,
    DEFAULT_DIM,
    DEFAULT_LABELED_FRACTION,
)


class GroupedDataset(BaseModel):
    """Features, binary labels, observed groups (-1 = missing) and true groups."""

    features: np.ndarray
    labels: np.ndarray
    groups: np.ndarray
    true_groups: np.ndarray
    n_groups: int = Field(ge=1)
    split: Split = Split.TRAIN

    @field_validator("features", mode="before")
    def validate_features(cls, v):
        arr = np.asarray(v, dtype=float)
        if arr.ndim != 2:
            raise ValueError("Features must be an N x d matrix")
        return arr

    @field_validator("labels", "groups", "true_groups", mode="before")
    def validate_int_vector(cls, v):
        arr = np.asarray(v).astype(np.int64)
        if arr.ndim != 1:
            raise ValueError("Label vectors must be 1-D")
        return arr

    @model_validator(mode="after")
    def validate_consistency(self):
        n = self.features.shape[0]
        for name in ("labels", "groups", "true_groups"):
            if getattr(self, name).size != n:
                raise ValueError(f"Length of {name} does not match features")
        if n and not np.all(np.isin(self.labels, (0, 1))):
            raise ValueError("Labels must be binary")
        if n and (self.true_groups.min() < 0 or self.true_groups.max() >= self.n_groups):
            raise ValueError("True groups out of range")
        if n and (self.groups.min() < MISSING_GROUP or self.groups.max() >= self.n_groups):
            raise ValueError("Observed groups out of range")
        observed = self.groups != MISSING_GROUP
        if np.any(self.groups[observed] != self.true_groups[observed]):
            raise ValueError("Observed groups disagree with true groups")
        if self.split != Split.TRAIN and not np.all(observed):
            raise ValueError("Missing group labels are only allowed in the train split")
        return self

    @property
    def n(self) -> int:
        return int(self.features.shape[0])

    @property
    def dim(self) -> int:
        return int(self.features.shape[1])

    @property
    def labeled_mask(self) -> np.ndarray:
        return self.groups != MISSING_GROUP

    def group_counts(self) -> np.ndarray:
        """True-group sizes."""
        return np.bincount(self.true_groups, minlength=self.n_groups)

    def subset(self, indices: np.ndarray) -> "GroupedDataset":
        return GroupedDataset(
            features=self.features[indices],
            labels=self.labels[indices],
            groups=self.groups[indices],
            true_groups=self.true_groups[indices],
            n_groups=self.n_groups,
            split=self.split,
        )

    class Config:
        arbitrary_types_allowed = True


class MarginalEstimate(BaseModel):
    """Group frequencies estimated from the K labeled samples."""

    p_bar: List[float]
    labeled_count: int = Field(ge=1)

    @field_validator("p_bar")
    def validate_p_bar(cls, v):
        if any(p <= 0 for p in v):
            raise ValueError("Every marginal must be positive")
        if abs(sum(v) - 1.0) > SIMPLEX_TOL:
            raise ValueError("Marginals must sum to 1")
        return v


class DataConfig(BaseModel):
    """Generator configuration for the train/val/test splits."""

    generator: GeneratorName = GeneratorName.CMNIST_LIKE
    n_train: int = Field(default=10000, ge=1)
    n_val: int = Field(default=2000, ge=1)
    n_test: int = Field(default=5000, ge=1)
    group_fractions: List[float] = list(CMNIST_GROUP_FRACTIONS)
    flip_probs: List[float] = list(CMNIST_FLIP_PROBS)
    pos_rates: List[float] = list(ADULT_POS_RATES)
    core_snr: float = Field(default=CMNIST_CORE_SNR, ge=0)
    spurious_snr: float = Field(default=CMNIST_SPURIOUS_SNR, ge=0)
    group_snr: float = Field(default=ADULT_GROUP_SNR, ge=0)
    dim: int = Field(default=DEFAULT_DIM, ge=2)
    labeled_fraction: float = Field(default=DEFAULT_LABELED_FRACTION, gt=0, le=1)
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def validate_generator_fields(self):
        if abs(sum(self.group_fractions) - 1.0) > 1e-6:
            raise ValueError("group_fractions must sum to 1")
        m = len(self.group_fractions)
        if self.generator == GeneratorName.CMNIST_LIKE and len(self.flip_probs) != m:
            raise ValueError("flip_probs must have one entry per group")
        if self.generator == GeneratorName.ADULT_LIKE and len(self.pos_rates) != m:
            raise ValueError("pos_rates must have one entry per group")
        return self

    @property
    def n_groups(self) -> int:
        return len(self.group_fractions)

    @classmethod
    def adult_defaults(cls, **overrides) -> "DataConfig":
        base = {
            "generator": GeneratorName.ADULT_LIKE,
            "group_fractions": list(ADULT_GROUP_FRACTIONS),
            "pos_rates": list(ADULT_POS_RATES),
            "core_snr": ADULT_CORE_SNR,
        }
        base.update(overrides)
        return cls(**base)


class DatasetSummary(BaseModel):
    """Counts printed by gen-data."""

    split: Split
    labeled: int
    unlabeled: int
    total: int
    groups: int
    minority_samples: int
    majority_samples: int
    path: Optional[str] = None
