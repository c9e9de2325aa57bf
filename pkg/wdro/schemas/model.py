from pydantic import BaseModel, Field, field_validator, model_validator
from typing import List, Tuple
import json
import numpy as np

from wdro.constants import ModelKind, Activation


def layer_shapes(input_dim: int, hidden: Tuple[int, ...]) -> List[Tuple[int, int]]:
    """(fan_in, fan_out) of every dense layer, ending in a single logit."""
    dims = [input_dim, *hidden, 1]
    return [(dims[i], dims[i + 1]) for i in range(len(dims) - 1)]


def param_count(input_dim: int, hidden: Tuple[int, ...]) -> int:
    return sum(fan_in * fan_out + fan_out for fan_in, fan_out in layer_shapes(input_dim, hidden))


class ModelSpec(BaseModel):
    """Architecture of a predictor, without weights."""

    kind: ModelKind = ModelKind.LINEAR
    hidden: Tuple[int, ...] = ()
    activation: Activation = Activation.RELU

    @model_validator(mode="after")
    def validate_hidden(self):
        if self.kind == ModelKind.LINEAR and self.hidden:
            raise ValueError("Linear models take no hidden layers")
        if self.kind == ModelKind.MLP and not 1 <= len(self.hidden) <= 2:
            raise ValueError("MLP models take one or two hidden layers")
        if any(size < 1 for size in self.hidden):
            raise ValueError("Hidden sizes must be positive")
        return self


class ModelParams(BaseModel):
    """Architecture header plus the flat weight vector w."""

    kind: ModelKind = ModelKind.LINEAR
    hidden: Tuple[int, ...] = ()
    activation: Activation = Activation.RELU
    input_dim: int = Field(ge=1)
    weights: np.ndarray

    @field_validator("weights", mode="before")
    def validate_weights(cls, v):
        arr = np.asarray(v, dtype=float)
        if arr.ndim != 1:
            raise ValueError("Weights must be a flat vector")
        if not np.all(np.isfinite(arr)):
            raise ValueError("Weights must be finite")
        return arr

    @model_validator(mode="after")
    def validate_length(self):
        ModelSpec(kind=self.kind, hidden=self.hidden, activation=self.activation)
        expected = param_count(self.input_dim, self.hidden)
        if self.weights.size != expected:
            raise ValueError(f"Expected {expected} weights, got {self.weights.size}")
        return self

    @property
    def spec(self) -> ModelSpec:
        return ModelSpec(kind=self.kind, hidden=self.hidden, activation=self.activation)

    def with_weights(self, weights: np.ndarray) -> "ModelParams":
        return ModelParams(
            kind=self.kind,
            hidden=self.hidden,
            activation=self.activation,
            input_dim=self.input_dim,
            weights=weights,
        )

    def to_json(self) -> str:
        """Checkpoint as a JSON document: architecture header and weight array."""
        return json.dumps(
            {
                "kind": self.kind.value,
                "hidden": list(self.hidden),
                "activation": self.activation.value,
                "input_dim": self.input_dim,
                "weights": self.weights.tolist(),
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, payload: str) -> "ModelParams":
        data = json.loads(payload)
        data["hidden"] = tuple(data.get("hidden", ()))
        return cls(**data)

    class Config:
        arbitrary_types_allowed = True


class LossBatch(BaseModel):
    """Per-sample binary cross-entropy values and their mean."""

    per_sample: np.ndarray
    mean: float

    @model_validator(mode="after")
    def validate_mean(self):
        if self.per_sample.size and abs(float(self.per_sample.mean()) - self.mean) > 1e-9:
            raise ValueError("Mean does not match per-sample losses")
        return self

    class Config:
        arbitrary_types_allowed = True
