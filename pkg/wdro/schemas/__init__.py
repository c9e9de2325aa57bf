"""
Domain types as pydantic models.
"""

from .weights import GroupWeights
from .assignment import ConstraintSpec, AssignmentMatrix, SolveProblem, SolverReport
from .model import ModelSpec, ModelParams, LossBatch, layer_shapes, param_count
from .dataset import GroupedDataset, MarginalEstimate, DataConfig, DatasetSummary
from .evaluation import EvaluationResult, RunRecord, AblationRow
from .training import TrainConfig, TrainedRun, SweepEntry, SweepResult
from .bounds import CoverageReport, BoundsCheckRow, BoundsReport, UpperBoundReport
from .experiment import ExperimentConfig

__all__ = [
    "GroupWeights",
    "ConstraintSpec",
    "AssignmentMatrix",
    "SolveProblem",
    "SolverReport",
    "ModelSpec",
    "ModelParams",
    "LossBatch",
    "layer_shapes",
    "param_count",
    "GroupedDataset",
    "MarginalEstimate",
    "DataConfig",
    "DatasetSummary",
    "EvaluationResult",
    "RunRecord",
    "AblationRow",
    "TrainConfig",
    "TrainedRun",
    "SweepEntry",
    "SweepResult",
    "CoverageReport",
    "BoundsCheckRow",
    "BoundsReport",
    "UpperBoundReport",
    "ExperimentConfig",
]
