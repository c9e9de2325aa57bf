"""
Enumerations and numeric constants shared across the package.
"""

from enum import Enum
from typing import Dict, List, Tuple


class Algorithm(str, Enum):
    """Training algorithm enumeration."""
    ERM = "erm"
    UNSUP_DRO = "unsup_dro"
    GROUP_DRO_ORACLE = "group_dro_oracle"
    GROUP_DRO_PARTIAL = "group_dro_partial"
    WORSTOFF_DRO = "worstoff_dro"


class ModelKind(str, Enum):
    """Predictor architecture enumeration."""
    LINEAR = "linear"
    MLP = "mlp"


class Activation(str, Enum):
    """Hidden-layer activation enumeration."""
    RELU = "relu"
    TANH = "tanh"


class Split(str, Enum):
    """Dataset split enumeration."""
    TRAIN = "train"
    VAL = "val"
    TEST = "test"


class GeneratorName(str, Enum):
    """Synthetic dataset generator enumeration."""
    CMNIST_LIKE = "cmnist_like"
    ADULT_LIKE = "adult_like"


# Group label encoding
MISSING_GROUP = -1

# Numeric tolerances
SIMPLEX_TOL = 1e-9
ASSIGNMENT_TOL = 1e-9
OBJECTIVE_TOL = 1e-8
EMPTY_GROUP_MASS = 1e-12
RELAXATION_MARGIN = 1e-9

# Batch size sentinel for full-batch training
FULL_BATCH = "full"

# Generator defaults
CMNIST_FLIP_PROBS: Tuple[float, ...] = (0.2, 0.1, 0.9)
CMNIST_GROUP_FRACTIONS: Tuple[float, ...] = (0.45, 0.45, 0.10)
CMNIST_CORE_SNR = 1.0
CMNIST_SPURIOUS_SNR = 3.0
ADULT_POS_RATES: Tuple[float, ...] = (0.06, 0.94, 0.94, 0.94)
ADULT_GROUP_FRACTIONS: Tuple[float, ...] = (0.10, 0.30, 0.30, 0.30)
ADULT_CORE_SNR = 1.0
ADULT_GROUP_SNR = 2.0
DEFAULT_DIM = 20
DEFAULT_LABELED_FRACTION = 0.1

# Model selection
NVP_TOP_K = 5

# Ablation grids
EPSILON_GRID: List[float] = [0.0, 0.001, 0.01, 0.1, 1.0]
LABELED_FRACTION_GRID: List[float] = [0.05, 0.1, 0.2, 0.5, 1.0]

# Coverage verification grid
BOUNDS_GRID: Dict[str, List[float]] = {
    "n": [100, 1000, 10000],
    "eps": [0.02, 0.05, 0.1],
    "k": [50, 500],
    "delta": [0.05, 0.1],
}
BOUNDS_P_STAR: Tuple[float, ...] = (0.45, 0.45, 0.10)
BOUNDS_TRIALS = 10000

# Evaluation table column order
ABLATION_COLUMNS: List[str] = [
    "config_id",
    "value",
    "seed_count",
    "min_acc_mean",
    "min_acc_sd",
    "avg_acc_mean",
    "avg_acc_sd",
]

SWEEP_COLUMNS: List[str] = [
    "config_id",
    "algorithm",
    "eta_w",
    "eta_q",
    "weight_decay",
    "epsilon",
    "eta_udro",
    "val_acc_overall",
    "val_acc_minority",
    "test_acc_overall",
    "test_acc_minority",
    "error",
]

# CLI exit codes
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2
EXIT_VERIFICATION = 3
