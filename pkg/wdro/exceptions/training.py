"""
Training loop exceptions.
"""

from typing import Optional, Dict, Any

from .base import WdroException


class TrainingError(WdroException):
    """
    Exception raised when a training run cannot continue.
    """

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None
    ):
        super().__init__(
            message=message,
            error_code="TRAINING_ERROR",
            details=details
        )


class NonFiniteLoss(TrainingError):
    """
    Exception raised when a group loss is NaN or infinite.
    """

    def __init__(self, group: int = None):
        details = {"error_type": "non_finite_loss"}
        if group is not None:
            details["group"] = group

        super().__init__(
            message="Non-finite group loss"
            + (f" for group {group}" if group is not None else ""),
            details=details
        )
        self.error_code = "NON_FINITE_LOSS"


class UpperBoundViolation(TrainingError):
    """
    Exception raised when the solver objective falls below the ground-truth objective.
    """

    def __init__(self, epoch: int, batch: int, solver_objective: float, truth_objective: float):
        super().__init__(
            message=(
                f"Solver objective {solver_objective:.12g} below ground truth "
                f"{truth_objective:.12g} at epoch {epoch}, batch {batch}"
            ),
            details={
                "error_type": "upper_bound_violation",
                "epoch": epoch,
                "batch": batch,
                "solver_objective": solver_objective,
                "truth_objective": truth_objective
            }
        )
        self.error_code = "UPPER_BOUND_VIOLATION"
