"""
Assignment solver exceptions.
"""

from typing import Optional, Dict, Any

from .base import WdroException


class SolverError(WdroException):
    """
    Exception raised when the group assignment problem cannot be solved.
    """

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None
    ):
        super().__init__(
            message=message,
            error_code="SOLVER_ERROR",
            details=details
        )


class InfeasibleConstraints(SolverError):
    """
    Exception raised when pinned rows make the marginal constraint set empty.
    """

    def __init__(self, epsilon: float, min_epsilon: float):
        super().__init__(
            message=(
                f"Constraint set is empty at epsilon={epsilon:g}; "
                f"min_epsilon={min_epsilon:.12g}"
            ),
            details={
                "error_type": "infeasible_constraints",
                "epsilon": epsilon,
                "min_epsilon": min_epsilon
            }
        )
        self.error_code = "INFEASIBLE_CONSTRAINTS"
        self.min_epsilon = min_epsilon


class DegenerateMarginal(SolverError):
    """
    Exception raised when a marginal is too small to define a column cost.
    """

    def __init__(self, group: int, value: float, floor: float):
        super().__init__(
            message=f"Marginal of group {group} is {value:g}, below floor {floor:g}",
            details={
                "error_type": "degenerate_marginal",
                "group": group,
                "value": value,
                "floor": floor
            }
        )
        self.error_code = "DEGENERATE_MARGINAL"


class SizeLimitExceeded(SolverError):
    """
    Exception raised when the exhaustive oracle is asked for a large instance.
    """

    def __init__(self, n: int, m: int, max_n: int, max_m: int):
        super().__init__(
            message=f"Instance {n}x{m} exceeds oracle limit {max_n}x{max_m}",
            details={
                "error_type": "size_limit",
                "n": n,
                "m": m,
                "max_n": max_n,
                "max_m": max_m
            }
        )
        self.error_code = "SIZE_LIMIT_EXCEEDED"
