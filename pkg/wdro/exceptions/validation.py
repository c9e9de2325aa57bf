"""
Validation exceptions for configuration and input shapes.
"""

from typing import Optional, Dict, Any, List, Tuple

from wdro.constants import EXIT_USAGE, EXIT_RUNTIME
from .base import WdroException


class ConfigError(WdroException):
    """
    Exception raised when a configuration is unusable.
    """

    def __init__(
        self,
        message: str = "Invalid configuration",
        field_errors: Optional[Dict[str, List[str]]] = None,
        details: Optional[Dict[str, Any]] = None
    ):
        if details is None:
            details = {}

        if field_errors:
            details["field_errors"] = field_errors

        super().__init__(
            message=message,
            error_code="CONFIG_ERROR",
            exit_code=EXIT_USAGE,
            details=details
        )


class InvalidConfig(ConfigError):
    """
    Exception raised when a generator or experiment parameter is out of range.
    """

    def __init__(self, field_name: str, value: Any = None, expected: str = None):
        super().__init__(
            message=f"Parameter '{field_name}' is invalid"
            + (f": expected {expected}" if expected else ""),
            details={
                "field": field_name,
                "value": repr(value),
                "expected": expected,
                "error_type": "invalid_config"
            }
        )
        self.error_code = "INVALID_CONFIG"


class ShapeMismatch(WdroException):
    """
    Exception raised when array shapes disagree.
    """

    def __init__(self, what: str, expected: Tuple[int, ...], actual: Tuple[int, ...]):
        super().__init__(
            message=f"Shape mismatch for {what}: expected {expected}, got {actual}",
            error_code="SHAPE_MISMATCH",
            exit_code=EXIT_RUNTIME,
            details={
                "what": what,
                "expected": list(expected),
                "actual": list(actual)
            }
        )
