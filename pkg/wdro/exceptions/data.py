"""
Dataset exceptions for generation, masking and file I/O.
"""

from typing import Optional, Dict, Any

from .base import WdroException


class DataError(WdroException):
    """
    Exception raised when a dataset cannot serve the requested operation.
    """

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None
    ):
        super().__init__(
            message=message,
            error_code="DATA_ERROR",
            details=details
        )


class UnobservedGroup(DataError):
    """
    Exception raised when a group has no labeled sample to estimate from.
    """

    def __init__(self, group: int):
        super().__init__(
            message=f"Group {group} has no labeled samples",
            details={"error_type": "unobserved_group", "group": group}
        )
        self.error_code = "UNOBSERVED_GROUP"


class EmptySplit(DataError):
    """
    Exception raised when evaluating on a split with no samples.
    """

    def __init__(self, split: str = None):
        super().__init__(
            message=f"Split '{split}' is empty" if split else "Split is empty",
            details={"error_type": "empty_split", "split": split}
        )
        self.error_code = "EMPTY_SPLIT"


class EmptyTrainSet(DataError):
    """
    Exception raised when a trainer is left with no usable training samples.
    """

    def __init__(self, algorithm: str):
        super().__init__(
            message=f"No usable training samples for {algorithm}",
            details={"error_type": "empty_train_set", "algorithm": algorithm}
        )
        self.error_code = "EMPTY_TRAIN_SET"


class DatasetIOError(DataError):
    """
    Exception raised when a dataset file cannot be read or written.
    """

    def __init__(self, path: str, reason: str):
        super().__init__(
            message=f"Dataset file '{path}': {reason}",
            details={"error_type": "io_error", "path": path, "reason": reason}
        )
        self.error_code = "IO_ERROR"
