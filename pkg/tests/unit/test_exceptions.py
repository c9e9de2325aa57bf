"""
Unit tests for custom exception classes.
"""

from wdro.constants import EXIT_USAGE, EXIT_RUNTIME
from wdro.exceptions import (
    WdroException,
    ConfigError,
    InvalidConfig,
    ShapeMismatch,
    SolverError,
    InfeasibleConstraints,
    DegenerateMarginal,
    SizeLimitExceeded,
    DataError,
    UnobservedGroup,
    EmptySplit,
    EmptyTrainSet,
    DatasetIOError,
    TrainingError,
    NonFiniteLoss,
    UpperBoundViolation,
)


class TestWdroException:
    """Test base package exception."""

    def test_base_exception_creation(self):
        """Test basic exception creation."""
        exc = WdroException(message="Test error", error_code="TEST_ERROR")

        assert exc.message == "Test error"
        assert exc.error_code == "TEST_ERROR"
        assert exc.exit_code == EXIT_RUNTIME
        assert exc.details is None
        assert str(exc) == "Test error"

    def test_to_dict(self):
        """Test CLI error payload."""
        exc = WdroException("Boom", error_code="X", details={"a": 1})
        assert exc.to_dict() == {"error": "X", "message": "Boom", "details": {"a": 1}}


class TestValidationExceptions:
    """Test configuration and shape exceptions."""

    def test_config_error_is_a_usage_error(self):
        exc = ConfigError("bad flag", field_errors={"eps": ["must be >= 0"]})

        assert exc.error_code == "CONFIG_ERROR"
        assert exc.exit_code == EXIT_USAGE
        assert exc.details["field_errors"] == {"eps": ["must be >= 0"]}

    def test_invalid_config(self):
        exc = InvalidConfig("labeled_fraction", 1.5, "in (0, 1]")

        assert exc.error_code == "INVALID_CONFIG"
        assert exc.exit_code == EXIT_USAGE
        assert "labeled_fraction" in exc.message
        assert exc.details["value"] == "1.5"
        assert isinstance(exc, ConfigError)

    def test_shape_mismatch_is_a_runtime_error(self):
        exc = ShapeMismatch("features", (3, 2), (3, 4))

        assert exc.exit_code == EXIT_RUNTIME
        assert exc.details == {"what": "features", "expected": [3, 2], "actual": [3, 4]}


class TestSolverExceptions:
    """Test assignment solver exceptions."""

    def test_infeasible_constraints_reports_min_epsilon(self):
        exc = InfeasibleConstraints(0.0, 0.65)

        assert exc.error_code == "INFEASIBLE_CONSTRAINTS"
        assert exc.min_epsilon == 0.65
        assert "min_epsilon=0.65" in exc.message
        assert isinstance(exc, SolverError)

    def test_degenerate_marginal(self):
        exc = DegenerateMarginal(2, 1e-8, 1e-6)

        assert exc.error_code == "DEGENERATE_MARGINAL"
        assert exc.details["group"] == 2

    def test_size_limit(self):
        exc = SizeLimitExceeded(12, 2, 10, 4)

        assert exc.error_code == "SIZE_LIMIT_EXCEEDED"
        assert "12x2" in exc.message


class TestDataExceptions:
    """Test dataset exceptions."""

    def test_unobserved_group(self):
        exc = UnobservedGroup(1)

        assert exc.error_code == "UNOBSERVED_GROUP"
        assert exc.exit_code == EXIT_RUNTIME
        assert isinstance(exc, DataError)

    def test_empty_split(self):
        assert EmptySplit("test").message == "Split 'test' is empty"
        assert EmptySplit().message == "Split is empty"

    def test_empty_train_set(self):
        exc = EmptyTrainSet("group_dro_partial")
        assert exc.error_code == "EMPTY_TRAIN_SET"
        assert "group_dro_partial" in exc.message

    def test_dataset_io_error(self):
        exc = DatasetIOError("/tmp/x.csv", "file not found")
        assert exc.error_code == "IO_ERROR"
        assert exc.details["path"] == "/tmp/x.csv"


class TestTrainingExceptions:
    """Test training loop exceptions."""

    def test_non_finite_loss(self):
        assert NonFiniteLoss().details == {"error_type": "non_finite_loss"}
        assert NonFiniteLoss(2).details["group"] == 2
        assert isinstance(NonFiniteLoss(), TrainingError)

    def test_upper_bound_violation(self):
        exc = UpperBoundViolation(3, 1, 0.5, 0.75)

        assert exc.error_code == "UPPER_BOUND_VIOLATION"
        assert exc.details["epoch"] == 3
        assert exc.details["truth_objective"] == 0.75
