"""Unit tests for custom exceptions."""

import pytest

from cgnn.exceptions import (
    CGNNError,
    DataFormatError,
    DivergenceError,
    NotPositiveDefiniteError,
    NumericalError,
    OracleSizeError,
    StaleCacheError,
    UndefinedMetricError,
    UnknownMethodError,
    ValidationError,
)


class TestCGNNError:
    """Tests for the base CGNNError."""

    def test_creates_with_required_fields(self):
        """Should create exception with error_code and message."""
        exc = CGNNError(error_code="TEST_ERROR", message="Test message")

        assert exc.error_code == "TEST_ERROR"
        assert exc.message == "Test message"
        assert exc.exit_code == 2  # Default
        assert exc.details == {}

    def test_creates_with_custom_exit_code(self):
        """Should accept a custom exit code."""
        exc = CGNNError(error_code="CUSTOM", message="Custom error", exit_code=5)

        assert exc.exit_code == 5

    def test_creates_with_details(self):
        """Should store additional details."""
        details = {"field": "probes", "reason": "negative"}
        exc = CGNNError(error_code="VALIDATION", message="Invalid input", details=details)

        assert exc.details == details

    def test_str_representation(self):
        """Should have proper string representation."""
        exc = CGNNError(error_code="TEST", message="Test message")

        assert str(exc) == "Test message"


class TestInputErrors:
    """Tests for errors caused by bad input, which exit with code 2."""

    def test_validation_error_defaults(self):
        """Should default to INVALID_INPUT."""
        exc = ValidationError()

        assert exc.error_code == "INVALID_INPUT"
        assert exc.exit_code == 2

    def test_validation_error_custom_code(self):
        """Should keep a custom error code and details."""
        exc = ValidationError(error_code="SELF_LOOP", message="loop", details={"vertex": 3})

        assert exc.error_code == "SELF_LOOP"
        assert exc.details == {"vertex": 3}

    def test_data_format_error_defaults(self):
        """Should default to INVALID_BUNDLE."""
        exc = DataFormatError()

        assert exc.error_code == "INVALID_BUNDLE"
        assert exc.exit_code == 2

    def test_unknown_method_lists_allowed(self):
        """Should report the method and the allowed methods."""
        exc = UnknownMethodError("c-foo", ["lp", "c-gnn"])

        assert exc.error_code == "UNKNOWN_METHOD"
        assert exc.details == {"method": "c-foo", "allowed_methods": ["lp", "c-gnn"]}
        assert "c-foo" in exc.message

    def test_oracle_size_error(self):
        """Should report the dimension and the limit."""
        exc = OracleSizeError(dimension=900, limit=500)

        assert exc.error_code == "ORACLE_TOO_LARGE"
        assert exc.details == {"dimension": 900, "limit": 500}


class TestNumericalErrors:
    """Tests for numerical failures, which exit with code 3."""

    def test_numerical_error_defaults(self):
        """Should default to NON_FINITE_VALUE."""
        exc = NumericalError()

        assert exc.error_code == "NON_FINITE_VALUE"
        assert exc.exit_code == 3

    @pytest.mark.parametrize(
        "exc, code",
        [
            (NotPositiveDefiniteError(), "NOT_POSITIVE_DEFINITE"),
            (DivergenceError(), "TRAINING_DIVERGED"),
        ],
    )
    def test_subclasses_are_numerical(self, exc, code):
        """Should share the numerical exit code."""
        assert isinstance(exc, NumericalError)
        assert exc.error_code == code
        assert exc.exit_code == 3

    def test_stale_cache_error(self):
        """Should carry both tokens."""
        exc = StaleCacheError("abc", "def")

        assert exc.error_code == "STALE_FORWARD_CACHE"
        assert exc.details == {"cache_token": "abc", "params_token": "def"}
        assert exc.exit_code == 3

    def test_undefined_metric_error(self):
        """Should use METRIC_UNDEFINED."""
        exc = UndefinedMetricError(details={"n": 4})

        assert exc.error_code == "METRIC_UNDEFINED"
        assert exc.details == {"n": 4}


class TestExceptionInheritance:
    """Tests for exception inheritance."""

    @pytest.mark.parametrize(
        "exc",
        [
            ValidationError(),
            DataFormatError(),
            UnknownMethodError("x", []),
            OracleSizeError(1, 0),
            NumericalError(),
            StaleCacheError("a", "b"),
            UndefinedMetricError(),
        ],
    )
    def test_all_inherit_from_cgnn_error(self, exc):
        """Should all inherit from CGNNError."""
        assert isinstance(exc, CGNNError)
        assert isinstance(exc, Exception)
