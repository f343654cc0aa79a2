from typing import Any, Dict, Optional


class CGNNError(Exception):
    def __init__(
        self,
        error_code: str,
        message: str,
        exit_code: int = 2,
        details: Optional[Dict[str, Any]] = None,
    ):
        self.error_code = error_code
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(message)


class ValidationError(CGNNError):
    def __init__(
        self,
        error_code: str = "INVALID_INPUT",
        message: str = "Validation failed",
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(
            error_code=error_code,
            message=message,
            exit_code=2,
            details=details,
        )


class DataFormatError(CGNNError):
    def __init__(
        self,
        error_code: str = "INVALID_BUNDLE",
        message: str = "Dataset bundle is malformed",
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(
            error_code=error_code,
            message=message,
            exit_code=2,
            details=details,
        )


class UnknownMethodError(CGNNError):
    def __init__(self, method: str, allowed: list[str]):
        super().__init__(
            error_code="UNKNOWN_METHOD",
            message=f"Unknown method '{method}'",
            exit_code=2,
            details={"method": method, "allowed_methods": allowed},
        )


class OracleSizeError(CGNNError):
    def __init__(self, dimension: int, limit: int):
        super().__init__(
            error_code="ORACLE_TOO_LARGE",
            message="Dense oracle mode is limited to small graphs",
            exit_code=2,
            details={"dimension": dimension, "limit": limit},
        )


class NumericalError(CGNNError):
    def __init__(
        self,
        error_code: str = "NON_FINITE_VALUE",
        message: str = "Encountered NaN or Inf",
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(
            error_code=error_code,
            message=message,
            exit_code=3,
            details=details,
        )


class NotPositiveDefiniteError(NumericalError):
    def __init__(
        self,
        message: str = "Operator is not positive definite",
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(
            error_code="NOT_POSITIVE_DEFINITE",
            message=message,
            details=details,
        )


class DivergenceError(NumericalError):
    def __init__(
        self,
        message: str = "Training diverged",
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(
            error_code="TRAINING_DIVERGED",
            message=message,
            details=details,
        )


class StaleCacheError(CGNNError):
    def __init__(self, expected: str, actual: str):
        super().__init__(
            error_code="STALE_FORWARD_CACHE",
            message="Forward cache does not match the parameters passed to backward",
            exit_code=3,
            details={"cache_token": expected, "params_token": actual},
        )


class UndefinedMetricError(CGNNError):
    def __init__(
        self,
        message: str = "Metric is undefined for this input",
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(
            error_code="METRIC_UNDEFINED",
            message=message,
            exit_code=3,
            details=details,
        )
