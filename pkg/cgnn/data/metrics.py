"""Evaluation metrics."""

import numpy as np

from cgnn.exceptions import UndefinedMetricError, ValidationError


def _paired(predictions, truth) -> tuple[np.ndarray, np.ndarray]:
    predictions = np.asarray(predictions, dtype=np.float64).reshape(-1)
    truth = np.asarray(truth, dtype=np.float64).reshape(-1)
    if predictions.size != truth.size or truth.size == 0:
        raise ValidationError(
            error_code="METRIC_SHAPE_MISMATCH",
            message="Predictions and truth must be nonempty and of equal length",
            details={"predictions": int(predictions.size), "truth": int(truth.size)},
        )
    return predictions, truth


def r_squared(predictions, truth) -> float:
    """Coefficient of determination ``1 - SS_res / SS_tot``.

    Raises:
        UndefinedMetricError: If the truth is constant
    """
    predictions, truth = _paired(predictions, truth)
    ss_tot = float(np.sum((truth - truth.mean()) ** 2))
    if ss_tot == 0.0:
        raise UndefinedMetricError(
            message="R^2 is undefined for constant truth",
            details={"n": int(truth.size)},
        )
    ss_res = float(np.sum((truth - predictions) ** 2))
    return 1.0 - ss_res / ss_tot


def sign(values: np.ndarray) -> np.ndarray:
    """Sign with ties at zero resolved to +1."""
    return np.where(np.asarray(values) >= 0.0, 1.0, -1.0)


def binary_accuracy(predictions, truth) -> float:
    predictions, truth = _paired(predictions, truth)
    return float(np.mean(sign(predictions) == sign(truth)))


def is_binary(labels) -> bool:
    values = np.asarray(labels, dtype=np.float64)
    values = values[~np.isnan(values)]
    return values.size > 0 and bool(np.all(np.isin(values, (-1.0, 1.0))))


def score(predictions, truth, metric: str) -> float:
    if metric == "accuracy":
        return binary_accuracy(predictions, truth)
    return r_squared(predictions, truth)
