"""Factories wiring backends, regressors and services together.

Commands and tests build their collaborators here instead of
constructing them inline.
"""

from typing import Optional

from cgnn.config import get_settings
from cgnn.exceptions import OracleSizeError
from cgnn.regressors.base import BaseRegressor
from cgnn.regressors.networks import REGRESSOR_KINDS
from cgnn.schemas.estimator import EstimatorConfig
from cgnn.schemas.training import RegressorSpec
from cgnn.services.estimator_backend import EstimatorBackend
from cgnn.services.estimator_dense import DenseEstimatorBackend
from cgnn.services.estimator_stochastic import StochasticEstimatorBackend
from cgnn.services.experiment_service import ExperimentService
from cgnn.services.prediction_service import PredictionService
from cgnn.services.training_service import TrainingService

settings = get_settings()


# === Estimator Backends ===


def get_estimator_backend(cfg: EstimatorConfig, dimension: Optional[int] = None) -> EstimatorBackend:
    """Dense oracle when ``cfg.oracle_mode`` is set, stochastic estimators otherwise.

    Raises:
        OracleSizeError: If oracle mode is requested for a graph above the limit
    """
    if cfg.oracle_mode:
        if dimension is not None and dimension > settings.oracle_max_vertices:
            raise OracleSizeError(dimension=dimension, limit=settings.oracle_max_vertices)
        return DenseEstimatorBackend(cfg)
    return StochasticEstimatorBackend(cfg)


# === Regressors ===


def get_regressor(spec: RegressorSpec, feature_dim: int) -> BaseRegressor:
    return REGRESSOR_KINDS[spec.kind](spec, feature_dim)


# === Service Factories ===


def get_training_service(backend: EstimatorBackend) -> TrainingService:
    return TrainingService(backend)


def get_prediction_service(backend: EstimatorBackend) -> PredictionService:
    return PredictionService(backend, get_training_service(backend))


def get_experiment_service(backend: EstimatorBackend) -> ExperimentService:
    return ExperimentService(get_training_service(backend), get_prediction_service(backend))


__all__ = [
    "get_estimator_backend",
    "get_regressor",
    "get_training_service",
    "get_prediction_service",
    "get_experiment_service",
]
