"""Pydantic schemas for configuration and reports."""

from cgnn.schemas.common import ErrorResponse
from cgnn.schemas.data import IsingConfig, SplitConfig
from cgnn.schemas.estimator import EstimatorConfig
from cgnn.schemas.report import (
    EstimatorValidationCell,
    EstimatorValidationReport,
    ExperimentReport,
    ScalingReport,
)
from cgnn.schemas.training import RegressorSpec, TrainConfig

__all__ = [
    "ErrorResponse",
    "EstimatorConfig",
    "EstimatorValidationCell",
    "EstimatorValidationReport",
    "ExperimentReport",
    "IsingConfig",
    "RegressorSpec",
    "ScalingReport",
    "SplitConfig",
    "TrainConfig",
]
