from cgnn.regressors.base import BaseRegressor, ForwardCache, ParameterSet
from cgnn.regressors.checkpoint import ParameterCheckpoint, load_parameters, save_parameters
from cgnn.regressors.networks import (
    REGRESSOR_KINDS,
    GCNRegressor,
    LinearRegressor,
    MLPRegressor,
    SageMeanRegressor,
)
from cgnn.regressors.optimizers import Adam, GradientDescent, Optimizer, build_optimizer

__all__ = [
    "BaseRegressor",
    "ForwardCache",
    "ParameterSet",
    "ParameterCheckpoint",
    "load_parameters",
    "save_parameters",
    "REGRESSOR_KINDS",
    "GCNRegressor",
    "LinearRegressor",
    "MLPRegressor",
    "SageMeanRegressor",
    "Adam",
    "GradientDescent",
    "Optimizer",
    "build_optimizer",
]
