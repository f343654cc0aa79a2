from cgnn.services.estimator_backend import EstimatorBackend
from cgnn.services.estimator_dense import DenseEstimatorBackend
from cgnn.services.estimator_stochastic import StochasticEstimatorBackend
from cgnn.services.precision import PrecisionOperator
from cgnn.services.likelihood import NLLResult, marginal_nll_and_grads
from cgnn.services.label_propagation import label_propagation, lp_gnn_predict
from cgnn.services.training_service import RegressorFit, TrainingService
from cgnn.services.prediction_service import PredictionService, conditional_mean
from cgnn.services.experiment_service import METHODS, ExperimentService

__all__ = [
    "EstimatorBackend",
    "DenseEstimatorBackend",
    "StochasticEstimatorBackend",
    "PrecisionOperator",
    "NLLResult",
    "marginal_nll_and_grads",
    "label_propagation",
    "lp_gnn_predict",
    "RegressorFit",
    "TrainingService",
    "PredictionService",
    "conditional_mean",
    "METHODS",
    "ExperimentService",
]
