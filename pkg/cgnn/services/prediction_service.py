"""Conditional-mean inference for transductive and inductive prediction."""

from typing import Optional

import numpy as np

from cgnn.config import get_settings
from cgnn.exceptions import ValidationError
from cgnn.linalg.operators import typed_normalized_adjacency
from cgnn.logging_config import setup_logger
from cgnn.models.cgnn_model import CGNNModel
from cgnn.models.graph import AttributedGraph, VertexPartition
from cgnn.models.params import CorrelationParams
from cgnn.regressors.base import BaseRegressor, ParameterSet
from cgnn.schemas.training import TrainConfig
from cgnn.services.estimator_backend import EstimatorBackend
from cgnn.services.precision import PrecisionOperator
from cgnn.services.training_service import TrainingService

settings = get_settings()
logger = setup_logger(__name__)


def conditional_mean(
    regressor: BaseRegressor,
    params: ParameterSet,
    correlation: CorrelationParams,
    graph: AttributedGraph,
    partition: VertexPartition,
    labels_l: np.ndarray,
    backend: EstimatorBackend,
) -> np.ndarray:
    """``y_U = yhat_U - Gamma_UU^-1 Gamma_UL (y_L - yhat_L)``."""
    partition.validate_for(graph)
    labels_l = np.asarray(labels_l, dtype=np.float64).reshape(-1)
    if labels_l.size != partition.labeled.size:
        raise ValidationError(
            error_code="LABEL_SHAPE_MISMATCH",
            message="One label is required per labeled vertex",
            details={"labels": int(labels_l.size), "labeled": int(partition.labeled.size)},
        )
    if partition.unlabeled.size == 0:
        return np.zeros(0)

    yhat = regressor.predict(params, graph)
    yhat_u = yhat[partition.unlabeled]
    if partition.labeled.size == 0:
        return yhat_u

    precision = PrecisionOperator(correlation, typed_normalized_adjacency(graph), partition)
    residual = labels_l - yhat[partition.labeled]
    coupling = precision.apply_block(partition.unlabeled, partition.labeled, residual)
    return yhat_u - backend.solve(precision, partition.unlabeled, coupling)


class PredictionService:
    """Applies trained models to the training graph or to unseen graphs."""

    def __init__(self, backend: EstimatorBackend, training_service: Optional[TrainingService] = None):
        self.backend = backend
        self.training_service = training_service or TrainingService(backend)

    def predict_cgnn(
        self,
        model: CGNNModel,
        graph: AttributedGraph,
        partition: VertexPartition,
        labels_l: np.ndarray,
    ) -> np.ndarray:
        regressor, params = model.build_regressor()
        return conditional_mean(
            regressor, params, model.correlation, graph, partition, labels_l, self.backend
        )

    def predict_inductive(
        self,
        model: CGNNModel,
        new_graph: AttributedGraph,
        labeled: np.ndarray,
        fine_tune: bool = False,
        fine_tune_config: Optional[TrainConfig] = None,
    ) -> np.ndarray:
        """Condition a frozen model on the labels of ``labeled`` in a new graph.

        With ``fine_tune`` the regressor weights are first refit on those
        labels with the joint objective while alpha and beta stay fixed.
        Returns predictions for every other vertex in sorted order.
        """
        regressor, params = model.build_regressor()
        regressor.check_features(new_graph)
        partition = VertexPartition.from_labeled(new_graph.n, labeled)
        if partition.labeled.size and new_graph.labels is None:
            raise ValidationError(error_code="MISSING_LABELS", message="Graph carries no labels")
        labels_l = new_graph.labels[partition.labeled] if partition.labeled.size else np.zeros(0)

        if fine_tune and partition.labeled.size:
            cfg = fine_tune_config or TrainConfig(
                epochs=settings.fine_tune_epochs,
                lr_theta=settings.fine_tune_lr,
                select_on_validation=False,
            )
            logger.info(
                f"Fine-tuning regressor on {partition.labeled.size} labels "
                f"for {cfg.epochs} epochs"
            )
            tuned = self.training_service.train_cgnn(
                regressor,
                new_graph,
                partition.labeled,
                cfg,
                params=params,
                correlation=model.correlation,
                method=model.method,
                train_correlation=False,
            )
            params = tuned.regressor.to_parameters()

        return conditional_mean(
            regressor, params, model.correlation, new_graph, partition, labels_l, self.backend
        )
