"""Squared-error and marginal-likelihood training of base regressors."""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from cgnn.data.metrics import r_squared
from cgnn.exceptions import DivergenceError, UndefinedMetricError, ValidationError
from cgnn.linalg.operators import typed_normalized_adjacency
from cgnn.logging_config import setup_logger
from cgnn.models.cgnn_model import CGNNModel, TrainingMetadata
from cgnn.models.graph import AttributedGraph, VertexPartition
from cgnn.models.params import CorrelationParams, Reparametrization, reparametrize, to_raw
from cgnn.regressors.base import BaseRegressor, ParameterSet
from cgnn.regressors.checkpoint import ParameterCheckpoint
from cgnn.regressors.optimizers import build_optimizer
from cgnn.schemas.training import TrainConfig
from cgnn.services.estimator_backend import EstimatorBackend
from cgnn.services.likelihood import marginal_nll_and_grads
from cgnn.services.precision import PrecisionOperator

logger = setup_logger(__name__)


@dataclass
class RegressorFit:
    """Selected parameters plus the final-epoch parameters and traces."""

    params: ParameterSet
    final_params: ParameterSet
    loss_trace: list[float] = field(default_factory=list)
    val_trace: list[Optional[float]] = field(default_factory=list)
    best_epoch: Optional[int] = None
    best_val_score: Optional[float] = None
    steps: int = 0


def minibatches(train: np.ndarray, batch_size: Optional[int], seed: int, epoch: int) -> list[np.ndarray]:
    """Seeded shuffle of the training vertices split into sorted batches."""
    if batch_size is None or batch_size >= train.size:
        return [np.sort(train)]
    order = np.random.default_rng([seed, epoch]).permutation(train)
    return [np.sort(order[i : i + batch_size]) for i in range(0, order.size, batch_size)]


def _labels_on(graph: AttributedGraph, vertices: np.ndarray) -> np.ndarray:
    if graph.labels is None:
        raise ValidationError(error_code="MISSING_LABELS", message="Graph carries no labels")
    values = graph.labels[vertices]
    if np.any(np.isnan(values)):
        raise ValidationError(
            error_code="MISSING_LABELS",
            message="Training vertices must all be labeled",
            details={"missing": int(np.isnan(values).sum())},
        )
    return values


def _validation_score(predict: Callable[[], np.ndarray], truth: np.ndarray) -> Optional[float]:
    try:
        return r_squared(predict(), truth)
    except UndefinedMetricError:
        return None


def _check_batch_size(cfg: TrainConfig, train: np.ndarray) -> None:
    if train.size == 0:
        raise ValidationError(
            error_code="EMPTY_TRAINING_SET",
            message="Training needs at least one labeled vertex",
        )
    if cfg.batch_size is not None and cfg.batch_size > train.size:
        raise ValidationError(
            error_code="INVALID_BATCH_SIZE",
            message="Batch size cannot exceed the number of training vertices",
            details={"batch_size": cfg.batch_size, "train": int(train.size)},
        )


class TrainingService:
    """Optimizes regressors alone or jointly with the correlation parameters.

    Objectives are averaged over the batch, so ``alpha = 0, beta = 1`` makes
    the joint objective's theta-gradient equal the mean squared-error gradient.
    """

    def __init__(self, backend: EstimatorBackend):
        self.backend = backend

    def train_squared_error(
        self,
        regressor: BaseRegressor,
        graph: AttributedGraph,
        train: np.ndarray,
        cfg: TrainConfig,
        val: Optional[np.ndarray] = None,
        params: Optional[ParameterSet] = None,
    ) -> RegressorFit:
        """Minimize the mean of ``(yhat_i - y_i)^2`` over the training vertices."""
        train = np.sort(np.asarray(train, dtype=np.int64))
        _check_batch_size(cfg, train)
        params = params or regressor.init_parameters(cfg.seed)
        optimizer = build_optimizer(cfg.theta_optimizer, cfg.lr_theta)
        val = np.zeros(0, dtype=np.int64) if val is None else np.asarray(val, dtype=np.int64)
        val_truth = _labels_on(graph, val) if val.size else None

        fit = RegressorFit(params=params, final_params=params)
        best_score = -np.inf
        step = 0
        for epoch in range(cfg.epochs):
            epoch_losses = []
            for batch in minibatches(train, cfg.batch_size, cfg.seed, epoch):
                yhat, cache = regressor.forward(params, graph, batch)
                diff = yhat - _labels_on(graph, batch)
                loss = float(np.mean(diff**2))
                if not np.isfinite(loss):
                    logger.error(f"Squared-error training diverged at epoch={epoch}, step={step}")
                    raise DivergenceError(details={"epoch": epoch, "step": step, "loss": loss})
                grad = regressor.backward(params, cache, 2.0 * diff / batch.size)
                params = params.with_values(optimizer.step(params.values, grad))
                epoch_losses.append(loss)
                step += 1
            fit.loss_trace.append(float(np.mean(epoch_losses)))
            logger.debug(f"epoch={epoch} squared_error={fit.loss_trace[-1]:.6f}")

            if cfg.select_on_validation and val_truth is not None:
                current = params
                val_score = _validation_score(lambda: regressor.predict(current, graph, val), val_truth)
                fit.val_trace.append(val_score)
                if val_score is not None and val_score > best_score:
                    best_score = val_score
                    fit.params, fit.best_epoch, fit.best_val_score = params, epoch, val_score
                    logger.debug(f"New best validation R2={val_score:.4f} at epoch={epoch}")

        fit.final_params = params
        fit.steps = step
        if fit.best_epoch is None:
            fit.params = params
        return fit

    def fine_tune_regressor(
        self,
        regressor: BaseRegressor,
        params: ParameterSet,
        graph: AttributedGraph,
        labeled: np.ndarray,
        cfg: TrainConfig,
    ) -> ParameterSet:
        """Continue squared-error training from ``params`` on new labels."""
        labeled = np.asarray(labeled, dtype=np.int64)
        if labeled.size == 0 or cfg.epochs == 0:
            return params
        tune_cfg = cfg.model_copy(update={"select_on_validation": False})
        return self.train_squared_error(regressor, graph, labeled, tune_cfg, params=params).params

    def train_cgnn(
        self,
        regressor: BaseRegressor,
        graph: AttributedGraph,
        train: np.ndarray,
        cfg: TrainConfig,
        val: Optional[np.ndarray] = None,
        params: Optional[ParameterSet] = None,
        correlation: Optional[CorrelationParams] = None,
        method: str = "c-gnn",
        train_correlation: bool = True,
    ) -> CGNNModel:
        """Jointly fit theta and the unconstrained (alpha, beta).

        Each step conditions on a batch of training vertices and treats every
        other vertex as unlabeled. Model selection scores validation R^2 of
        predictions conditioned on the whole training set. ``correlation``
        overrides the initial alphas and beta from ``cfg``; with
        ``train_correlation=False`` they stay fixed and only theta moves.
        """
        train = np.sort(np.asarray(train, dtype=np.int64))
        _check_batch_size(cfg, train)
        params = params or regressor.init_parameters(cfg.seed)
        val = np.zeros(0, dtype=np.int64) if val is None else np.asarray(val, dtype=np.int64)
        val_truth = _labels_on(graph, val) if val.size else None

        s_ops = typed_normalized_adjacency(graph)
        start = correlation or CorrelationParams.uniform(
            cfg.init_alpha, cfg.init_beta, graph.edge_type_count, eta=cfg.eta
        )
        eta = start.eta
        pinned_alphas = (cfg.freeze_alpha,) * start.type_count if cfg.freeze_alpha is not None else None
        pinned_beta = cfg.freeze_beta
        if not train_correlation:
            pinned_alphas, pinned_beta = start.alphas, start.beta

        def constrained(raw_a: np.ndarray, raw_b: float) -> Reparametrization:
            rep = reparametrize(raw_a, raw_b, eta)
            if pinned_alphas is None and pinned_beta is None:
                return rep
            pinned = CorrelationParams(
                alphas=pinned_alphas if pinned_alphas is not None else rep.params.alphas,
                beta=pinned_beta if pinned_beta is not None else rep.params.beta,
                eta=eta,
            )
            return Reparametrization(pinned, rep.dalpha_draw, rep.dbeta_draw)

        raw_alpha, raw_beta = to_raw(start)
        current = constrained(raw_alpha, raw_beta)
        theta_optimizer = build_optimizer(cfg.theta_optimizer, cfg.lr_theta)
        raw_optimizer = build_optimizer(cfg.correlation_optimizer, cfg.lr_alpha_beta)
        # one vector: alphas then log beta; pinned entries get a zero gradient
        alpha_mask = 0.0 if pinned_alphas is not None else 1.0
        beta_mask = 0.0 if pinned_beta is not None else 1.0

        logger.info(
            f"Starting C-GNN training: regressor={regressor.kind}, n={graph.n}, "
            f"train={train.size}, epochs={cfg.epochs}, batch_size={cfg.batch_size}, "
            f"alphas={list(current.params.alphas)}, beta={current.params.beta:.4f}"
        )

        metadata = TrainingMetadata(train_config=cfg)
        best_score = -np.inf
        best_state = (params, current.params)
        step = 0
        for epoch in range(cfg.epochs):
            epoch_losses = []
            for batch in minibatches(train, cfg.batch_size, cfg.seed, epoch):
                partition = VertexPartition.from_labeled(graph.n, batch)
                precision = PrecisionOperator(current.params, s_ops, partition)
                yhat, cache = regressor.forward(params, graph, batch)
                residual = _labels_on(graph, batch) - yhat
                nll = marginal_nll_and_grads(precision, residual, self.backend, stream=step)
                loss = nll.loss / batch.size
                if not np.isfinite(loss):
                    logger.error(f"C-GNN training diverged at epoch={epoch}, step={step}")
                    raise DivergenceError(details={"epoch": epoch, "step": step, "loss": loss})

                theta_grad = regressor.backward(params, cache, nll.dyhat_l / batch.size)
                params = params.with_values(theta_optimizer.step(params.values, theta_grad))
                raw_grad = np.append(
                    alpha_mask * nll.dalphas * current.dalpha_draw,
                    beta_mask * nll.dbeta * current.dbeta_draw,
                )
                raw = raw_optimizer.step(np.append(raw_alpha, raw_beta), raw_grad / batch.size)
                raw_alpha, raw_beta = raw[:-1], float(raw[-1])

                finite = np.all(np.isfinite(raw_alpha)) and np.isfinite(raw_beta)
                if not finite or not np.all(np.isfinite(params.values)):
                    logger.error(f"Non-finite parameters at epoch={epoch}, step={step}")
                    raise DivergenceError(
                        message="Parameters became non-finite",
                        details={"epoch": epoch, "step": step},
                    )
                current = constrained(raw_alpha, raw_beta)
                epoch_losses.append(loss)
                step += 1

            metadata.loss_trace.append(float(np.mean(epoch_losses)))
            logger.debug(
                f"epoch={epoch} loss={metadata.loss_trace[-1]:.6f} "
                f"alphas={[round(a, 4) for a in current.params.alphas]} beta={current.params.beta:.4f}"
            )

            if cfg.select_on_validation and val_truth is not None:
                val_score = self._conditioned_val_score(
                    regressor, params, current.params, graph, train, val, val_truth
                )
                metadata.val_trace.append(val_score)
                if val_score is not None and val_score > best_score:
                    best_score = val_score
                    best_state = (params, current.params)
                    metadata.best_epoch, metadata.best_val_score = epoch, val_score
                    logger.info(f"Checkpoint at epoch={epoch}: validation R2={val_score:.4f}")

        if metadata.best_epoch is None:
            best_state = (params, current.params)
        metadata.epochs_run = cfg.epochs
        metadata.steps_run = step
        metadata.final_correlation = current.params
        metadata.final_regressor_values = [float(v) for v in params.values]

        selected_params, selected_correlation = best_state
        final_loss = metadata.loss_trace[-1] if metadata.loss_trace else float("nan")
        logger.info(
            f"Finished C-GNN training: steps={step}, final_loss={final_loss:.6f}, "
            f"alphas={list(selected_correlation.alphas)}, beta={selected_correlation.beta:.4f}"
        )
        return CGNNModel(
            method=method,
            regressor=ParameterCheckpoint.from_parameters(regressor.spec, regressor.feature_dim, selected_params),
            correlation=selected_correlation,
            estimator=self.backend.cfg,
            metadata=metadata,
        )

    def _conditioned_val_score(
        self,
        regressor: BaseRegressor,
        params: ParameterSet,
        correlation: CorrelationParams,
        graph: AttributedGraph,
        train: np.ndarray,
        val: np.ndarray,
        val_truth: np.ndarray,
    ) -> Optional[float]:
        from cgnn.services.prediction_service import conditional_mean

        partition = VertexPartition.from_labeled(graph.n, train)
        positions = np.searchsorted(partition.unlabeled, val)

        def predict() -> np.ndarray:
            y_u = conditional_mean(
                regressor, params, correlation, graph, partition, _labels_on(graph, train), self.backend
            )
            return y_u[positions]

        return _validation_score(predict, val_truth)
