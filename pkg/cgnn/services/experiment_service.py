"""Experiment protocols: method comparison, estimator accuracy, scaling, inductive transfer."""

import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from cgnn.data.generators import watts_strogatz
from cgnn.data.metrics import is_binary, score
from cgnn.data.preprocessing import split_vertices
from cgnn.exceptions import UndefinedMetricError, UnknownMethodError, ValidationError
from cgnn.linalg.estimators import standard_error
from cgnn.linalg.operators import normalized_adjacency
from cgnn.logging_config import setup_logger
from cgnn.models.cgnn_model import CGNNModel, TrainingMetadata
from cgnn.models.graph import AttributedGraph, VertexPartition
from cgnn.models.params import CorrelationParams
from cgnn.regressors.checkpoint import ParameterCheckpoint
from cgnn.regressors.networks import REGRESSOR_KINDS
from cgnn.schemas.data import SplitConfig
from cgnn.schemas.estimator import EstimatorConfig
from cgnn.schemas.report import (
    EstimatorValidationCell,
    EstimatorValidationReport,
    ExperimentReport,
    ScalingReport,
)
from cgnn.schemas.training import RegressorSpec, TrainConfig
from cgnn.services.estimator_backend import EstimatorBackend
from cgnn.services.estimator_dense import DenseEstimatorBackend
from cgnn.services.estimator_stochastic import StochasticEstimatorBackend
from cgnn.services.label_propagation import label_propagation, lp_gnn_predict
from cgnn.services.likelihood import marginal_nll_and_grads
from cgnn.services.precision import PrecisionOperator
from cgnn.services.prediction_service import PredictionService
from cgnn.services.training_service import TrainingService

logger = setup_logger(__name__)

METHODS = ["lp", "mlp", "gnn", "c-mlp", "c-gnn", "lp-mlp", "lp-gnn"]


@dataclass
class Splits:
    train: np.ndarray
    val: np.ndarray
    test: np.ndarray


@dataclass
class MethodRun:
    """One repetition of one method."""

    score: Optional[float]
    predictions: np.ndarray
    model: Optional[CGNNModel]


def metric_for(graph: AttributedGraph) -> str:
    return "accuracy" if graph.labels is not None and is_binary(graph.labels) else "r2"


def _positions(sorted_superset: np.ndarray, subset: np.ndarray) -> np.ndarray:
    return np.searchsorted(sorted_superset, subset)


class ExperimentService:
    """Runs the transductive, estimator, scaling and inductive protocols."""

    def __init__(self, training_service: TrainingService, prediction_service: PredictionService):
        self.training_service = training_service
        self.prediction_service = prediction_service

    @property
    def backend(self) -> EstimatorBackend:
        return self.training_service.backend

    # === Transductive comparison ===

    def regressor_spec_for(self, method: str, spec: RegressorSpec) -> RegressorSpec:
        if method in ("mlp", "c-mlp", "lp-mlp"):
            return spec.model_copy(update={"kind": "mlp"})
        return spec

    def run_method(
        self,
        method: str,
        graph: AttributedGraph,
        splits: Splits,
        spec: RegressorSpec,
        train_cfg: TrainConfig,
    ) -> MethodRun:
        """Train ``method`` on the training split and predict the test split.

        Predictions on the test split condition on the training labels.
        """
        if method not in METHODS:
            raise UnknownMethodError(method, METHODS)
        if graph.labels is None:
            raise ValidationError(error_code="MISSING_LABELS", message="Graph carries no labels")

        partition = VertexPartition.from_labeled(graph.n, splits.train)
        labels_l = graph.labels[partition.labeled]
        test_pos = _positions(partition.unlabeled, splits.test)
        model: Optional[CGNNModel] = None

        if method == "lp":
            y_u = label_propagation(normalized_adjacency(graph), labels_l, partition)
            return MethodRun(self._score(graph, splits.test, y_u[test_pos]), y_u[test_pos], None)

        spec = self.regressor_spec_for(method, spec)
        regressor = REGRESSOR_KINDS[spec.kind](spec, graph.feature_dim)

        if method.startswith("c-"):
            model = self.training_service.train_cgnn(
                regressor, graph, splits.train, train_cfg, val=splits.val, method=method
            )
            y_u = self.prediction_service.predict_cgnn(model, graph, partition, labels_l)
            predictions = y_u[test_pos]
        else:
            fit = self.training_service.train_squared_error(
                regressor, graph, splits.train, train_cfg, val=splits.val
            )
            model = CGNNModel(
                method=method,
                regressor=ParameterCheckpoint.from_parameters(spec, graph.feature_dim, fit.params),
                correlation=CorrelationParams.uniform(0.0, 1.0, graph.edge_type_count),
                estimator=self.backend.cfg,
                metadata=TrainingMetadata(
                    epochs_run=train_cfg.epochs,
                    steps_run=fit.steps,
                    loss_trace=fit.loss_trace,
                    val_trace=fit.val_trace,
                    best_epoch=fit.best_epoch,
                    best_val_score=fit.best_val_score,
                    final_regressor_values=[float(v) for v in fit.final_params.values],
                    train_config=train_cfg,
                ),
            )
            if method.startswith("lp-"):
                y_u = lp_gnn_predict(regressor, fit.params, graph, partition, labels_l)
                predictions = y_u[test_pos]
            else:
                predictions = regressor.predict(fit.params, graph, splits.test)

        return MethodRun(self._score(graph, splits.test, predictions), predictions, model)

    def _score(self, graph: AttributedGraph, test: np.ndarray, predictions: np.ndarray) -> Optional[float]:
        if test.size == 0:
            return None
        try:
            return score(predictions, graph.labels[test], metric_for(graph))
        except UndefinedMetricError:
            return None

    def run_repetitions(
        self,
        method: str,
        graph: AttributedGraph,
        spec: RegressorSpec,
        train_cfg: TrainConfig,
        split_cfg: SplitConfig,
        repetitions: int,
        base_seed: int,
        dataset: str,
        fixed_splits: Optional[Splits] = None,
    ) -> tuple[ExperimentReport, list[CGNNModel]]:
        """Repeat ``method`` with seeds ``base_seed + i``; splits are redrawn per seed unless fixed."""
        if method not in METHODS:
            raise UnknownMethodError(method, METHODS)
        metric = metric_for(graph)
        values, timings, notes, alphas, betas = [], [], [], [], []
        models: list[CGNNModel] = []
        for i in range(repetitions):
            seed = base_seed + i
            splits = fixed_splits or Splits(*split_vertices(graph.n, split_cfg.model_copy(update={"seed": seed})))
            started = time.perf_counter()
            run = self.run_method(
                method,
                graph,
                splits,
                spec.model_copy(update={"seed": seed}),
                train_cfg.model_copy(update={"seed": seed}),
            )
            timings.append(time.perf_counter() - started)
            if run.score is None:
                notes.append(f"seed {seed}: metric undefined on the test split")
            else:
                values.append(run.score)
            if run.model is not None:
                models.append(run.model)
                if method.startswith("c-"):
                    alphas.append(list(run.model.correlation.alphas))
                    betas.append(run.model.correlation.beta)
            logger.info(f"method={method} dataset={dataset} seed={seed} {metric}={run.score}")

        report = ExperimentReport(
            method=method,
            dataset=dataset,
            seed=base_seed,
            metric=metric,
            values=values,
            alphas=alphas,
            betas=betas,
            timings=timings,
            notes=notes,
            config={
                "regressor": self.regressor_spec_for(method, spec).model_dump(),
                "train": train_cfg.model_dump(),
                "split": split_cfg.model_dump(),
                "estimator": self.backend.cfg.model_dump(),
                "repetitions": repetitions,
                "fixed_splits": fixed_splits is not None,
            },
        )
        return report, models

    # === Estimator accuracy ===

    def validate_estimator(
        self,
        grid: Sequence[tuple[int, int]],
        runs: int = 100,
        n: int = 500,
        mean_degree: int = 10,
        rewire_prob: float = 0.1,
        alpha: float = 0.999,
        beta: float = 1.0,
        labeled_fraction: float = 0.5,
        seed: int = 0,
        derivatives: bool = True,
        graph: Optional[AttributedGraph] = None,
    ) -> EstimatorValidationReport:
        """RMS relative error of stochastic estimates against dense factorizations.

        The log-determinant column is ``log det Gbar_LL = log det Gamma -
        log det Gamma_UU``; derivative columns are dOmega/dalpha and
        dOmega/dbeta for a fixed Gaussian residual.
        """
        graph = graph or watts_strogatz(n, mean_degree, rewire_prob, seed)
        rng = np.random.default_rng(seed)
        labeled = np.sort(rng.choice(graph.n, size=int(round(labeled_fraction * graph.n)), replace=False))
        partition = VertexPartition.from_labeled(graph.n, labeled)
        params = CorrelationParams.uniform(alpha, beta, graph.edge_type_count)
        precision = PrecisionOperator.from_graph(graph, params, partition)
        residual = rng.standard_normal(labeled.size)
        everything = np.arange(graph.n, dtype=np.int64)

        exact_backend = DenseEstimatorBackend(EstimatorConfig(oracle_mode=True))
        exact = marginal_nll_and_grads(precision, residual, exact_backend)
        logdet_exact = exact.logdet_full - exact.logdet_unlabeled

        report = EstimatorValidationReport(
            vertices=graph.n,
            edges=graph.m,
            alpha=alpha,
            beta=beta,
            labeled_fraction=labeled_fraction,
            seed=seed,
        )
        for probes, steps in grid:
            logdet_errors, dalpha_values, dbeta_values = [], [], []
            for run in range(runs):
                cfg = self.backend.cfg.model_copy(
                    update={"probes": probes, "lanczos_steps": steps, "seed": seed + run, "oracle_mode": False}
                )
                backend = StochasticEstimatorBackend(cfg)
                if derivatives:
                    estimate = marginal_nll_and_grads(precision, residual, backend)
                    logdet = estimate.logdet_full - estimate.logdet_unlabeled
                    dalpha_values.append(float(estimate.dalphas.sum()))
                    dbeta_values.append(estimate.dbeta)
                else:
                    logdet = backend.logdet(precision, everything) - backend.logdet(precision, partition.unlabeled)
                logdet_errors.append((logdet - logdet_exact) / logdet_exact)

            report.cells.append(
                self._validation_cell(
                    probes, steps, runs, logdet_errors, dalpha_values, dbeta_values,
                    float(exact.dalphas.sum()), exact.dbeta, logdet_exact,
                )
            )
            logger.info(
                f"Estimator grid T={probes} k={steps}: "
                f"logdet RMS rel. error={report.cells[-1].logdet_rms_rel_error:.4f}"
            )
        return report

    @staticmethod
    def _validation_cell(probes, steps, runs, logdet_errors, dalpha_values, dbeta_values, dalpha_exact, dbeta_exact, logdet_exact):
        def rms_rel(values: list[float], truth: float) -> float:
            if not values:
                return float("nan")
            return float(np.sqrt(np.mean(((np.asarray(values) - truth) / truth) ** 2)))

        return EstimatorValidationCell(
            probes=probes,
            lanczos_steps=steps,
            runs=runs,
            logdet_rms_rel_error=float(np.sqrt(np.mean(np.square(logdet_errors)))),
            dalpha_rms_rel_error=rms_rel(dalpha_values, dalpha_exact),
            dbeta_rms_rel_error=rms_rel(dbeta_values, dbeta_exact),
            dalpha_mean=float(np.mean(dalpha_values)) if dalpha_values else float("nan"),
            dalpha_stderr=standard_error(dalpha_values),
            dbeta_mean=float(np.mean(dbeta_values)) if dbeta_values else float("nan"),
            dbeta_stderr=standard_error(dbeta_values),
            dalpha_exact=dalpha_exact,
            dbeta_exact=dbeta_exact,
            logdet_exact=logdet_exact,
        )

    # === Scaling ===

    def benchmark_scaling(
        self,
        sizes: Sequence[int],
        mean_degree: int = 10,
        rewire_prob: float = 0.1,
        alpha: float = 0.5,
        beta: float = 1.0,
        repeats: int = 1,
        seed: int = 0,
    ) -> ScalingReport:
        """Time one loss+gradient evaluation per graph size and fit a log-log slope."""
        report = ScalingReport(mean_degree=mean_degree)
        backend = StochasticEstimatorBackend(self.backend.cfg.model_copy(update={"oracle_mode": False}))
        for n in sizes:
            graph = watts_strogatz(int(n), mean_degree, rewire_prob, seed)
            rng = np.random.default_rng(seed)
            labeled = np.sort(rng.choice(graph.n, size=graph.n // 2, replace=False))
            precision = PrecisionOperator.from_graph(
                graph,
                CorrelationParams.uniform(alpha, beta, graph.edge_type_count),
                VertexPartition.from_labeled(graph.n, labeled),
            )
            residual = rng.standard_normal(labeled.size)
            timings = []
            for _ in range(repeats):
                started = time.perf_counter()
                marginal_nll_and_grads(precision, residual, backend)
                timings.append(time.perf_counter() - started)
            report.vertices.append(graph.n)
            report.edges.append(graph.m)
            report.seconds.append(float(min(timings)))
            logger.info(f"Scaling n={graph.n} m={graph.m}: {report.seconds[-1]:.3f}s")

        if len(set(report.edges)) >= 2:
            slope, _ = np.polyfit(np.log(report.edges), np.log(report.seconds), 1)
            report.slope = float(slope)
        else:
            report.notes.append("slope undefined: fewer than two distinct graph sizes")
        return report

    # === Inductive transfer ===

    def run_inductive(
        self,
        train_graph: AttributedGraph,
        test_graph: AttributedGraph,
        fractions: Sequence[float],
        spec: RegressorSpec,
        train_cfg: TrainConfig,
        split_cfg: SplitConfig,
        repetitions: int,
        base_seed: int,
        fine_tune_cfg: TrainConfig,
        dataset: str = "inductive",
    ) -> list[ExperimentReport]:
        """Accuracy on a new graph against the fraction of its labels conditioned on.

        Curves: ``c-gnn`` conditions the trained model on the revealed labels;
        ``gnn`` fine-tunes the same model's regressor on them by squared error;
        ``mlp`` fine-tunes a separately trained MLP.
        """
        metric = metric_for(test_graph)
        curves = {
            (method, fraction): []
            for method in ("c-gnn", "gnn", "mlp")
            for fraction in fractions
        }
        notes: dict[tuple[str, float], list[str]] = {key: [] for key in curves}

        for i in range(repetitions):
            seed = base_seed + i
            train, val, _ = split_vertices(train_graph.n, split_cfg.model_copy(update={"seed": seed}))
            seeded_spec = spec.model_copy(update={"seed": seed})
            seeded_cfg = train_cfg.model_copy(update={"seed": seed})
            regressor = REGRESSOR_KINDS[seeded_spec.kind](seeded_spec, train_graph.feature_dim)
            model = self.training_service.train_cgnn(regressor, train_graph, train, seeded_cfg, val=val)
            mlp_spec = seeded_spec.model_copy(update={"kind": "mlp"})
            mlp = REGRESSOR_KINDS["mlp"](mlp_spec, train_graph.feature_dim)
            mlp_params = self.training_service.train_squared_error(mlp, train_graph, train, seeded_cfg, val=val).params
            base_regressor, base_params = model.build_regressor()

            for fraction in fractions:
                rng = np.random.default_rng([seed, int(round(fraction * 1e6))])
                count = int(round(fraction * test_graph.n))
                labeled = np.sort(rng.choice(test_graph.n, size=count, replace=False))
                partition = VertexPartition.from_labeled(test_graph.n, labeled)
                unlabeled = partition.unlabeled
                if unlabeled.size == 0:
                    for method in ("c-gnn", "gnn", "mlp"):
                        notes[(method, fraction)].append(f"seed {seed}: no unlabeled vertices left")
                    continue
                truth = test_graph.labels[unlabeled]

                conditioned = self.prediction_service.predict_inductive(model, test_graph, labeled)
                tuned = self.training_service.fine_tune_regressor(
                    base_regressor, base_params, test_graph, labeled, fine_tune_cfg
                )
                tuned_mlp = self.training_service.fine_tune_regressor(
                    mlp, mlp_params, test_graph, labeled, fine_tune_cfg
                )
                predictions = {
                    "c-gnn": conditioned,
                    "gnn": base_regressor.predict(tuned, test_graph, unlabeled),
                    "mlp": mlp.predict(tuned_mlp, test_graph, unlabeled),
                }
                for method, values in predictions.items():
                    try:
                        curves[(method, fraction)].append(score(values, truth, metric))
                    except UndefinedMetricError:
                        notes[(method, fraction)].append(f"seed {seed}: metric undefined")

        reports = []
        for (method, fraction), values in curves.items():
            reports.append(
                ExperimentReport(
                    method=method,
                    dataset=dataset,
                    seed=base_seed,
                    metric=metric,
                    values=values,
                    config={
                        "label_fraction": fraction,
                        "regressor": spec.model_dump(),
                        "train": train_cfg.model_dump(),
                        "fine_tune": fine_tune_cfg.model_dump(),
                        "estimator": self.backend.cfg.model_dump(),
                        "repetitions": repetitions,
                    },
                    notes=notes[(method, fraction)],
                )
            )
        return reports
