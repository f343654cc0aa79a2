"""Command handlers: each takes parsed arguments, prints a JSON report and returns an exit code."""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel

from cgnn.config import get_settings
from cgnn.data.generators import grid_graph, watts_strogatz
from cgnn.data.ising import sample_ising, sample_ising_series
from cgnn.data.metrics import is_binary, score
from cgnn.data.preprocessing import normalize_features, select_features, split_vertices
from cgnn.dependencies import (
    get_estimator_backend,
    get_experiment_service,
    get_prediction_service,
)
from cgnn.exceptions import UndefinedMetricError, UnknownMethodError, ValidationError
from cgnn.logging_config import setup_logger
from cgnn.models.cgnn_model import CGNNModel
from cgnn.models.graph import AttributedGraph
from cgnn.repositories.bundle_repository import BundleRepository, DatasetBundle
from cgnn.schemas.data import IsingConfig, SplitConfig
from cgnn.schemas.estimator import EstimatorConfig
from cgnn.schemas.training import RegressorSpec, TrainConfig
from cgnn.services.experiment_service import METHODS, Splits

settings = get_settings()
logger = setup_logger(__name__)

GENERATOR_KINDS = ["ising+", "ising-", "ws", "grid"]


# === Shared helpers ===


def _write_stdout(payload: Union[BaseModel, list, dict]) -> None:
    sys.stdout.write(_to_json(payload) + "\n")
    sys.stdout.flush()


def _to_json(payload: Union[BaseModel, list, dict]) -> str:
    if isinstance(payload, BaseModel):
        return payload.model_dump_json(indent=2)
    if isinstance(payload, list):
        items = [item.model_dump(mode="json") if isinstance(item, BaseModel) else item for item in payload]
        return json.dumps(items, indent=2)
    return json.dumps(payload, indent=2)


def _out_dir(args: argparse.Namespace) -> Optional[Path]:
    if args.out is None:
        return None
    path = Path(args.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _estimator_config(args: argparse.Namespace) -> EstimatorConfig:
    overrides: dict[str, Any] = {"seed": args.seed, "oracle_mode": args.oracle_mode}
    if args.probes is not None:
        overrides["probes"] = args.probes
    if args.lanczos_steps is not None:
        overrides["lanczos_steps"] = args.lanczos_steps
    if args.cg_tol is not None:
        overrides["cg_tolerance"] = args.cg_tol
    if args.n_jobs is not None:
        overrides["n_jobs"] = args.n_jobs
    return EstimatorConfig(**overrides)


def _train_config(args: argparse.Namespace) -> TrainConfig:
    overrides: dict[str, Any] = {"seed": args.seed, "batch_size": args.batch_size}
    if args.epochs is not None:
        overrides["epochs"] = args.epochs
    if args.eta is not None:
        overrides["eta"] = args.eta
    if args.lr is not None:
        overrides["lr_theta"] = args.lr
    if args.lr_correlation is not None:
        overrides["lr_alpha_beta"] = args.lr_correlation
    if args.freeze_alpha is not None:
        overrides["freeze_alpha"] = args.freeze_alpha
    if args.freeze_beta is not None:
        overrides["freeze_beta"] = args.freeze_beta
    return TrainConfig(**overrides)


def _regressor_spec(args: argparse.Namespace) -> RegressorSpec:
    overrides: dict[str, Any] = {"kind": args.regressor, "seed": args.seed}
    if args.hidden_width is not None:
        overrides["hidden_width"] = args.hidden_width
    if args.representation_dim is not None:
        overrides["representation_dim"] = args.representation_dim
    if args.layers is not None:
        overrides["layers"] = args.layers
    return RegressorSpec(**overrides)


def _prepare(graph: AttributedGraph, feature_count: Optional[int] = None) -> AttributedGraph:
    if feature_count is not None:
        graph = select_features(graph, feature_count)
    if graph.feature_dim and graph.n >= 2:
        graph = normalize_features(graph)
    return graph


def _read_bundle(path: str) -> DatasetBundle:
    return BundleRepository(path).read()


# === generate ===


def _write_generated(graph: AttributedGraph, path: Path, kind: str, seed: int) -> dict[str, Any]:
    splits = {}
    if graph.labels is not None and graph.n >= 3:
        train, val, test = split_vertices(graph.n, SplitConfig(seed=seed))
        splits = {"train": train, "val": val, "test": test}
    written = BundleRepository(path).write(DatasetBundle(graph=graph, splits=splits))
    return {
        "kind": kind,
        "path": str(written),
        "vertices": graph.n,
        "edges": graph.m,
        "seed": seed,
        "splits": {name: int(indices.size) for name, indices in splits.items()},
    }


def cmd_generate(args: argparse.Namespace) -> int:
    if args.kind not in GENERATOR_KINDS:
        raise ValidationError(
            error_code="UNKNOWN_GENERATOR",
            message=f"Unknown generator '{args.kind}'",
            details={"allowed": GENERATOR_KINDS},
        )
    if args.out is None:
        raise ValidationError(error_code="MISSING_OUTPUT", message="generate needs --out for the bundle directory")
    if args.samples < 1 or (args.samples > 1 and args.kind not in ("ising+", "ising-")):
        raise ValidationError(
            error_code="INVALID_ARGUMENTS",
            message="--samples must be at least 1 and above 1 only for Ising generators",
            details={"kind": args.kind, "samples": args.samples},
        )

    if args.kind in ("ising+", "ising-"):
        magnitude = abs(args.coupling if args.coupling is not None else settings.ising_coupling)
        overrides: dict[str, Any] = {}
        if args.sample_gap is not None:
            overrides["sample_gap"] = args.sample_gap
        if args.coupling_scale is not None:
            overrides["coupling_scale"] = args.coupling_scale
        cfg = IsingConfig(
            rows=args.rows,
            cols=args.cols,
            coupling=magnitude if args.kind == "ising+" else -magnitude,
            field_scale=args.field_scale if args.field_scale is not None else settings.ising_field_scale,
            burn_in=args.burn_in if args.burn_in is not None else settings.ising_burn_in,
            seed=args.seed,
            **overrides,
        )
        if args.samples > 1:
            graphs = sample_ising_series(cfg, args.samples)
            out = Path(args.out)
            _write_stdout(
                [_write_generated(g, out / f"sample_{i}", args.kind, args.seed) for i, g in enumerate(graphs)]
            )
            return 0
        graph = sample_ising(cfg)
    elif args.kind == "ws":
        graph = watts_strogatz(args.n, args.k, args.rewire_prob, args.seed)
    else:
        graph = grid_graph(args.rows, args.cols)

    _write_stdout(_write_generated(graph, Path(args.out), args.kind, args.seed))
    return 0


# === train ===


def cmd_train(args: argparse.Namespace) -> int:
    method = args.method_positional or args.method
    if method not in METHODS:
        raise UnknownMethodError(method, METHODS)

    bundle = _read_bundle(args.bundle)
    graph = _prepare(bundle.graph, args.feature_count)
    if graph.labels is None:
        raise ValidationError(error_code="MISSING_LABELS", message="Training bundle has no labels.csv")

    fixed = None
    if args.use_bundle_splits:
        fixed = Splits(bundle.split("train"), bundle.split("val"), bundle.split("test"))

    backend = get_estimator_backend(_estimator_config(args), graph.n)
    service = get_experiment_service(backend)
    report, models = service.run_repetitions(
        method,
        graph,
        _regressor_spec(args),
        _train_config(args),
        SplitConfig(seed=args.seed),
        repetitions=args.repetitions,
        base_seed=args.seed,
        dataset=Path(args.bundle).name,
        fixed_splits=fixed,
    )

    out = _out_dir(args)
    if out is not None:
        (out / "report.json").write_text(_to_json(report) + "\n")
        for i, model in enumerate(models):
            model.save(out / f"model_seed{args.seed + i}.json")
        logger.info(f"Wrote report and {len(models)} model file(s) to {out}")
    _write_stdout(report)
    return 0


# === predict ===


def cmd_predict(args: argparse.Namespace) -> int:
    model = CGNNModel.load(args.model)
    bundle = _read_bundle(args.bundle)
    graph = _prepare(bundle.graph, model.regressor.feature_dim if args.feature_count is None else args.feature_count)
    labeled = bundle.split(args.labeled_split) if args.labeled_split else graph.labeled_vertices

    backend = get_estimator_backend(model.estimator, graph.n)
    service = get_prediction_service(backend)
    predictions = service.predict_inductive(model, graph, labeled, fine_tune=args.fine_tune)
    unlabeled = np.setdiff1d(np.arange(graph.n), labeled)

    result: dict[str, Any] = {
        "method": model.method,
        "labeled": int(np.unique(labeled).size),
        "predicted": int(unlabeled.size),
        "metric": None,
        "score": None,
    }
    if graph.labels is not None and unlabeled.size:
        truth = graph.labels[unlabeled]
        known = ~np.isnan(truth)
        if known.any():
            result["metric"] = "accuracy" if is_binary(graph.labels) else "r2"
            try:
                result["score"] = score(predictions[known], truth[known], result["metric"])
            except UndefinedMetricError:
                result["score"] = None

    out = _out_dir(args)
    if out is not None:
        pd.DataFrame({"vertex_id": unlabeled, "prediction": predictions}).to_csv(
            out / "predictions.csv", index=False
        )
        logger.info(f"Wrote {unlabeled.size} predictions to {out / 'predictions.csv'}")
    _write_stdout(result)
    return 0


# === validate-estimator ===


def cmd_validate_estimator(args: argparse.Namespace) -> int:
    graph = _read_bundle(args.bundle).graph if args.bundle else None
    service = get_experiment_service(get_estimator_backend(_estimator_config(args).model_copy(update={"oracle_mode": False})))
    report = service.validate_estimator(
        grid=args.grid,
        runs=args.runs,
        n=args.n,
        mean_degree=args.k,
        rewire_prob=args.rewire_prob,
        alpha=args.alpha,
        beta=args.beta,
        labeled_fraction=args.labeled_fraction,
        seed=args.seed,
        derivatives=not args.no_derivatives,
        graph=graph,
    )
    out = _out_dir(args)
    if out is not None:
        (out / "estimator_validation.json").write_text(_to_json(report) + "\n")
        pd.DataFrame([cell.model_dump() for cell in report.cells]).to_csv(
            out / "estimator_validation.csv", index=False
        )
    _write_stdout(report)
    return 0


# === benchmark-scaling ===


def cmd_benchmark_scaling(args: argparse.Namespace) -> int:
    service = get_experiment_service(get_estimator_backend(_estimator_config(args).model_copy(update={"oracle_mode": False})))
    report = service.benchmark_scaling(
        sizes=args.sizes,
        mean_degree=args.k,
        rewire_prob=args.rewire_prob,
        repeats=args.repeats,
        seed=args.seed,
    )
    out = _out_dir(args)
    if out is not None:
        (out / "scaling.json").write_text(_to_json(report) + "\n")
        pd.DataFrame(
            {"vertices": report.vertices, "edges": report.edges, "seconds": report.seconds}
        ).to_csv(out / "scaling.csv", index=False)
    _write_stdout(report)
    return 0


# === inductive ===


def cmd_inductive(args: argparse.Namespace) -> int:
    train_graph = _prepare(_read_bundle(args.train_bundle).graph, args.feature_count)
    test_graph = _prepare(_read_bundle(args.test_bundle).graph, args.feature_count)
    if train_graph.labels is None or test_graph.labels is None:
        raise ValidationError(error_code="MISSING_LABELS", message="Both bundles need labels.csv")

    backend = get_estimator_backend(_estimator_config(args), max(train_graph.n, test_graph.n))
    service = get_experiment_service(backend)
    fine_tune_cfg = TrainConfig(
        epochs=args.fine_tune_epochs if args.fine_tune_epochs is not None else settings.fine_tune_epochs,
        lr_theta=settings.fine_tune_lr,
        seed=args.seed,
        select_on_validation=False,
    )
    reports = service.run_inductive(
        train_graph,
        test_graph,
        fractions=args.fractions,
        spec=_regressor_spec(args),
        train_cfg=_train_config(args),
        split_cfg=SplitConfig(seed=args.seed),
        repetitions=args.repetitions,
        base_seed=args.seed,
        fine_tune_cfg=fine_tune_cfg,
        dataset=f"{Path(args.train_bundle).name}->{Path(args.test_bundle).name}",
    )
    out = _out_dir(args)
    if out is not None:
        (out / "inductive.json").write_text(_to_json(reports) + "\n")
        pd.DataFrame(
            [
                {
                    "method": r.method,
                    "label_fraction": r.config["label_fraction"],
                    "mean": r.mean,
                    "std": r.std,
                    "runs": len(r.values),
                }
                for r in reports
            ]
        ).to_csv(out / "inductive.csv", index=False)
    _write_stdout(reports)
    return 0
