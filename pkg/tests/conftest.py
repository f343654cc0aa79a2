"""Pytest fixtures shared by unit, integration and contract tests."""

import numpy as np
import pytest

from cgnn.data.generators import watts_strogatz
from cgnn.models.graph import AttributedGraph, VertexPartition
from cgnn.models.params import CorrelationParams
from cgnn.schemas.estimator import EstimatorConfig
from cgnn.services.estimator_dense import DenseEstimatorBackend
from cgnn.services.estimator_stochastic import StochasticEstimatorBackend
from cgnn.services.precision import PrecisionOperator


def make_regression_graph(n: int = 40, mean_degree: int = 4, seed: int = 0, feature_dim: int = 3) -> AttributedGraph:
    """Small-world graph with Gaussian features and smooth real labels."""
    rng = np.random.default_rng(seed)
    base = watts_strogatz(n, mean_degree, 0.2, seed)
    features = rng.standard_normal((n, feature_dim))
    labels = features @ rng.standard_normal(feature_dim) + 0.1 * rng.standard_normal(n)
    return AttributedGraph(n, base.edges, features, labels)


def make_two_type_graph(n: int = 24, seed: int = 0) -> AttributedGraph:
    """Ring (type 0) plus random chords (type 1) with features and labels."""
    rng = np.random.default_rng(seed)
    ring = [(i, (i + 1) % n, 0) for i in range(n)]
    chords = set()
    while len(chords) < n // 2:
        u, v = sorted(int(x) for x in rng.choice(n, size=2, replace=False))
        chords.add((u, v, 1))
    features = rng.standard_normal((n, 2))
    labels = rng.standard_normal(n)
    return AttributedGraph(n, ring + sorted(chords), features, labels, edge_type_count=2)


@pytest.fixture
def path_graph() -> AttributedGraph:
    """Path 0-1-2-3-4 with one feature column."""
    return AttributedGraph(
        5,
        [(0, 1), (1, 2), (2, 3), (3, 4)],
        features=np.arange(5, dtype=float).reshape(-1, 1),
        labels=np.array([1.0, -1.0, 1.0, -1.0, 1.0]),
    )


@pytest.fixture
def small_graph() -> AttributedGraph:
    return make_regression_graph()


@pytest.fixture
def two_type_graph() -> AttributedGraph:
    return make_two_type_graph()


@pytest.fixture
def half_partition(small_graph) -> VertexPartition:
    rng = np.random.default_rng(7)
    labeled = rng.choice(small_graph.n, size=small_graph.n // 2, replace=False)
    return VertexPartition.from_labeled(small_graph.n, labeled)


@pytest.fixture
def correlated_params() -> CorrelationParams:
    return CorrelationParams.uniform(0.8, 1.5)


@pytest.fixture
def precision(small_graph, correlated_params, half_partition) -> PrecisionOperator:
    return PrecisionOperator.from_graph(small_graph, correlated_params, half_partition)


@pytest.fixture
def dense_backend() -> DenseEstimatorBackend:
    return DenseEstimatorBackend(EstimatorConfig(oracle_mode=True))


@pytest.fixture
def stochastic_backend() -> StochasticEstimatorBackend:
    return StochasticEstimatorBackend(
        EstimatorConfig(probes=64, lanczos_steps=30, cg_tolerance=1e-10, cg_max_iters=500, seed=3)
    )
