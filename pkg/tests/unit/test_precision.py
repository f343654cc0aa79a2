"""Unit tests for the precision operator."""

import numpy as np
import pytest
import scipy.sparse as sp

from cgnn.data.generators import watts_strogatz
from cgnn.exceptions import ValidationError
from cgnn.linalg.estimators import cg_iteration_budget
from cgnn.linalg.operators import SymmetricOperator, typed_normalized_adjacency
from cgnn.models.graph import VertexPartition
from cgnn.models.params import CorrelationParams
from cgnn.schemas.estimator import EstimatorConfig
from cgnn.services.precision import BETA, PrecisionOperator


def dense_gamma(graph, params) -> np.ndarray:
    s_ops = typed_normalized_adjacency(graph)
    total = np.eye(graph.n)
    for alpha, s_op in zip(params.alphas, s_ops):
        total -= alpha * s_op.to_dense()
    return params.beta * total


class TestPrecisionOperator:
    """Tests for PrecisionOperator."""

    def test_apply_matches_dense(self, two_type_graph):
        """Should apply beta * (I - sum alpha_i S_i)."""
        params = CorrelationParams(alphas=(0.6, -0.3), beta=2.0)
        precision = PrecisionOperator.from_graph(two_type_graph, params)
        v = np.random.default_rng(0).standard_normal(two_type_graph.n)

        np.testing.assert_allclose(precision.apply(v), dense_gamma(two_type_graph, params) @ v, atol=1e-12)
        np.testing.assert_allclose(precision.sparse_matrix().toarray(), dense_gamma(two_type_graph, params))

    def test_blocks_include_identity_only_on_shared_indices(self, precision, half_partition):
        """Should give off-diagonal blocks without the identity term."""
        labeled, unlabeled = half_partition.labeled, half_partition.unlabeled
        v = np.ones(labeled.size)
        dense = precision.dense_block()

        np.testing.assert_allclose(
            precision.apply_block(unlabeled, labeled, v), dense[np.ix_(unlabeled, labeled)] @ v, atol=1e-12
        )
        np.testing.assert_allclose(
            precision.apply_block(labeled, labeled, v), dense[np.ix_(labeled, labeled)] @ v, atol=1e-12
        )

    def test_empty_block(self, precision):
        """Should return zeros when the column set is empty."""
        out = precision.apply_block(np.array([0, 1]), np.array([], dtype=np.int64), np.zeros(0))

        np.testing.assert_array_equal(out, [0.0, 0.0])

    def test_derivatives_match_finite_differences(self, two_type_graph):
        """Should apply dGamma/dalpha_i and dGamma/dbeta."""
        params = CorrelationParams(alphas=(0.4, 0.2), beta=1.3)
        precision = PrecisionOperator.from_graph(two_type_graph, params)
        rows = np.arange(0, two_type_graph.n, 2)
        cols = np.arange(1, two_type_graph.n, 3)
        v = np.linspace(-1.0, 1.0, cols.size)
        h = 1e-6

        shifted_alpha = dense_gamma(two_type_graph, CorrelationParams(alphas=(0.4, 0.2 + h), beta=1.3))
        fd_alpha = (shifted_alpha - dense_gamma(two_type_graph, params))[np.ix_(rows, cols)] @ v / h
        shifted_beta = dense_gamma(two_type_graph, CorrelationParams(alphas=(0.4, 0.2), beta=1.3 + h))
        fd_beta = (shifted_beta - dense_gamma(two_type_graph, params))[np.ix_(rows, cols)] @ v / h

        np.testing.assert_allclose(precision.apply_derivative(1, rows, cols, v), fd_alpha, atol=1e-6)
        np.testing.assert_allclose(precision.apply_derivative(BETA, rows, cols, v), fd_beta, atol=1e-6)
        np.testing.assert_allclose(
            precision.dense_derivative(1, rows, cols) @ v, precision.apply_derivative(1, rows, cols, v), atol=1e-12
        )

    def test_marginal_equals_schur_complement(self, precision, half_partition):
        """Should apply Gamma_LL - Gamma_LU Gamma_UU^-1 Gamma_UL."""
        labeled, unlabeled = half_partition.labeled, half_partition.unlabeled
        dense = precision.dense_block()
        schur = dense[np.ix_(labeled, labeled)] - dense[np.ix_(labeled, unlabeled)] @ np.linalg.solve(
            dense[np.ix_(unlabeled, unlabeled)], dense[np.ix_(unlabeled, labeled)]
        )
        v = np.random.default_rng(1).standard_normal(labeled.size)

        tight = EstimatorConfig(cg_tolerance=1e-12, cg_max_iters=500)

        np.testing.assert_allclose(precision.apply_marginal(v, tight), schur @ v, atol=1e-9)

    def test_channels(self, two_type_graph):
        """Should list one channel per edge type, then beta."""
        precision = PrecisionOperator.from_graph(two_type_graph, CorrelationParams(alphas=(0.1, 0.2), beta=1.0))

        assert precision.channels == [0, 1, BETA]

    def test_requires_partition(self, small_graph, correlated_params):
        """Should raise when a partition-dependent operation has no partition."""
        precision = PrecisionOperator.from_graph(small_graph, correlated_params)

        with pytest.raises(ValidationError) as exc_info:
            precision.apply_marginal(np.ones(3))

        assert exc_info.value.error_code == "PARTITION_REQUIRED"

    def test_rejects_alpha_count_mismatch(self, two_type_graph):
        """Should require one alpha per edge type."""
        with pytest.raises(ValidationError) as exc_info:
            PrecisionOperator.from_graph(two_type_graph, CorrelationParams.uniform(0.5, 1.0))

        assert exc_info.value.error_code == "EDGE_TYPE_MISMATCH"

    def test_positive_definite_for_valid_params(self, small_graph):
        """Should stay positive definite near the alpha margin."""
        params = CorrelationParams.uniform(-0.999, 0.5)
        eigenvalues = np.linalg.eigvalsh(PrecisionOperator.from_graph(small_graph, params).dense_block())

        assert eigenvalues.min() > 0.0

    def test_with_partition_shares_operators(self, precision):
        """Should keep the adjacency operators when swapping the partition."""
        other = precision.with_partition(VertexPartition.from_labeled(precision.dimension, [0]))

        assert other.s_ops is not precision.s_ops
        assert other.s_ops[0] is precision.s_ops[0]
        assert other.params == precision.params

    def test_custom_operator(self):
        """Should accept arbitrary symmetric operators."""
        op = SymmetricOperator(sp.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]])))
        precision = PrecisionOperator(CorrelationParams.uniform(0.5, 2.0), [op])

        np.testing.assert_allclose(precision.dense_block(), [[2.0, -1.0], [-1.0, 2.0]])

    def test_block_apply_matches_columns(self, precision, half_partition):
        """Should apply a block of vectors column by column."""
        labeled, unlabeled = half_partition.labeled, half_partition.unlabeled
        block = np.random.default_rng(2).standard_normal((labeled.size, 3))

        together = precision.apply_block(unlabeled, labeled, block)

        for j in range(3):
            np.testing.assert_allclose(together[:, j], precision.apply_block(unlabeled, labeled, block[:, j]), atol=1e-12)


class TestGammaSolves:
    """CG on Gamma and its principal blocks."""

    @pytest.fixture(scope="class")
    def ws_graph(self):
        return watts_strogatz(2000, 10, 0.1, seed=4)

    @pytest.mark.parametrize("alpha", [0.5, 0.99, -0.99])
    def test_converges_within_iteration_budget(self, ws_graph, alpha):
        """Should reach the default tolerance within 10 sqrt(kappa) + 20 iterations."""
        params = CorrelationParams.uniform(alpha, 1.5)
        labeled = np.arange(0, ws_graph.n, 2)
        precision = PrecisionOperator.from_graph(ws_graph, params, VertexPartition.from_labeled(ws_graph.n, labeled))
        budget = cg_iteration_budget(params)
        rhs = np.random.default_rng(0).standard_normal(ws_graph.n)

        for rows in (np.arange(ws_graph.n), precision.partition.unlabeled):
            result = precision.solve_block(rows, rhs[rows], EstimatorConfig())

            assert result.converged is True
            assert result.iterations <= budget

    def test_block_solve_matches_column_solves(self, ws_graph):
        """Should solve every column of a right-hand-side block."""
        precision = PrecisionOperator.from_graph(ws_graph, CorrelationParams.uniform(0.9, 1.0))
        rows = np.arange(ws_graph.n)
        rhs = np.random.default_rng(1).standard_normal((ws_graph.n, 3))
        cfg = EstimatorConfig(cg_tolerance=1e-10)

        block = precision.solve_block(rows, rhs, cfg)

        assert block.converged is True
        for j in range(3):
            np.testing.assert_allclose(block.solution[:, j], precision.solve_block(rows, rhs[:, j], cfg).solution, atol=1e-8)
