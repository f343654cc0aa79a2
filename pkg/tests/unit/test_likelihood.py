"""Unit tests for the marginal negative log-likelihood and its gradients."""

import numpy as np
import pytest

from cgnn.exceptions import ValidationError
from cgnn.models.graph import VertexPartition
from cgnn.models.params import CorrelationParams
from cgnn.services.likelihood import marginal_nll_and_grads
from cgnn.services.precision import PrecisionOperator


def dense_loss(precision: PrecisionOperator, r: np.ndarray) -> float:
    """Omega from the explicit Schur complement."""
    labeled, unlabeled = precision.partition.labeled, precision.partition.unlabeled
    gamma = precision.dense_block()
    schur = gamma[np.ix_(labeled, labeled)] - gamma[np.ix_(labeled, unlabeled)] @ np.linalg.solve(
        gamma[np.ix_(unlabeled, unlabeled)], gamma[np.ix_(unlabeled, labeled)]
    )
    return float(r @ schur @ r - np.linalg.slogdet(schur)[1])


class TestMarginalNLL:
    """Tests for marginal_nll_and_grads with the dense oracle."""

    @pytest.fixture
    def residual(self, half_partition):
        return np.random.default_rng(11).standard_normal(half_partition.labeled.size)

    def test_loss_matches_schur_complement_form(self, precision, residual, dense_backend):
        """Should equal r^T Gbar r - log det Gbar."""
        result = marginal_nll_and_grads(precision, residual, dense_backend)

        assert result.loss == pytest.approx(dense_loss(precision, residual), rel=1e-10)
        assert result.logdet_full - result.logdet_unlabeled == pytest.approx(
            result.quadratic - result.loss, rel=1e-10
        )

    def test_correlation_gradients_match_finite_differences(self, two_type_graph, dense_backend):
        """Should match central differences of Omega in every alpha_i and beta."""
        partition = VertexPartition.from_labeled(two_type_graph.n, np.arange(0, two_type_graph.n, 2))
        params = CorrelationParams(alphas=(0.5, -0.3), beta=1.7)
        r = np.random.default_rng(2).standard_normal(partition.labeled.size)
        precision = PrecisionOperator.from_graph(two_type_graph, params, partition)
        h = 1e-5

        result = marginal_nll_and_grads(precision, r, dense_backend)

        def loss_at(alphas, beta):
            shifted = precision.with_params(CorrelationParams(alphas=alphas, beta=beta))
            return marginal_nll_and_grads(shifted, r, dense_backend).loss

        for i in range(2):
            up = list(params.alphas)
            down = list(params.alphas)
            up[i] += h
            down[i] -= h
            fd = (loss_at(tuple(up), params.beta) - loss_at(tuple(down), params.beta)) / (2 * h)
            assert result.dalphas[i] == pytest.approx(fd, rel=1e-3, abs=1e-6)
        fd_beta = (loss_at(params.alphas, params.beta + h) - loss_at(params.alphas, params.beta - h)) / (2 * h)
        assert result.dbeta == pytest.approx(fd_beta, rel=1e-3, abs=1e-6)

    def test_prediction_gradient_matches_finite_differences(self, precision, residual, dense_backend):
        """Should return dOmega/dyhat_L = -2 Gbar r."""
        result = marginal_nll_and_grads(precision, residual, dense_backend)
        h = 1e-6
        fd = np.zeros(residual.size)
        for j in range(residual.size):
            step = np.zeros(residual.size)
            step[j] = h
            # yhat moving up moves r = y - yhat down
            fd[j] = (
                marginal_nll_and_grads(precision, residual - step, dense_backend).loss
                - marginal_nll_and_grads(precision, residual + step, dense_backend).loss
            ) / (2 * h)

        np.testing.assert_allclose(result.dyhat_l, fd, rtol=1e-5, atol=1e-6)

    def test_uncorrelated_unit_precision_reduces_to_squared_error(self, small_graph, half_partition, dense_backend):
        """Should give Omega = ||r||^2 and dyhat = -2 r at alpha = 0, beta = 1."""
        precision = PrecisionOperator.from_graph(small_graph, CorrelationParams.uniform(0.0, 1.0), half_partition)
        r = np.linspace(-2.0, 2.0, half_partition.labeled.size)

        result = marginal_nll_and_grads(precision, r, dense_backend)

        assert result.loss == pytest.approx(float(r @ r), abs=1e-10)
        np.testing.assert_array_equal(result.dyhat_l, -2.0 * r)

    def test_stochastic_close_to_dense(self, precision, residual, dense_backend, stochastic_backend):
        """Should approximate the oracle loss with the stochastic backend."""
        exact = marginal_nll_and_grads(precision, residual, dense_backend)
        estimate = marginal_nll_and_grads(precision, residual, stochastic_backend)

        assert estimate.quadratic == pytest.approx(exact.quadratic, rel=1e-6)
        assert estimate.loss == pytest.approx(exact.loss, abs=0.15 * abs(exact.loss) + 2.5)

    def test_no_unlabeled_vertices(self, small_graph, dense_backend):
        """Should reduce to the full Gaussian when every vertex is labeled."""
        partition = VertexPartition.from_labeled(small_graph.n, np.arange(small_graph.n))
        params = CorrelationParams.uniform(0.5, 1.0)
        precision = PrecisionOperator.from_graph(small_graph, params, partition)
        r = np.ones(small_graph.n)

        result = marginal_nll_and_grads(precision, r, dense_backend)
        gamma = precision.dense_block()

        assert result.loss == pytest.approx(float(r @ gamma @ r) - np.linalg.slogdet(gamma)[1])
        assert result.logdet_unlabeled == 0.0

    def test_empty_labeled_set_raises(self, small_graph, correlated_params, dense_backend):
        """Should refuse an empty labeled set."""
        partition = VertexPartition.from_labeled(small_graph.n, [])
        precision = PrecisionOperator.from_graph(small_graph, correlated_params, partition)

        with pytest.raises(ValidationError) as exc_info:
            marginal_nll_and_grads(precision, np.zeros(0), dense_backend)

        assert exc_info.value.error_code == "EMPTY_LABELED_SET"

    def test_residual_shape_mismatch_raises(self, precision, dense_backend):
        """Should refuse residuals of the wrong length."""
        with pytest.raises(ValidationError) as exc_info:
            marginal_nll_and_grads(precision, np.zeros(3), dense_backend)

        assert exc_info.value.error_code == "RESIDUAL_SHAPE_MISMATCH"
