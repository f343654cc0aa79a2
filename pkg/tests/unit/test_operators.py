"""Unit tests for graph operators."""

import numpy as np
import pytest

from cgnn.linalg.operators import (
    LaplacianOperator,
    SymmetricOperator,
    normalized_adjacency,
    typed_normalized_adjacency,
    zero_extend,
)
from cgnn.models.graph import AttributedGraph


class TestNormalizedAdjacency:
    """Tests for S = D^-1/2 A D^-1/2."""

    def test_path_graph_entries(self, path_graph):
        """Should scale each edge by the inverse square roots of its endpoint degrees."""
        s = normalized_adjacency(path_graph).to_dense()

        assert s[0, 1] == pytest.approx(1.0 / np.sqrt(2.0))
        assert s[1, 2] == pytest.approx(0.5)
        assert s[0, 0] == 0.0
        np.testing.assert_allclose(s, s.T)

    def test_spectrum_within_unit_interval(self, small_graph):
        """Should have every eigenvalue in [-1, 1] with top eigenvalue 1."""
        eigenvalues = np.linalg.eigvalsh(normalized_adjacency(small_graph).to_dense())

        assert eigenvalues.min() >= -1.0 - 1e-12
        assert eigenvalues.max() == pytest.approx(1.0)

    def test_isolated_vertex_has_zero_row(self):
        """Should give isolated vertices an all-zero row and column."""
        graph = AttributedGraph(4, [(0, 1), (1, 2)])
        s = normalized_adjacency(graph).to_dense()

        assert np.all(s[3] == 0.0)
        assert np.all(s[:, 3] == 0.0)

    def test_typed_operators_sum_to_total(self, two_type_graph):
        """Should split S by edge type using the total degree."""
        typed = typed_normalized_adjacency(two_type_graph)
        total = normalized_adjacency(two_type_graph).to_dense()

        assert len(typed) == 2
        np.testing.assert_allclose(typed[0].to_dense() + typed[1].to_dense(), total, atol=1e-14)


class TestSymmetricOperator:
    """Tests for sparse-backed operators."""

    def test_block_apply_matches_dense_block(self, small_graph):
        """Should equal the dense (P, Q) block times v."""
        op = normalized_adjacency(small_graph)
        rows = np.array([0, 3, 7, 11])
        cols = np.array([1, 2, 5, 8, 30])
        v = np.arange(1.0, 6.0)

        expected = op.to_dense()[np.ix_(rows, cols)] @ v
        np.testing.assert_allclose(op.block_apply(rows, cols, v), expected)

    def test_rejects_non_square(self):
        """Should refuse a non-square matrix."""
        with pytest.raises(ValueError):
            SymmetricOperator(np.zeros((2, 3)))

    def test_zero_extend(self):
        """Should place values at the given indices and zeros elsewhere."""
        out = zero_extend(5, np.array([1, 4]), np.array([2.0, 3.0]))

        np.testing.assert_array_equal(out, [0.0, 2.0, 0.0, 0.0, 3.0])


class TestLaplacianOperator:
    """Tests for the normalized Laplacian I - S."""

    def test_positive_semidefinite(self, small_graph):
        """Should have nonnegative spectrum with a zero eigenvalue."""
        laplacian = LaplacianOperator(normalized_adjacency(small_graph))
        eigenvalues = np.linalg.eigvalsh(laplacian.to_dense())

        assert eigenvalues.min() == pytest.approx(0.0, abs=1e-10)

    def test_restricted_matches_dense_principal_block(self, small_graph):
        """Should apply the principal block on the given indices."""
        laplacian = LaplacianOperator(normalized_adjacency(small_graph))
        idx = np.array([2, 4, 6, 8, 10])
        v = np.linspace(-1.0, 1.0, idx.size)

        expected = laplacian.to_dense(idx, idx) @ v
        np.testing.assert_allclose(laplacian.restricted(idx)(v), expected)
