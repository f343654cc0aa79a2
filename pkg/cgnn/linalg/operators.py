"""Matrix-free symmetric operators built from graph adjacency."""

from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp

from cgnn.models.graph import AttributedGraph

Apply = Callable[[np.ndarray], np.ndarray]


def zero_extend(n: int, indices: np.ndarray, values: np.ndarray) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    out = np.zeros((n,) + values.shape[1:])
    out[indices] = values
    return out


class SymmetricOperator:
    """Symmetric linear map backed by a sparse matrix.

    ``block_apply(P, Q, v)`` zero-extends ``v`` from ``Q`` onto all vertices,
    applies the full operator and keeps the ``P`` rows.
    """

    def __init__(self, matrix: sp.spmatrix):
        matrix = sp.csr_matrix(matrix, dtype=np.float64)
        matrix.sort_indices()
        if matrix.shape[0] != matrix.shape[1]:
            raise ValueError("SymmetricOperator requires a square matrix")
        self._matrix = matrix

    @property
    def dimension(self) -> int:
        return int(self._matrix.shape[0])

    @property
    def matrix(self) -> sp.csr_matrix:
        return self._matrix

    @property
    def nnz(self) -> int:
        return int(self._matrix.nnz)

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self._matrix @ np.asarray(v, dtype=np.float64)

    def block_apply(self, rows: np.ndarray, cols: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self.apply(zero_extend(self.dimension, cols, v))[rows]

    def __call__(self, v: np.ndarray) -> np.ndarray:
        return self.apply(v)

    def to_dense(self) -> np.ndarray:
        return self._matrix.toarray()


def _inverse_sqrt_degrees(graph: AttributedGraph) -> np.ndarray:
    degrees = graph.degrees()
    inv_sqrt = np.zeros_like(degrees)
    positive = degrees > 0
    inv_sqrt[positive] = 1.0 / np.sqrt(degrees[positive])
    return inv_sqrt


def _normalize(adjacency: sp.csr_matrix, inv_sqrt: np.ndarray) -> sp.csr_matrix:
    scaling = sp.diags(inv_sqrt)
    return (scaling @ adjacency @ scaling).tocsr()


def normalized_adjacency(graph: AttributedGraph) -> SymmetricOperator:
    """``S = D^-1/2 A D^-1/2``; isolated vertices get zero rows."""
    return SymmetricOperator(_normalize(graph.adjacency(), _inverse_sqrt_degrees(graph)))


def typed_normalized_adjacency(graph: AttributedGraph) -> list[SymmetricOperator]:
    """One ``S_i = D^-1/2 A_i D^-1/2`` per edge type, D being the total degree."""
    inv_sqrt = _inverse_sqrt_degrees(graph)
    return [
        SymmetricOperator(_normalize(graph.adjacency(t), inv_sqrt))
        for t in range(graph.edge_type_count)
    ]


class LaplacianOperator:
    """Normalized Laplacian ``I - S`` over a normalized adjacency operator."""

    def __init__(self, s_op: SymmetricOperator):
        self.s_op = s_op

    @property
    def dimension(self) -> int:
        return self.s_op.dimension

    def apply(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.float64)
        return v - self.s_op.apply(v)

    def block_apply(self, rows: np.ndarray, cols: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self.apply(zero_extend(self.dimension, cols, v))[rows]

    def restricted(self, indices: np.ndarray) -> Apply:
        """Apply of the principal block on ``indices``."""
        return lambda v: self.block_apply(indices, indices, v)

    def to_dense(self, rows: Optional[np.ndarray] = None, cols: Optional[np.ndarray] = None) -> np.ndarray:
        dense = np.eye(self.dimension) - self.s_op.to_dense()
        if rows is not None:
            dense = dense[rows]
        if cols is not None:
            dense = dense[:, cols]
        return dense
