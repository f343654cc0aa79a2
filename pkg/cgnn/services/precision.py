"""Residual precision operator ``Gamma = beta * (I - sum_i alpha_i S_i)``."""

from typing import Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp

from cgnn.exceptions import ValidationError
from cgnn.linalg.cg import CGResult, conjugate_gradient
from cgnn.linalg.operators import SymmetricOperator, typed_normalized_adjacency, zero_extend
from cgnn.models.graph import AttributedGraph, VertexPartition
from cgnn.models.params import CorrelationParams
from cgnn.schemas.estimator import EstimatorConfig

Channel = Union[int, str]
BETA = "beta"


class PrecisionOperator:
    """Matrix-free Gamma with block, derivative and Schur-complement applies.

    Blocks ``Gamma_PQ`` are applied by zero-extending from ``Q``, applying the
    full operator and keeping the ``P`` rows, so the identity contributes
    only on indices shared by ``P`` and ``Q``.
    """

    def __init__(
        self,
        params: CorrelationParams,
        s_ops: Sequence[SymmetricOperator],
        partition: Optional[VertexPartition] = None,
    ):
        if len(s_ops) != params.type_count:
            raise ValidationError(
                error_code="EDGE_TYPE_MISMATCH",
                message="One alpha is required per edge type",
                details={"alphas": params.type_count, "edge_types": len(s_ops)},
            )
        self.params = params
        self.s_ops = list(s_ops)
        self.partition = partition
        self._n = s_ops[0].dimension if s_ops else 0

    @classmethod
    def from_graph(
        cls,
        graph: AttributedGraph,
        params: CorrelationParams,
        partition: Optional[VertexPartition] = None,
    ) -> "PrecisionOperator":
        return cls(params, typed_normalized_adjacency(graph), partition)

    def with_params(self, params: CorrelationParams) -> "PrecisionOperator":
        return PrecisionOperator(params, self.s_ops, self.partition)

    def with_partition(self, partition: Optional[VertexPartition]) -> "PrecisionOperator":
        return PrecisionOperator(self.params, self.s_ops, partition)

    @property
    def dimension(self) -> int:
        return self._n

    @property
    def channels(self) -> list[Channel]:
        """Derivative channels: one per alpha_i, then beta."""
        return list(range(self.params.type_count)) + [BETA]

    def require_partition(self) -> VertexPartition:
        if self.partition is None:
            raise ValidationError(
                error_code="PARTITION_REQUIRED",
                message="This operation needs a labeled/unlabeled partition",
            )
        return self.partition

    def apply(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.float64)
        out = v.copy()
        for alpha, s_op in zip(self.params.alphas, self.s_ops):
            if alpha != 0.0:
                out -= alpha * s_op.apply(v)
        return self.params.beta * out

    def apply_block(self, rows: np.ndarray, cols: np.ndarray, v: np.ndarray) -> np.ndarray:
        if len(cols) == 0:
            return np.zeros(len(rows))
        return self.apply(zero_extend(self._n, cols, v))[rows]

    def apply_derivative(
        self,
        channel: Channel,
        rows: np.ndarray,
        cols: np.ndarray,
        v: np.ndarray,
    ) -> np.ndarray:
        """Apply ``dGamma_PQ/dalpha_i = -beta S_i,PQ`` or ``dGamma_PQ/dbeta = Gamma_PQ / beta``."""
        if len(cols) == 0:
            return np.zeros(len(rows))
        if channel == BETA:
            return self.apply_block(rows, cols, v) / self.params.beta
        s_op = self.s_ops[int(channel)]
        return -self.params.beta * s_op.block_apply(rows, cols, v)

    def restricted(self, rows: np.ndarray):
        """Apply of the principal block ``Gamma_RR``."""
        return lambda v: self.apply_block(rows, rows, v)

    def solve_block(
        self,
        rows: np.ndarray,
        rhs: np.ndarray,
        cfg: Optional[EstimatorConfig] = None,
    ) -> CGResult:
        return conjugate_gradient(self.restricted(rows), rhs, cfg=cfg)

    def apply_marginal(self, v_l: np.ndarray, cfg: Optional[EstimatorConfig] = None) -> np.ndarray:
        """``Gamma_LL v - Gamma_LU Gamma_UU^-1 Gamma_UL v`` with one CG solve."""
        partition = self.require_partition()
        labeled, unlabeled = partition.labeled, partition.unlabeled
        direct = self.apply_block(labeled, labeled, v_l)
        if unlabeled.size == 0:
            return direct
        coupling = self.apply_block(unlabeled, labeled, v_l)
        x = self.solve_block(unlabeled, coupling, cfg).solution
        return direct - self.apply_block(labeled, unlabeled, x)

    def sparse_matrix(self) -> sp.csr_matrix:
        total = sp.identity(self._n, format="csr")
        for alpha, s_op in zip(self.params.alphas, self.s_ops):
            total = total - alpha * s_op.matrix
        return (self.params.beta * total).tocsr()

    def dense_block(self, rows: Optional[np.ndarray] = None, cols: Optional[np.ndarray] = None) -> np.ndarray:
        """Dense ``Gamma_PQ``; only for small verification problems."""
        dense = self.sparse_matrix().toarray()
        if rows is not None:
            dense = dense[rows]
        if cols is not None:
            dense = dense[:, cols]
        return dense

    def dense_derivative(self, channel: Channel, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        if channel == BETA:
            return self.dense_block(rows, cols) / self.params.beta
        s_dense = self.s_ops[int(channel)].to_dense()
        return -self.params.beta * s_dense[np.ix_(rows, cols)]
