from cgnn.linalg.cg import CGResult, conjugate_gradient
from cgnn.linalg.estimators import (
    condition_bound,
    hutchinson_trace,
    hutchinson_traces,
    probe_block,
    probe_blocks,
    probe_vector,
    slq_logdet,
)
from cgnn.linalg.lanczos import (
    TridiagonalMatrix,
    lanczos_tridiagonalize,
    lanczos_tridiagonalize_block,
    tridiag_eig,
)
from cgnn.linalg.operators import (
    LaplacianOperator,
    SymmetricOperator,
    normalized_adjacency,
    typed_normalized_adjacency,
)

__all__ = [
    "CGResult",
    "conjugate_gradient",
    "condition_bound",
    "hutchinson_trace",
    "hutchinson_traces",
    "probe_block",
    "probe_blocks",
    "probe_vector",
    "slq_logdet",
    "TridiagonalMatrix",
    "lanczos_tridiagonalize",
    "lanczos_tridiagonalize_block",
    "tridiag_eig",
    "LaplacianOperator",
    "SymmetricOperator",
    "normalized_adjacency",
    "typed_normalized_adjacency",
]
