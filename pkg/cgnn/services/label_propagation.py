"""Label propagation with the normalized Laplacian and the LP-GNN predictor."""

from typing import Optional

import numpy as np

from cgnn.config import get_settings
from cgnn.linalg.cg import conjugate_gradient
from cgnn.linalg.operators import LaplacianOperator, SymmetricOperator, normalized_adjacency
from cgnn.models.graph import AttributedGraph, VertexPartition
from cgnn.regressors.base import BaseRegressor, ParameterSet

settings = get_settings()


def label_propagation(
    s_op: SymmetricOperator,
    z_l: np.ndarray,
    partition: VertexPartition,
    tol: Optional[float] = None,
    max_iters: Optional[int] = None,
) -> np.ndarray:
    """Harmonic extension ``z_U`` solving ``L_UU z_U = -L_UL z_L`` with ``L = I - S``.

    CG starts from zero, so components of U with no path to L stay at 0
    (minimal-norm solution of the singular but consistent system).
    """
    labeled, unlabeled = partition.labeled, partition.unlabeled
    if unlabeled.size == 0:
        return np.zeros(0)
    laplacian = LaplacianOperator(s_op)
    rhs = -laplacian.block_apply(unlabeled, labeled, np.asarray(z_l, dtype=np.float64))
    result = conjugate_gradient(
        laplacian.restricted(unlabeled),
        rhs,
        tol=settings.lp_cg_tolerance if tol is None else tol,
        max_iters=settings.lp_cg_max_iters if max_iters is None else max_iters,
    )
    return result.solution


def lp_gnn_predict(
    regressor: BaseRegressor,
    params: ParameterSet,
    graph: AttributedGraph,
    partition: VertexPartition,
    labels_l: np.ndarray,
) -> np.ndarray:
    """``yhat_U + LP(S, y_L - yhat_L)``."""
    yhat = regressor.predict(params, graph)
    residual = np.asarray(labels_l, dtype=np.float64) - yhat[partition.labeled]
    propagated = label_propagation(normalized_adjacency(graph), residual, partition)
    return yhat[partition.unlabeled] + propagated
