"""Concrete regressor kinds."""

from typing import Optional

import numpy as np
import scipy.sparse as sp

from cgnn.models.graph import AttributedGraph
from cgnn.regressors.base import BaseRegressor


def _self_loop_pattern(graph: AttributedGraph) -> sp.csr_matrix:
    return (sp.identity(graph.n, format="csr") + graph.neighbor_pattern).tocsr()


class LinearRegressor(BaseRegressor):
    """Affine map of the vertex features; no hidden layers."""

    kind = "linear"

    def propagation(self, graph: AttributedGraph) -> Optional[sp.csr_matrix]:
        return None


class MLPRegressor(BaseRegressor):
    """Per-vertex multilayer perceptron ignoring the graph."""

    kind = "mlp"

    def propagation(self, graph: AttributedGraph) -> Optional[sp.csr_matrix]:
        return None


class SageMeanRegressor(BaseRegressor):
    """Mean aggregation over the closed neighborhood ``{i} u N(i)`` per layer."""

    kind = "sage_mean"

    @property
    def uses_graph(self) -> bool:
        return True

    def propagation(self, graph: AttributedGraph) -> Optional[sp.csr_matrix]:
        pattern = _self_loop_pattern(graph)
        counts = np.asarray(pattern.sum(axis=1)).reshape(-1)
        return (sp.diags(1.0 / counts) @ pattern).tocsr()


class GCNRegressor(BaseRegressor):
    """Symmetric-normalized propagation ``D~^-1/2 (I + B) D~^-1/2``."""

    kind = "gcn"

    @property
    def uses_graph(self) -> bool:
        return True

    def propagation(self, graph: AttributedGraph) -> Optional[sp.csr_matrix]:
        pattern = _self_loop_pattern(graph)
        inv_sqrt = 1.0 / np.sqrt(np.asarray(pattern.sum(axis=1)).reshape(-1))
        scaling = sp.diags(inv_sqrt)
        return (scaling @ pattern @ scaling).tocsr()


REGRESSOR_KINDS: dict[str, type[BaseRegressor]] = {
    cls.kind: cls
    for cls in (LinearRegressor, MLPRegressor, SageMeanRegressor, GCNRegressor)
}
