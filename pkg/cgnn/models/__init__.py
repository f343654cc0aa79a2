from cgnn.models.graph import AttributedGraph, VertexPartition
from cgnn.models.params import CorrelationParams, Reparametrization, reparametrize, to_raw

__all__ = [
    "AttributedGraph",
    "VertexPartition",
    "CorrelationParams",
    "Reparametrization",
    "reparametrize",
    "to_raw",
]
