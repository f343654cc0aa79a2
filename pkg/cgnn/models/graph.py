"""Attributed graph and vertex partition entities."""

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from cgnn.exceptions import ValidationError


def _as_index_array(indices: Iterable[int]) -> np.ndarray:
    arr = np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices)
    return arr.astype(np.int64, copy=False).reshape(-1)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


class AttributedGraph:
    """Immutable undirected graph with per-vertex features and optional labels.

    Edges are canonicalized to ``(min(u, v), max(u, v), type)`` and sorted.
    The same vertex pair may appear once per edge type. Missing labels are
    stored as NaN.
    """

    def __init__(
        self,
        n: int,
        edges: Sequence[tuple[int, ...]] | np.ndarray,
        features: Optional[np.ndarray] = None,
        labels: Optional[np.ndarray] = None,
        edge_type_count: Optional[int] = None,
    ):
        if n < 0:
            raise ValidationError(message="Vertex count must be nonnegative", details={"n": n})

        edge_array = self._canonical_edges(n, edges)
        max_type = int(edge_array[:, 2].max()) + 1 if len(edge_array) else 1
        if edge_type_count is None:
            edge_type_count = max_type
        if edge_type_count < 1 or max_type > edge_type_count:
            raise ValidationError(
                error_code="INVALID_EDGE_TYPE",
                message="Edge types must lie in [0, edge_type_count)",
                details={"edge_type_count": edge_type_count, "max_type": max_type - 1},
            )

        if features is None:
            features = np.zeros((n, 0))
        features = np.asarray(features, dtype=np.float64)
        if features.ndim == 1:
            features = features.reshape(n, -1)
        if features.ndim != 2 or features.shape[0] != n:
            raise ValidationError(
                error_code="FEATURE_SHAPE_MISMATCH",
                message="Features must be an (n, d) array",
                details={"n": n, "shape": list(features.shape)},
            )

        if labels is not None:
            labels = np.asarray(labels, dtype=np.float64).reshape(-1)
            if labels.shape[0] != n:
                raise ValidationError(
                    error_code="LABEL_SHAPE_MISMATCH",
                    message="Labels must have one entry per vertex",
                    details={"n": n, "labels": int(labels.shape[0])},
                )

        self._n = int(n)
        self._edges = _frozen(edge_array)
        self._features = _frozen(features)
        self._labels = _frozen(labels) if labels is not None else None
        self._edge_type_count = int(edge_type_count)

    @staticmethod
    def _canonical_edges(n: int, edges) -> np.ndarray:
        arr = np.asarray(edges, dtype=np.int64)
        if arr.size == 0:
            return np.zeros((0, 3), dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] not in (2, 3):
            raise ValidationError(
                error_code="INVALID_EDGES",
                message="Edges must be (u, v) or (u, v, type) records",
            )
        if arr.shape[1] == 2:
            arr = np.column_stack([arr, np.zeros(len(arr), dtype=np.int64)])

        u = np.minimum(arr[:, 0], arr[:, 1])
        v = np.maximum(arr[:, 0], arr[:, 1])
        t = arr[:, 2]

        if np.any(u == v):
            loop = int(u[u == v][0])
            raise ValidationError(
                error_code="SELF_LOOP",
                message="Self-loops are not allowed",
                details={"vertex": loop},
            )
        if np.any(u < 0) or np.any(v >= n) or np.any(t < 0):
            raise ValidationError(
                error_code="INVALID_EDGES",
                message="Edge endpoints must be in [0, n) and types nonnegative",
                details={"n": n},
            )

        canonical = np.column_stack([u, v, t])
        order = np.lexsort((t, v, u))
        canonical = canonical[order]
        if len(canonical) > 1:
            dup = np.all(canonical[1:] == canonical[:-1], axis=1)
            if np.any(dup):
                first = canonical[1:][dup][0]
                raise ValidationError(
                    error_code="DUPLICATE_EDGE",
                    message="Duplicate edge within one edge type",
                    details={"u": int(first[0]), "v": int(first[1]), "type": int(first[2])},
                )
        return canonical

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return int(self._edges.shape[0])

    @property
    def edges(self) -> np.ndarray:
        """Canonical ``(u, v, type)`` rows, read-only."""
        return self._edges

    @property
    def features(self) -> np.ndarray:
        return self._features

    @property
    def feature_dim(self) -> int:
        return int(self._features.shape[1])

    @property
    def labels(self) -> Optional[np.ndarray]:
        return self._labels

    @property
    def edge_type_count(self) -> int:
        return self._edge_type_count

    @property
    def labeled_vertices(self) -> np.ndarray:
        if self._labels is None:
            return np.zeros(0, dtype=np.int64)
        return np.flatnonzero(~np.isnan(self._labels)).astype(np.int64)

    def adjacency(self, edge_type: Optional[int] = None) -> sp.csr_matrix:
        """Symmetric adjacency counting one entry per (pair, type).

        With ``edge_type`` set, only edges of that type contribute.
        """
        if edge_type is None:
            return self._total_adjacency
        return self._typed_adjacency[edge_type]

    @cached_property
    def _typed_adjacency(self) -> list[sp.csr_matrix]:
        return [
            self._build_adjacency(self._edges[self._edges[:, 2] == t])
            for t in range(self._edge_type_count)
        ]

    @cached_property
    def _total_adjacency(self) -> sp.csr_matrix:
        return self._build_adjacency(self._edges)

    @cached_property
    def neighbor_pattern(self) -> sp.csr_matrix:
        """Binary adjacency: j is a neighbor of i if any typed edge joins them."""
        pattern = self._total_adjacency.copy()
        pattern.data = np.ones_like(pattern.data)
        return pattern

    def _build_adjacency(self, edges: np.ndarray) -> sp.csr_matrix:
        rows = np.concatenate([edges[:, 0], edges[:, 1]])
        cols = np.concatenate([edges[:, 1], edges[:, 0]])
        data = np.ones(len(rows), dtype=np.float64)
        adj = sp.coo_matrix((data, (rows, cols)), shape=(self._n, self._n)).tocsr()
        adj.sum_duplicates()
        adj.sort_indices()
        return adj

    def degrees(self) -> np.ndarray:
        """Total degree across all edge types."""
        return np.asarray(self._total_adjacency.sum(axis=1)).reshape(-1)

    def with_features(self, features: np.ndarray) -> "AttributedGraph":
        return AttributedGraph(
            self._n, self._edges, features, self._labels, self._edge_type_count
        )

    def with_labels(self, labels: Optional[np.ndarray]) -> "AttributedGraph":
        return AttributedGraph(
            self._n, self._edges, self._features, labels, self._edge_type_count
        )

    def __repr__(self) -> str:
        return (
            f"AttributedGraph(n={self._n}, m={self.m}, d={self.feature_dim}, "
            f"edge_types={self._edge_type_count}, labeled={len(self.labeled_vertices)})"
        )


@dataclass(frozen=True)
class VertexPartition:
    """Disjoint labeled/unlabeled cover of the vertex set, stored sorted."""

    labeled: np.ndarray
    unlabeled: np.ndarray

    def __post_init__(self):
        labeled = np.unique(_as_index_array(self.labeled))
        unlabeled = np.unique(_as_index_array(self.unlabeled))
        if np.intersect1d(labeled, unlabeled).size:
            raise ValidationError(
                error_code="OVERLAPPING_PARTITION",
                message="Labeled and unlabeled sets must be disjoint",
            )
        labeled.setflags(write=False)
        unlabeled.setflags(write=False)
        object.__setattr__(self, "labeled", labeled)
        object.__setattr__(self, "unlabeled", unlabeled)

    @classmethod
    def from_labeled(cls, n: int, labeled: Iterable[int]) -> "VertexPartition":
        labeled = np.unique(_as_index_array(labeled))
        if labeled.size and (labeled[0] < 0 or labeled[-1] >= n):
            raise ValidationError(
                error_code="INVALID_PARTITION",
                message="Labeled indices must lie in [0, n)",
                details={"n": n},
            )
        unlabeled = np.setdiff1d(np.arange(n, dtype=np.int64), labeled)
        return cls(labeled=labeled, unlabeled=unlabeled)

    @property
    def n(self) -> int:
        return int(self.labeled.size + self.unlabeled.size)

    def validate_for(self, graph: AttributedGraph) -> None:
        covered = np.union1d(self.labeled, self.unlabeled)
        if covered.size != graph.n or (covered.size and covered[-1] != graph.n - 1):
            raise ValidationError(
                error_code="INVALID_PARTITION",
                message="Partition must cover every vertex exactly once",
                details={"n": graph.n, "covered": int(covered.size)},
            )
