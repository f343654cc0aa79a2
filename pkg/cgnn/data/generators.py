"""Synthetic graph generators."""

import numpy as np

from cgnn.exceptions import ValidationError
from cgnn.models.graph import AttributedGraph


def watts_strogatz(n: int, mean_degree: int, rewire_prob: float, seed: int = 0) -> AttributedGraph:
    """Small-world graph with exactly ``n * mean_degree / 2`` edges.

    Starts from a ring lattice joining each vertex to ``mean_degree / 2``
    clockwise neighbors; each lattice edge ``(i, i + j)`` is rewired with
    probability ``rewire_prob`` by moving its far endpoint to a uniformly
    chosen vertex that is neither ``i`` nor already adjacent to ``i``. An edge
    with no admissible target is kept.
    """
    if mean_degree % 2 != 0 or mean_degree < 0:
        raise ValidationError(
            error_code="INVALID_MEAN_DEGREE",
            message="Mean degree must be a nonnegative even number",
            details={"mean_degree": mean_degree},
        )
    if mean_degree >= n:
        raise ValidationError(
            error_code="INVALID_MEAN_DEGREE",
            message="Mean degree must be smaller than the vertex count",
            details={"mean_degree": mean_degree, "n": n},
        )
    if not 0.0 <= rewire_prob <= 1.0:
        raise ValidationError(
            error_code="INVALID_REWIRE_PROB",
            message="Rewiring probability must lie in [0, 1]",
            details={"rewire_prob": rewire_prob},
        )

    rng = np.random.default_rng(seed)
    half = mean_degree // 2
    adjacency: list[set[int]] = [set() for _ in range(n)]
    for i in range(n):
        for j in range(1, half + 1):
            k = (i + j) % n
            adjacency[i].add(k)
            adjacency[k].add(i)

    for j in range(1, half + 1):
        for i in range(n):
            k = (i + j) % n
            if k not in adjacency[i] or rng.random() >= rewire_prob:
                continue
            if len(adjacency[i]) >= n - 1:
                continue
            target = int(rng.integers(n))
            while target == i or target in adjacency[i]:
                target = int(rng.integers(n))
            adjacency[i].discard(k)
            adjacency[k].discard(i)
            adjacency[i].add(target)
            adjacency[target].add(i)

    edges = [(i, k) for i in range(n) for k in adjacency[i] if i < k]
    return AttributedGraph(n, edges)


def grid_coordinates(rows: int, cols: int) -> np.ndarray:
    """Row/column coordinates rescaled to [-1, 1], vertex ``r * cols + c``."""
    row_axis = np.linspace(-1.0, 1.0, rows)
    col_axis = np.linspace(-1.0, 1.0, cols)
    rr, cc = np.meshgrid(row_axis, col_axis, indexing="ij")
    return np.column_stack([rr.reshape(-1), cc.reshape(-1)])


def grid_graph(rows: int, cols: int) -> AttributedGraph:
    """4-neighbor lattice with rescaled coordinates as features."""
    if rows < 1 or cols < 1:
        raise ValidationError(
            error_code="INVALID_GRID",
            message="Grid dimensions must be positive",
            details={"rows": rows, "cols": cols},
        )
    ids = np.arange(rows * cols).reshape(rows, cols)
    horizontal = np.column_stack([ids[:, :-1].reshape(-1), ids[:, 1:].reshape(-1)])
    vertical = np.column_stack([ids[:-1, :].reshape(-1), ids[1:, :].reshape(-1)])
    edges = np.vstack([horizontal, vertical]).astype(np.int64)
    return AttributedGraph(rows * cols, edges, features=grid_coordinates(rows, cols))
