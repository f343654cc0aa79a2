"""Feature standardization, feature selection and vertex splits."""

import numpy as np

from cgnn.exceptions import ValidationError
from cgnn.models.graph import AttributedGraph
from cgnn.schemas.data import SplitConfig


def normalize_features(graph: AttributedGraph) -> AttributedGraph:
    """Zero mean and unit population std per column; constant columns become zero."""
    if graph.n < 2:
        raise ValidationError(
            error_code="TOO_FEW_VERTICES",
            message="Standardization needs at least two vertices",
            details={"n": graph.n},
        )
    features = graph.features
    mean = features.mean(axis=0)
    std = features.std(axis=0)
    centered = features - mean
    constant = std == 0.0
    safe_std = np.where(constant, 1.0, std)
    standardized = centered / safe_std
    standardized[:, constant] = 0.0
    return graph.with_features(standardized)


def select_features(graph: AttributedGraph, count: int) -> AttributedGraph:
    """Keep the first ``count`` feature columns."""
    if count < 0 or count > graph.feature_dim:
        raise ValidationError(
            error_code="INVALID_FEATURE_COUNT",
            message="Feature count must lie in [0, d]",
            details={"count": count, "d": graph.feature_dim},
        )
    return graph.with_features(graph.features[:, :count])


def split_sizes(n: int, cfg: SplitConfig) -> tuple[int, int, int]:
    """Largest-remainder rounding; ties go to train, then test, then val."""
    fractions = {"train": cfg.train, "val": cfg.val, "test": cfg.test}
    exact = {name: n * frac for name, frac in fractions.items()}
    sizes = {name: int(np.floor(value)) for name, value in exact.items()}
    leftover = n - sum(sizes.values())
    tie_order = {"train": 0, "test": 1, "val": 2}
    ranked = sorted(exact, key=lambda name: (-(exact[name] - sizes[name]), tie_order[name]))
    for name in ranked[:leftover]:
        sizes[name] += 1
    return sizes["train"], sizes["val"], sizes["test"]


def split_vertices(n: int, cfg: SplitConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Seeded random disjoint ``(train, val, test)`` cover, each sorted."""
    if n < 3:
        raise ValidationError(
            error_code="TOO_FEW_VERTICES",
            message="Splitting needs at least three vertices",
            details={"n": n},
        )
    n_train, n_val, _ = split_sizes(n, cfg)
    order = np.random.default_rng(cfg.seed).permutation(n).astype(np.int64)
    train = np.sort(order[:n_train])
    val = np.sort(order[n_train : n_train + n_val])
    test = np.sort(order[n_train + n_val :])
    return train, val, test
