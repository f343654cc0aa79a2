"""Abstract interface and shared layer stack for base regressors."""

import hashlib
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from cgnn.exceptions import StaleCacheError, ValidationError
from cgnn.models.graph import AttributedGraph
from cgnn.schemas.training import RegressorSpec

Layout = tuple[tuple[str, tuple[int, ...]], ...]


@dataclass(frozen=True)
class ParameterSet:
    """Flat parameter vector plus an immutable ``(name, shape)`` layout."""

    values: np.ndarray
    layout: Layout

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        expected = sum(int(np.prod(shape)) for _, shape in self.layout)
        if values.size != expected:
            raise ValidationError(
                error_code="PARAMETER_LAYOUT_MISMATCH",
                message="Parameter vector does not match its layout",
                details={"values": int(values.size), "layout": expected},
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "layout", tuple((n, tuple(s)) for n, s in self.layout))

    @property
    def size(self) -> int:
        return int(self.values.size)

    def unpack(self, vector: Optional[np.ndarray] = None) -> dict[str, np.ndarray]:
        """Named views into ``vector`` (default: the stored values)."""
        vector = self.values if vector is None else vector
        out: dict[str, np.ndarray] = {}
        offset = 0
        for name, shape in self.layout:
            count = int(np.prod(shape))
            out[name] = vector[offset : offset + count].reshape(shape)
            offset += count
        return out

    def pack(self, arrays: dict[str, np.ndarray]) -> np.ndarray:
        """Flatten named arrays following the layout."""
        return np.concatenate(
            [np.asarray(arrays[name], dtype=np.float64).reshape(-1) for name, _ in self.layout]
        )

    def with_values(self, values: np.ndarray) -> "ParameterSet":
        return ParameterSet(values, self.layout)

    def fingerprint(self) -> str:
        return hashlib.sha1(self.values.tobytes()).hexdigest()


@dataclass
class ForwardCache:
    """Intermediates of one forward pass, tagged with the parameter fingerprint."""

    token: str
    vertices: np.ndarray
    row_count: int
    propagation: Optional[sp.csr_matrix]
    aggregated: list[np.ndarray]
    pre_activations: list[np.ndarray]
    representation: np.ndarray


def _relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


class BaseRegressor(ABC):
    """Feature-to-prediction map with an exact reverse-mode gradient.

    Every kind is a stack of hidden layers ``H' = relu(P H W + b)`` followed by
    a linear output ``yhat = H w + b``. Kinds differ only in the propagation
    matrix ``P``, applied in the first ``spec.layers`` hidden layers of graph
    kinds; feature-only kinds and the representation layer use ``P = I``.
    """

    kind: str = ""

    def __init__(self, spec: RegressorSpec, feature_dim: int):
        if feature_dim < 0:
            raise ValidationError(message="Feature dimension must be nonnegative")
        self.spec = spec
        self.feature_dim = int(feature_dim)
        self.widths = [self.feature_dim] + spec.hidden_widths()
        self.layout = self._build_layout()

    def _build_layout(self) -> Layout:
        layout = []
        for i, (fan_in, fan_out) in enumerate(zip(self.widths[:-1], self.widths[1:])):
            layout.append((f"hidden_{i}.weight", (fan_in, fan_out)))
            layout.append((f"hidden_{i}.bias", (fan_out,)))
        layout.append(("output.weight", (self.widths[-1], 1)))
        layout.append(("output.bias", (1,)))
        return tuple(layout)

    @property
    def hidden_layers(self) -> int:
        return len(self.widths) - 1

    @property
    def uses_graph(self) -> bool:
        return False

    @property
    def propagated_layers(self) -> int:
        return min(self.spec.layers, self.hidden_layers) if self.uses_graph else 0

    @abstractmethod
    def propagation(self, graph: AttributedGraph) -> Optional[sp.csr_matrix]:
        """Neighborhood averaging matrix for graph kinds, None otherwise."""
        pass

    def init_parameters(self, seed: Optional[int] = None) -> ParameterSet:
        """Glorot-uniform weights, zero biases."""
        rng = np.random.default_rng(self.spec.seed if seed is None else seed)
        arrays: dict[str, np.ndarray] = {}
        for name, shape in self.layout:
            if name.endswith(".bias"):
                arrays[name] = np.zeros(shape)
            else:
                fan_in, fan_out = shape
                limit = np.sqrt(6.0 / max(fan_in + fan_out, 1))
                arrays[name] = rng.uniform(-limit, limit, size=shape)
        values = np.concatenate([arrays[name].reshape(-1) for name, _ in self.layout])
        return ParameterSet(values, self.layout)

    def check_features(self, graph: AttributedGraph) -> None:
        if graph.feature_dim != self.feature_dim:
            raise ValidationError(
                error_code="FEATURE_DIM_MISMATCH",
                message="Graph features do not match the regressor input width",
                details={"expected": self.feature_dim, "actual": graph.feature_dim},
            )

    def forward(
        self,
        params: ParameterSet,
        graph: AttributedGraph,
        vertices: Optional[np.ndarray] = None,
    ) -> tuple[np.ndarray, ForwardCache]:
        """Predictions for ``vertices`` (all vertices when omitted) and the cache."""
        self.check_features(graph)
        if vertices is None:
            vertices = np.arange(graph.n, dtype=np.int64)
        vertices = np.asarray(vertices, dtype=np.int64)
        weights = params.unpack()

        propagation = self.propagation(graph) if self.uses_graph else None
        if propagation is None:
            h = graph.features[vertices]
            selector = np.arange(len(vertices))
        else:
            h = graph.features
            selector = vertices

        aggregated, pre_activations = [], []
        for i in range(self.hidden_layers):
            a = propagation @ h if i < self.propagated_layers else h
            z = a @ weights[f"hidden_{i}.weight"] + weights[f"hidden_{i}.bias"]
            aggregated.append(a)
            pre_activations.append(z)
            h = _relu(z)

        output = h @ weights["output.weight"][:, 0] + weights["output.bias"][0]
        cache = ForwardCache(
            token=params.fingerprint(),
            vertices=selector,
            row_count=h.shape[0],
            propagation=propagation,
            aggregated=aggregated,
            pre_activations=pre_activations,
            representation=h,
        )
        return output[selector], cache

    def backward(
        self,
        params: ParameterSet,
        cache: ForwardCache,
        dloss_dyhat: np.ndarray,
    ) -> np.ndarray:
        """Gradient of ``<dloss_dyhat, yhat>`` in the flat parameter layout.

        Raises:
            StaleCacheError: If the cache came from different parameters
        """
        token = params.fingerprint()
        if token != cache.token:
            raise StaleCacheError(expected=cache.token, actual=token)

        weights = params.unpack()
        grads: dict[str, np.ndarray] = {}

        g_out = np.zeros(cache.row_count)
        np.add.at(g_out, cache.vertices, np.asarray(dloss_dyhat, dtype=np.float64))

        grads["output.weight"] = (cache.representation.T @ g_out).reshape(-1, 1)
        grads["output.bias"] = np.array([g_out.sum()])
        g_h = np.outer(g_out, weights["output.weight"][:, 0])

        for i in reversed(range(self.hidden_layers)):
            g_z = g_h * (cache.pre_activations[i] > 0.0)
            grads[f"hidden_{i}.weight"] = cache.aggregated[i].T @ g_z
            grads[f"hidden_{i}.bias"] = g_z.sum(axis=0)
            if i > 0:
                g_a = g_z @ weights[f"hidden_{i}.weight"].T
                g_h = cache.propagation.T @ g_a if i < self.propagated_layers else g_a

        return params.pack(grads)

    def predict(self, params: ParameterSet, graph: AttributedGraph, vertices: Optional[np.ndarray] = None) -> np.ndarray:
        return self.forward(params, graph, vertices)[0]
