from cgnn.data.generators import grid_coordinates, grid_graph, watts_strogatz
from cgnn.data.ising import IsingSampler, ising_sampler, sample_ising, sample_ising_series
from cgnn.data.metrics import binary_accuracy, is_binary, r_squared, score
from cgnn.data.preprocessing import normalize_features, select_features, split_sizes, split_vertices

__all__ = [
    "grid_coordinates",
    "grid_graph",
    "watts_strogatz",
    "IsingSampler",
    "ising_sampler",
    "sample_ising",
    "sample_ising_series",
    "binary_accuracy",
    "is_binary",
    "r_squared",
    "score",
    "normalize_features",
    "select_features",
    "split_sizes",
    "split_vertices",
]
