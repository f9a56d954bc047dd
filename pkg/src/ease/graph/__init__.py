from .core import Graph
from .io import EdgeListError, load_edge_list, write_edge_list
from .properties import FeatureLevel, GraphProperties, compute_properties, pearson_skew, triangles_per_vertex
from .rmat import RMAT_COMBOS, RmatConfig, generate_rmat, rmat_training_suite

__all__ = [
    "Graph",
    "EdgeListError",
    "load_edge_list",
    "write_edge_list",
    "FeatureLevel",
    "GraphProperties",
    "compute_properties",
    "pearson_skew",
    "triangles_per_vertex",
    "RMAT_COMBOS",
    "RmatConfig",
    "generate_rmat",
    "rmat_training_suite",
]
