"""Centrality-based training-node selection for graph convolutional networks."""
from ._backend import NAME as backend
from .centrality import (CentralityScores, Measure, betweenness_centrality, closeness_centrality,
                         compute, degree_centrality, pagerank_centrality, voterank)
from .graph import (Graph, build_graph, knn_graph, load_graph_dataset, normalized_adjacency,
                    normalized_laplacian, sbm_generate)
from .selection import SelectionPlan, random_select, select_all_at_once, smart_select

__all__ = [
    "backend", "CentralityScores", "Measure", "betweenness_centrality", "closeness_centrality",
    "compute", "degree_centrality", "pagerank_centrality", "voterank", "Graph", "build_graph",
    "knn_graph", "load_graph_dataset", "normalized_adjacency", "normalized_laplacian",
    "sbm_generate", "SelectionPlan", "random_select", "select_all_at_once", "smart_select",
]
__version__ = "0.1.0"
