"""Shortest-path-graph queries with landmark labelling, sketches and guided search."""
from ._backend import BACKEND
from .baselines import (bibfs_spg, check_2hop_path_cover, oracle_spg, parentppl_build, parentppl_query,
                        ppl_build, ppl_query, pruned_bfs)
from .graph import INF, Graph, bfs_distances, degree_descending, export_edge_list, load_edge_list, neighbors
from .index_io import IndexDecodeError, deserialize, serialize
from .labelling import (LabellingScheme, LandmarkSet, build_delta, build_labelling, landmark_bfs, meta_apsp,
                        select_landmarks)
from .search import QbsEngine, SpgResult, query_spg
from .sketch import Sketch, compute_sketch

__all__ = [
    "BACKEND", "INF", "Graph", "LabellingScheme", "LandmarkSet", "QbsEngine", "Sketch", "SpgResult",
    "IndexDecodeError", "bfs_distances", "bibfs_spg", "build_delta", "build_labelling", "check_2hop_path_cover",
    "compute_sketch", "degree_descending", "deserialize", "export_edge_list", "landmark_bfs", "load_edge_list",
    "meta_apsp", "neighbors", "oracle_spg", "parentppl_build", "parentppl_query", "ppl_build", "ppl_query",
    "pruned_bfs", "query_spg", "select_landmarks", "serialize",
]
