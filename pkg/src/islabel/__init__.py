"""Shortest-path distance index built from a hierarchy of independent sets."""

import logging

from .directed import build_directed, directed_distance
from .dynamic import RebuildPolicy, delete_vertex, insert_vertex, should_rebuild
from .graph import INF, Graph, GraphFormatError, dijkstra_oracle, load_edge_list, parse_edge_list
from .hierarchy import VertexHierarchy, build_hierarchy, full_hierarchy
from .index import ISLabelIndex, UpdateLog
from .labeling import Label, build_labels, reference_label
from .query import PathResult, QueryClass, classify, distance, intersect_labels, shortest_path
from .store import IndexReader, load_index, load_label, save_index, serialize, deserialize

logging.getLogger(__name__).addHandler(logging.NullHandler())

__all__ = [
    "INF",
    "Graph",
    "GraphFormatError",
    "ISLabelIndex",
    "IndexReader",
    "Label",
    "PathResult",
    "QueryClass",
    "RebuildPolicy",
    "UpdateLog",
    "VertexHierarchy",
    "build_directed",
    "build_hierarchy",
    "full_hierarchy",
    "build_labels",
    "classify",
    "delete_vertex",
    "deserialize",
    "dijkstra_oracle",
    "directed_distance",
    "distance",
    "insert_vertex",
    "intersect_labels",
    "load_edge_list",
    "load_index",
    "load_label",
    "parse_edge_list",
    "reference_label",
    "save_index",
    "serialize",
    "shortest_path",
    "should_rebuild",
]
