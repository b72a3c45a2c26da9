"""Directed-graph entry points.

The hierarchy ignores arc direction when choosing independent sets, contracts
each removed vertex into arcs from its in-neighbors to its out-neighbors, and
keeps two labels per vertex: out-labels bound ``d(v, a)`` and in-labels bound
``d(a, v)``. Queries intersect ``out_label(s)`` with ``in_label(t)`` and search
forward on the top graph from ``s`` and backward from ``t``.
"""

from __future__ import annotations

from .graph import Graph
from .hierarchy import DEFAULT_SIGMA
from .index import ISLabelIndex
from .query import distance


class DirectednessError(ValueError):
    """Raised when a directed operation meets an undirected graph or index, or vice versa."""


def build_directed(
    g: Graph,
    sigma: float = DEFAULT_SIGMA,
    max_k: int | None = None,
    path_capable: bool = True,
) -> ISLabelIndex:
    if not g.directed:
        raise DirectednessError("build_directed needs a directed graph")
    return ISLabelIndex.build(g, sigma=sigma, max_k=max_k, path_capable=path_capable)


def directed_distance(index: ISLabelIndex, s: int, t: int) -> float:
    if not index.directed:
        raise DirectednessError("index was built from an undirected graph")
    return distance(index, s, t)
