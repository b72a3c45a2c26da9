"""Shared fixture data and oracle checks for the test suite."""

from __future__ import annotations

import random

from islabel.graph import Graph, oracle_matrix
from islabel.query import path_length

# Running example: vertices a..i, unit weights except e-f.
NAMES = "abcdefghi"
V = {c: i for i, c in enumerate(NAMES)}
EXAMPLE_EDGES = [
    ("a", "b", 1), ("a", "e", 1), ("b", "c", 1), ("b", "e", 1), ("d", "e", 1),
    ("d", "g", 1), ("e", "f", 3), ("e", "i", 1), ("f", "h", 1), ("g", "h", 1),
]  # fmt: skip
EXAMPLE_LEVELS = ["cfi", "bdh", "e", "a"]

# Label table of the four-level example, as printed.
TABLE_LABELS = {
    "c": {"a": 2, "b": 1, "c": 0, "e": 2, "g": 4},
    "f": {"a": 4, "e": 3, "f": 0, "g": 5, "h": 1},
    "i": {"a": 2, "e": 1, "g": 3, "i": 0},
    "b": {"a": 1, "b": 0, "e": 1, "g": 3},
    "d": {"a": 2, "d": 0, "e": 1, "g": 1},
    "h": {"a": 5, "e": 4, "g": 1, "h": 0},
    "e": {"a": 1, "e": 0, "g": 2},
    "a": {"a": 0, "g": 3},
    "g": {"g": 0},
}

# Labels of L_1 when only one level is removed.
K2_LABELS = {
    "c": {"b": 1, "c": 0},
    "f": {"e": 3, "f": 0, "h": 1},
    "i": {"e": 1, "i": 0},
}


def example_graph() -> Graph:
    return Graph.from_edges([(V[u], V[v], w) for u, v, w in EXAMPLE_EDGES], n=len(NAMES))


def example_levels(count: int | None = None) -> list[list[int]]:
    levels = EXAMPLE_LEVELS if count is None else EXAMPLE_LEVELS[:count]
    return [[V[c] for c in level] for level in levels]


def by_name(pairs: dict[int, int]) -> dict[str, int]:
    return {NAMES[a]: d for a, d in pairs.items()}


def named_pairs(table: dict[str, int]) -> list[tuple[int, int]]:
    return [(V[a], d) for a, d in table.items()]


def random_graph(
    seed: int, n: int, m: int | None = None, max_weight: int = 5, directed: bool = False
) -> Graph:
    """Random edge soup; also exercises self-loop and parallel-edge normalization."""
    rng = random.Random(seed)
    if m is None:
        m = rng.randint(0, 3 * n)
    edges = [(rng.randrange(n), rng.randrange(n), rng.randint(1, max_weight)) for _ in range(m if n else 0)]
    return Graph.from_edges(edges, n=n, directed=directed)


def all_pairs_mismatches(index, g: Graph) -> list[tuple[int, int, float, float]]:
    """Pairs where the index disagrees with the oracle; ids are shared by both."""
    if g.n == 0:
        return []
    truth = oracle_matrix(g, range(g.n))
    bad = []
    for s in range(g.n):
        for t in range(g.n):
            d = index.distance(s, t)
            if d != truth[s, t]:
                bad.append((s, t, d, truth[s, t]))
    return bad


def path_ok(g: Graph, path: list[int], s: int, t: int, length) -> bool:
    return bool(path) and path[0] == s and path[-1] == t and path_length(g.adj, path) == length


def external_mismatches(
    index, edges: list[tuple[int, int, int]], ids, pairs=None, paths: bool = True
) -> list[tuple[int, int]]:
    """Pairs (external ids) where ``index`` disagrees with an oracle over ``edges``, or returns a bad path."""
    ext = sorted(ids)
    pos = {e: i for i, e in enumerate(ext)}
    g = Graph.from_edges([(pos[a], pos[b], w) for a, b, w in edges], n=len(ext))
    if pairs is None:
        pairs = [(a, b) for a in ext for b in ext]
    sources = sorted({pos[a] for a, _ in pairs})
    row = {s: i for i, s in enumerate(sources)}
    truth = oracle_matrix(g, sources) if sources else None
    bad = []
    for a, b in pairs:
        s, t = index.internal(a), index.internal(b)
        expect = truth[row[pos[a]], pos[b]]
        if index.distance(s, t) != expect:
            bad.append((a, b))
        elif paths and expect != float("inf") and index.path_capable:
            walk = [pos[index.ext_ids[v]] for v in index.shortest_path(s, t).vertices]
            if not path_ok(g, walk, pos[a], pos[b], expect):
                bad.append((a, b))
    return bad
