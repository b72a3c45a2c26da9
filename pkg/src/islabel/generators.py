"""Seeded synthetic graphs for benchmarks and acceptance runs."""

from __future__ import annotations

import random

from .graph import Graph


def uniform_random(
    n: int, avg_degree: float, seed: int = 0, max_weight: int = 1, directed: bool = False
) -> Graph:
    """G(n, m) graph with ``m = n * avg_degree / 2`` distinct edges (``n * avg_degree`` arcs if directed)."""
    rng = random.Random(seed)
    target = int(round(n * avg_degree if directed else n * avg_degree / 2))
    if n < 2:
        target = 0
    cap = n * (n - 1) if directed else n * (n - 1) // 2
    target = min(target, cap)
    seen: set[tuple[int, int]] = set()
    edges = []
    while len(edges) < target:
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v:
            continue
        key = (u, v) if directed or u < v else (v, u)
        if key in seen:
            continue
        seen.add(key)
        edges.append((u, v, rng.randint(1, max_weight)))
    return Graph.from_edges(edges, n=n, directed=directed)


def preferential_attachment(n: int, avg_degree: float, seed: int = 0, max_weight: int = 1) -> Graph:
    """Barabasi-Albert style graph: each new vertex links to ``avg_degree / 2`` existing ones."""
    rng = random.Random(seed)
    m = max(1, int(round(avg_degree / 2)))
    edges = []
    targets: list[int] = []
    start = min(n, m + 1)
    for u in range(start):
        for v in range(u):
            edges.append((u, v, rng.randint(1, max_weight)))
            targets += (u, v)
    for u in range(start, n):
        chosen: set[int] = set()
        while len(chosen) < m:
            chosen.add(rng.choice(targets))
        for v in sorted(chosen):
            edges.append((u, v, rng.randint(1, max_weight)))
            targets += (u, v)
    return Graph.from_edges(edges, n=n)


def random_pairs(n: int, count: int, seed: int = 0) -> list[tuple[int, int]]:
    rng = random.Random(seed)
    if n == 0:
        return []
    return [(rng.randrange(n), rng.randrange(n)) for _ in range(count)]
