"""Graph representation, edge-list ingestion and the reference Dijkstra oracle."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

INF = math.inf
MAX_DISTANCE = 2**63 - 1


class GraphFormatError(ValueError):
    """Raised when an edge-list file cannot be parsed."""


@dataclass
class Graph:
    """Weighted simple graph over dense ids ``0..n-1``.

    ``adj[v]`` is a list of ``(neighbor, weight)`` sorted by neighbor id.
    In directed mode ``adj`` holds out-arcs and ``radj`` in-arcs; in
    undirected mode ``radj`` is the same object as ``adj``.
    """

    n: int
    adj: list[list[tuple[int, int]]]
    directed: bool = False
    ext_ids: list[int] = field(default_factory=list)
    radj: list[list[tuple[int, int]]] = field(default=None, repr=False)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if not self.ext_ids:
            self.ext_ids = list(range(self.n))
        if self.radj is None:
            if self.directed:
                radj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
                for u in range(self.n):
                    for v, w in self.adj[u]:
                        radj[v].append((u, w))
                for lst in radj:
                    lst.sort()
                self.radj = radj
            else:
                self.radj = self.adj
        self._int_of = {e: i for i, e in enumerate(self.ext_ids)}

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[int, int, int]],
        n: int | None = None,
        directed: bool = False,
        ext_ids: Sequence[int] | None = None,
    ) -> "Graph":
        """Build a normalized graph from internal-id edges.

        Self-loops are dropped and parallel edges collapse to the minimum weight.
        """
        best: dict[tuple[int, int], int] = {}
        top = -1
        for u, v, w in edges:
            if w < 1:
                raise ValueError(f"edge ({u},{v}) has non-positive weight {w}")
            top = max(top, u, v)
            if u == v:
                continue
            key = (u, v) if directed or u < v else (v, u)
            cur = best.get(key)
            if cur is None or w < cur:
                best[key] = w
        if n is None:
            n = top + 1
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        total = 0
        for (u, v), w in best.items():
            adj[u].append((v, w))
            if not directed:
                adj[v].append((u, w))
            total += w
        if total > MAX_DISTANCE:
            raise OverflowError("total edge weight exceeds the 64-bit distance accumulator")
        for lst in adj:
            lst.sort()
        return cls(n=n, adj=adj, directed=directed, ext_ids=list(ext_ids) if ext_ids else [])

    def degree(self, v: int) -> int:
        self.check_vertex(v)
        if not self.directed:
            return len(self.adj[v])
        return len({u for u, _ in self.adj[v]} | {u for u, _ in self.radj[v]})

    def check_vertex(self, v: int) -> None:
        if not isinstance(v, int) or not 0 <= v < self.n:
            raise IndexError(f"invalid vertex id {v!r} (graph has {self.n} vertices)")

    def internal(self, ext: int) -> int:
        try:
            return self._int_of[ext]
        except KeyError:
            raise KeyError(f"unknown vertex {ext}") from None

    def edges(self) -> list[tuple[int, int, int]]:
        """Edge triples; each undirected edge is listed once with ``u < v``."""
        out = []
        for u in range(self.n):
            for v, w in self.adj[u]:
                if self.directed or u < v:
                    out.append((u, v, w))
        return out

    @property
    def arc_count(self) -> int:
        return sum(len(a) for a in self.adj)

    @property
    def edge_count(self) -> int:
        m = self.arc_count
        return m if self.directed else m // 2

    def to_edge_list(self) -> str:
        """Serialize with external ids. Isolated vertices become self-loop lines."""
        lines = []
        touched = [False] * self.n
        for u, v, w in self.edges():
            touched[u] = touched[v] = True
            lines.append(f"{self.ext_ids[u]} {self.ext_ids[v]} {w}")
        for v in range(self.n):
            if not touched[v] and not self.radj[v]:
                lines.append(f"{self.ext_ids[v]} {self.ext_ids[v]} 1")
        return "\n".join(lines) + ("\n" if lines else "")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.directed == other.directed
            and self.ext_ids == other.ext_ids
            and self.adj == other.adj
        )


def parse_edge_list(text: str, directed: bool = False) -> Graph:
    """Parse ``u v [w]`` lines. External ids are remapped to dense ids in sorted order."""
    raw: list[tuple[int, int, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise GraphFormatError(f"line {lineno}: expected 'u v [w]', got {line!r}")
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer field in {line!r}") from None
        u, v = nums[0], nums[1]
        w = nums[2] if len(nums) == 3 else 1
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {lineno}: negative vertex id")
        if w <= 0:
            raise GraphFormatError(f"line {lineno}: weight must be a positive integer, got {w}")
        raw.append((u, v, w))
    ext = sorted({x for u, v, _ in raw for x in (u, v)})
    idx = {e: i for i, e in enumerate(ext)}
    return Graph.from_edges(
        ((idx[u], idx[v], w) for u, v, w in raw), n=len(ext), directed=directed, ext_ids=ext
    )


def load_edge_list(path: str | Path, directed: bool = False) -> Graph:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GraphFormatError(f"cannot read {path}: {exc}") from exc
    return parse_edge_list(text, directed=directed)


def degree(g: Graph, v: int) -> int:
    return g.degree(v)


def dijkstra_oracle(g: Graph, s: int, t: int | None = None, reverse: bool = False):
    """Textbook Dijkstra from ``s``.

    Returns ``dist(s, t)`` when ``t`` is given, otherwise the full distance
    list with ``INF`` for unreachable vertices. ``reverse`` runs on the
    arc-reversed graph (distances *to* ``s``).
    """
    g.check_vertex(s)
    if t is not None:
        g.check_vertex(t)
    adj = g.radj if reverse else g.adj
    dist: list[float] = [INF] * g.n
    dist[s] = 0
    heap = [(0, s)]
    done = [False] * g.n
    while heap:
        d, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        if v == t:
            return d
        for u, w in adj[v]:
            nd = d + w
            if nd < dist[u]:
                dist[u] = nd
                heapq.heappush(heap, (nd, u))
    if t is not None:
        return dist[t]
    return dist


def bidirectional_dijkstra(g: Graph, s: int, t: int) -> float:
    """Plain bidirectional Dijkstra over the whole graph (the non-indexed baseline)."""
    if s == t:
        return 0
    df = {s: 0}
    dr = {t: 0}
    sf: set[int] = set()
    sr: set[int] = set()
    fq = [(0, s)]
    rq = [(0, t)]
    mu = INF
    while fq and rq:
        if fq[0][0] + rq[0][0] >= mu:
            break
        if fq[0][0] <= rq[0][0]:
            d, v = heapq.heappop(fq)
            if v in sf:
                continue
            sf.add(v)
            adj, dist, other, q = g.adj, df, dr, fq
        else:
            d, v = heapq.heappop(rq)
            if v in sr:
                continue
            sr.add(v)
            adj, dist, other, q = g.radj, dr, df, rq
        for u, w in adj[v]:
            nd = d + w
            if nd < dist.get(u, INF):
                dist[u] = nd
                heapq.heappush(q, (nd, u))
            o = other.get(u)
            if o is not None and nd + o < mu:
                mu = nd + o
    return mu


def oracle_matrix(g: Graph, sources: Sequence[int]):
    """Distances from each source to every vertex, as a float array (``inf`` if unreachable).

    Batch oracle backed by scipy's compiled Dijkstra; used where the pure-Python
    oracle would dominate test runtime.
    """
    import numpy as np
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import dijkstra

    rows, cols, vals = [], [], []
    for u in range(g.n):
        for v, w in g.adj[u]:
            rows.append(u)
            cols.append(v)
            vals.append(w)
    mat = csr_matrix((np.array(vals, dtype=np.float64), (rows, cols)), shape=(g.n, g.n))
    return dijkstra(mat, directed=True, indices=list(sources))
