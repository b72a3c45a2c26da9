"""k-level vertex hierarchy: greedy independent sets plus contraction with augmenting edges.

Working graphs are stored as ``{v: {u: (weight, midpoint)}}``. ``midpoint`` is
``None`` for original edges and the contracted vertex for augmenting edges.
In undirected mode the in-adjacency is the same mapping as the out-adjacency.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .graph import Graph

log = logging.getLogger(__name__)

Adjacency = dict[int, tuple[int, Optional[int]]]

DEFAULT_SIGMA = 0.95


@dataclass
class WorkGraph:
    """A residual graph ``G_i`` during construction."""

    out: dict[int, Adjacency]
    inn: dict[int, Adjacency]
    directed: bool = False

    @classmethod
    def from_graph(cls, g: Graph) -> "WorkGraph":
        out = {v: {u: (w, None) for u, w in g.adj[v]} for v in range(g.n)}
        if not g.directed:
            return cls(out=out, inn=out, directed=False)
        inn = {v: {u: (w, None) for u, w in g.radj[v]} for v in range(g.n)}
        return cls(out=out, inn=inn, directed=True)

    @property
    def vertex_count(self) -> int:
        return len(self.out)

    @property
    def arc_count(self) -> int:
        return sum(len(a) for a in self.out.values())

    @property
    def size(self) -> int:
        """``|V| + |E|`` with edges counted as arc records."""
        return self.vertex_count + self.arc_count

    def neighbors(self, v: int) -> set[int]:
        if not self.directed:
            return set(self.out[v])
        return set(self.out[v]) | set(self.inn[v])

    def degree(self, v: int) -> int:
        if not self.directed:
            return len(self.out[v])
        return len(self.neighbors(v))


@dataclass
class LevelSet:
    """Independent set ``L_i`` with each member's adjacency in ``G_i`` (``ADJ(L_i)``)."""

    level: int
    members: list[int]
    out_snapshot: dict[int, Adjacency]
    in_snapshot: dict[int, Adjacency]


@dataclass
class VertexHierarchy:
    k: int
    levels: list[LevelSet]
    level_of: list[int]
    top_out: dict[int, Adjacency]
    top_in: dict[int, Adjacency]
    directed: bool = False
    sizes: list[tuple[int, int]] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.level_of)

    @property
    def top_vertices(self) -> list[int]:
        return sorted(self.top_out)

    @property
    def top_arc_count(self) -> int:
        return sum(len(a) for a in self.top_out.values())

    @property
    def top_edge_count(self) -> int:
        m = self.top_arc_count
        return m if self.directed else m // 2

    def out_snapshot(self, v: int) -> Adjacency:
        """``adj_{G_l(v)}(v)`` for a non-top vertex, out-arcs in directed mode."""
        return self.levels[self.level_of[v] - 1].out_snapshot[v]

    def in_snapshot(self, v: int) -> Adjacency:
        return self.levels[self.level_of[v] - 1].in_snapshot[v]

    def is_top(self, v: int) -> bool:
        return self.level_of[v] == self.k

    def stats(self) -> dict[str, object]:
        return {
            "k": self.k,
            "top_vertices": len(self.top_out),
            "top_edges": self.top_edge_count,
            "level_sizes": [len(ls.members) for ls in self.levels],
        }


def select_independent_set(g: WorkGraph, level: int = 1) -> LevelSet:
    """Greedy minimum-degree maximal independent set.

    Vertices are visited in ascending ``(degree, id)`` order and admitted unless
    an admitted vertex is adjacent to them.
    """
    if g.vertex_count == 0:
        raise ValueError("cannot select an independent set of an empty graph")
    order = sorted(g.out, key=lambda v: (g.degree(v), v))
    excluded: set[int] = set()
    members = []
    for v in order:
        if v in excluded:
            continue
        members.append(v)
        excluded.update(g.out[v])
        if g.directed:
            excluded.update(g.inn[v])
    members.sort()
    out_snap = {v: g.out[v] for v in members}
    in_snap = {v: g.inn[v] for v in members} if g.directed else out_snap
    return LevelSet(level=level, members=members, out_snapshot=out_snap, in_snapshot=in_snap)


def contract_level(g: WorkGraph, removed: LevelSet) -> WorkGraph:
    """Remove ``removed.members`` from ``g`` in place and add augmenting edges.

    For each removed ``v`` (ascending id) and each 2-path ``u -> v -> w`` an
    edge ``u -> w`` of weight ``w(u,v) + w(v,w)`` with midpoint ``v`` is merged
    by minimum weight; on equal weight the existing edge is kept.
    """
    members = removed.members
    mset = set(members)
    for v in members:
        for u in g.out[v]:
            if u in mset:
                raise ValueError(f"level {removed.level} is not independent: edge ({v},{u})")
        if g.directed:
            for u in g.inn[v]:
                if u in mset:
                    raise ValueError(f"level {removed.level} is not independent: edge ({u},{v})")

    for v in members:
        snap_out = g.out.pop(v)
        for u in snap_out:
            del g.inn[u][v]
        if g.directed:
            snap_in = g.inn.pop(v)
            for u in snap_in:
                del g.out[u][v]

    out, inn = g.out, g.inn
    for v in members:
        if g.directed:
            ins = sorted(removed.in_snapshot[v].items())
            outs = sorted(removed.out_snapshot[v].items())
            for a, (wa, _) in ins:
                row = out[a]
                for b, (wb, _) in outs:
                    if a == b:
                        continue
                    cand = wa + wb
                    cur = row.get(b)
                    if cur is None or cand < cur[0]:
                        row[b] = (cand, v)
                        inn[b][a] = (cand, v)
        else:
            nbrs = sorted(removed.out_snapshot[v].items())
            for i, (a, (wa, _)) in enumerate(nbrs):
                row = out[a]
                for b, (wb, _) in nbrs[i + 1 :]:
                    cand = wa + wb
                    cur = row.get(b)
                    if cur is None or cand < cur[0]:
                        row[b] = (cand, v)
                        out[b][a] = (cand, v)
    return g


def build_hierarchy(
    g: Graph, sigma: float = DEFAULT_SIGMA, max_k: int | None = None
) -> VertexHierarchy:
    """Build the k-level hierarchy.

    Contraction stops at the first level ``i >= 2`` whose residual graph is
    larger than ``sigma`` times the previous one, at ``max_k``, or when the
    residual becomes empty; in the last case the last non-empty residual is
    kept as the top graph.
    """
    if not 0 < sigma <= 1:
        raise ValueError(f"sigma must lie in (0, 1], got {sigma}")
    if max_k is not None and max_k < 1:
        raise ValueError("max_k must be at least 1")
    return _contract(g, sigma, max_k)


def full_hierarchy(g: Graph) -> VertexHierarchy:
    """Contract until the remaining vertices are independent (no size rule, no depth cap).

    The top graph then has no edges, so every connected pair shares a label ancestor.
    """
    return _contract(g, None, None)


def _contract(g: Graph, sigma: float | None, max_k: int | None) -> VertexHierarchy:
    work = WorkGraph.from_graph(g)
    levels: list[LevelSet] = []
    sizes = [(work.vertex_count, work.arc_count)]
    i = 1
    while work.vertex_count and (max_k is None or i < max_k):
        prev_size = work.size
        ls = select_independent_set(work, level=i)
        if len(ls.members) == work.vertex_count:
            # next residual would be empty: keep this one as the top graph
            break
        contract_level(work, ls)
        levels.append(ls)
        i += 1
        sizes.append((work.vertex_count, work.arc_count))
        log.debug("level %d: |L|=%d residual |V|=%d |E|=%d", i - 1, len(ls.members), *sizes[-1])
        if sigma is not None and work.size > sigma * prev_size:
            break
    return finish_hierarchy(g.n, levels, work, g.directed, sizes)


def finish_hierarchy(
    n: int,
    levels: list[LevelSet],
    work: WorkGraph,
    directed: bool,
    sizes: list[tuple[int, int]] | None = None,
) -> VertexHierarchy:
    k = len(levels) + 1
    level_of = [k] * n
    for ls in levels:
        for v in ls.members:
            level_of[v] = ls.level
        # rows in id order, so equal hierarchies also search and break ties alike
        ls.out_snapshot = _sorted_rows(ls.out_snapshot)
        ls.in_snapshot = _sorted_rows(ls.in_snapshot) if directed else ls.out_snapshot
    top_out = _sorted_rows(work.out)
    return VertexHierarchy(
        k=k,
        levels=levels,
        level_of=level_of,
        top_out=top_out,
        top_in=_sorted_rows(work.inn) if directed else top_out,
        directed=directed,
        sizes=sizes or [],
    )


def _sorted_rows(rows: dict[int, Adjacency]) -> dict[int, Adjacency]:
    return {v: dict(sorted(rows[v].items())) for v in sorted(rows)}


def hierarchy_from_levels(g: Graph, level_sets: Sequence[Sequence[int]]) -> VertexHierarchy:
    """Build a hierarchy from prescribed independent sets ``L_1..L_{k-1}``.

    Vertices not listed form the top graph. Raises ``ValueError`` when a set
    is not independent in its residual graph.
    """
    work = WorkGraph.from_graph(g)
    levels = []
    sizes = [(work.vertex_count, work.arc_count)]
    for i, members in enumerate(level_sets, start=1):
        members = sorted(members)
        missing = [v for v in members if v not in work.out]
        if missing:
            raise ValueError(f"level {i}: vertices {missing} are not in the residual graph")
        out_snap = {v: work.out[v] for v in members}
        in_snap = {v: work.inn[v] for v in members} if g.directed else out_snap
        ls = LevelSet(level=i, members=members, out_snapshot=out_snap, in_snapshot=in_snap)
        contract_level(work, ls)
        levels.append(ls)
        sizes.append((work.vertex_count, work.arc_count))
    return finish_hierarchy(g.n, levels, work, g.directed, sizes)
