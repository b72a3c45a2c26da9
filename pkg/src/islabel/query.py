"""Distance and shortest-path queries over an :class:`ISLabelIndex`."""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Optional

from .graph import INF
from .labeling import DIRECT, SELF, THROUGH, Label

if TYPE_CHECKING:
    from .index import ISLabelIndex


class QueryClass(enum.Enum):
    TYPE1 = 1
    TYPE2 = 2


@dataclass
class PathResult:
    vertices: list[int]
    length: float


def intersect_labels(ls: Label, lt: Label) -> tuple[float, Optional[int]]:
    """Minimum of ``d(s,w) + d(w,t)`` over common ancestors, by a linear merge.

    Returns ``(INF, None)`` when the labels share no ancestor. Ties go to the
    smaller witness id (the merge visits ids in ascending order).
    """
    a, da = ls.ancestors, ls.bounds
    b, db = lt.ancestors, lt.bounds
    i = j = 0
    na, nb = len(a), len(b)
    best: float = INF
    witness = None
    while i < na and j < nb:
        x, y = a[i], b[j]
        if x == y:
            c = da[i] + db[j]
            if c < best:
                best, witness = c, x
            i += 1
            j += 1
        elif x < y:
            i += 1
        else:
            j += 1
    return best, witness


def classify_labels(ls: Label, lt: Label, s_top: bool, t_top: bool, top: dict) -> QueryClass:
    """Type 1 when neither endpoint is in the top graph and one label misses it entirely."""
    if s_top or t_top:
        return QueryClass.TYPE2
    if not any(a in top for a in ls.ancestors):
        return QueryClass.TYPE1
    if not any(a in top for a in lt.ancestors):
        return QueryClass.TYPE1
    return QueryClass.TYPE2


def classify(index: "ISLabelIndex", s: int, t: int) -> QueryClass:
    index.check_vertex(s)
    index.check_vertex(t)
    return classify_labels(index.out_label(s), index.in_label(t), index.is_top(s), index.is_top(t), index.top_out)


@dataclass
class SearchState:
    """State of one label-seeded bidirectional search over the top graph."""

    fq: list = field(default_factory=list)
    rq: list = field(default_factory=list)
    df: dict = field(default_factory=dict)
    dr: dict = field(default_factory=dict)
    settled_f: dict = field(default_factory=dict)
    settled_r: dict = field(default_factory=dict)
    # parent pointers: vertex -> (neighbor, midpoint); None marks a label seed
    pf: dict = field(default_factory=dict)
    pr: dict = field(default_factory=dict)
    mu: float = INF
    meet: Optional[int] = None
    witness: Optional[int] = None


def bi_dijkstra(
    ls: Label,
    lt: Label,
    top_out: dict,
    top_in: dict,
    prune: bool = True,
) -> SearchState:
    """Label-seeded bidirectional Dijkstra on the top graph.

    The forward queue is seeded with the top-graph ancestors of ``ls`` and the
    reverse queue with those of ``lt``; ``mu`` starts at the label-intersection
    value. Whenever a tentative distance is set on one side and the vertex
    already has a tentative distance on the other side, ``mu`` is lowered to
    their sum. Restricting this to vertices settled on the other side misses
    meets where neither side has settled the vertex when it is first reached.
    The search stops when either queue empties or, with ``prune``, when the
    two queue minima sum to at least ``mu``.
    """
    st = SearchState()
    st.mu, st.witness = intersect_labels(ls, lt)
    for a, d in zip(ls.ancestors, ls.bounds):
        if a in top_out:
            st.df[a] = d
            st.pf[a] = None
            st.fq.append((d, a))
    for a, d in zip(lt.ancestors, lt.bounds):
        if a in top_out:
            st.dr[a] = d
            st.pr[a] = None
            st.rq.append((d, a))
    heapq.heapify(st.fq)
    heapq.heapify(st.rq)

    fq, rq = st.fq, st.rq
    sf, sr = st.settled_f, st.settled_r
    df, dr = st.df, st.dr
    pf, pr = st.pf, st.pr
    mu, meet = st.mu, None
    pop, push = heapq.heappop, heapq.heappush
    while True:
        while fq and fq[0][1] in sf:
            pop(fq)
        while rq and rq[0][1] in sr:
            pop(rq)
        if not fq or not rq:
            break
        if prune and fq[0][0] + rq[0][0] >= mu:
            break
        if fq[0][0] <= rq[0][0]:
            d, v = pop(fq)
            sf[v] = d
            adj, dist, other, parent, q = top_out[v], df, dr, pf, fq
        else:
            d, v = pop(rq)
            sr[v] = d
            adj, dist, other, parent, q = top_in[v], dr, df, pr, rq
        for u, (w, mid) in adj.items():
            nd = d + w
            cur = dist.get(u)
            if cur is None or nd < cur:
                dist[u] = nd
                parent[u] = (v, mid)
                push(q, (nd, u))
                o = other.get(u)
                if o is not None and nd + o < mu:
                    mu = nd + o
                    meet = u
    st.mu, st.meet = mu, meet
    return st


def distance_from_labels(
    ls: Label,
    lt: Label,
    s_top: bool,
    t_top: bool,
    top_out: dict,
    top_in: dict,
    prune: bool = True,
) -> float:
    """Answer a query from the two endpoint labels and the top graph alone."""
    if ls.owner == lt.owner:
        return 0
    if classify_labels(ls, lt, s_top, t_top, top_out) is QueryClass.TYPE1:
        return intersect_labels(ls, lt)[0]
    return bi_dijkstra(ls, lt, top_out, top_in, prune=prune).mu


def distance(index: "ISLabelIndex", s: int, t: int, prune: bool = True) -> float:
    index.check_vertex(s)
    index.check_vertex(t)
    if s == t:
        return 0
    return distance_from_labels(
        index.out_label(s), index.in_label(t), index.is_top(s), index.is_top(t), index.top_out, index.top_in, prune
    )


class PathExpander:
    """Unpacks label entries and hierarchy edges into original-graph vertex sequences."""

    def __init__(
        self,
        out_label: Callable[[int], Label],
        in_label: Callable[[int], Label],
        out_snap: list,
        in_snap: list,
    ) -> None:
        self.out_label = out_label
        self.in_label = in_label
        self.out_snap = out_snap
        self.in_snap = in_snap

    def arc(self, a: int, b: int, mid: Optional[int]) -> list[int]:
        """Expand hierarchy arc ``a -> b`` whose midpoint is ``mid``."""
        if mid is None:
            return [a, b]
        left = self.in_snap[mid][a][1]
        right = self.out_snap[mid][b][1]
        return self.arc(a, mid, left) + self.arc(mid, b, right)[1:]

    def out_walk(self, owner: int, anc: int) -> list[int]:
        """Walk ``owner -> anc`` realizing the out-label bound."""
        if owner == anc:
            return [owner]
        _, kind, via = self.out_label(owner).entry(anc)
        if kind == DIRECT:
            return self.arc(owner, anc, via)
        if kind == THROUGH:
            return self.out_walk(owner, via) + self.out_walk(via, anc)[1:]
        raise ValueError(f"unexpected label entry kind {kind} for ({owner},{anc})")

    def in_walk(self, owner: int, anc: int) -> list[int]:
        """Walk ``anc -> owner`` realizing the in-label bound."""
        if owner == anc:
            return [owner]
        _, kind, via = self.in_label(owner).entry(anc)
        if kind == DIRECT:
            return self.arc(anc, owner, via)
        if kind == THROUGH:
            return self.in_walk(via, anc) + self.in_walk(owner, via)[1:]
        raise ValueError(f"unexpected label entry kind {kind} for ({anc},{owner})")

    def search_path(self, s: int, t: int, st: SearchState) -> list[int]:
        x = st.meet
        assert x is not None
        arcs = []
        v = x
        while st.pf[v] is not None:
            p, mid = st.pf[v]
            arcs.append((p, v, mid))
            v = p
        path = self.out_walk(s, v)
        for p, q, mid in reversed(arcs):
            path += self.arc(p, q, mid)[1:]
        v = x
        while st.pr[v] is not None:
            nxt, mid = st.pr[v]
            path += self.arc(v, nxt, mid)[1:]
            v = nxt
        path += self.in_walk(t, v)[1:]
        return path


def expander_for(index: "ISLabelIndex") -> PathExpander:
    return PathExpander(index.out_label, index.in_label, index.out_snap, index.in_snap)


def shortest_path(index: "ISLabelIndex", s: int, t: int) -> PathResult:
    """Distance plus vertex sequence; unreachable pairs give an empty path and ``INF``."""
    index.check_vertex(s)
    index.check_vertex(t)
    if not index.path_capable:
        raise ValueError("index was built without path data")
    if s == t:
        return PathResult([s], 0)
    ls, lt = index.out_label(s), index.in_label(t)
    exp = expander_for(index)
    if classify(index, s, t) is QueryClass.TYPE1:
        d, w = intersect_labels(ls, lt)
        if w is None:
            return PathResult([], INF)
        return PathResult(exp.out_walk(s, w) + exp.in_walk(t, w)[1:], d)
    st = bi_dijkstra(ls, lt, index.top_out, index.top_in)
    if st.mu == INF:
        return PathResult([], INF)
    if st.meet is None:
        w = st.witness
        return PathResult(exp.out_walk(s, w) + exp.in_walk(t, w)[1:], st.mu)
    return PathResult(exp.search_path(s, t, st), st.mu)


def path_length(adj: list, path: list[int]) -> Optional[int]:
    """Sum of edge weights along ``path`` in an adjacency-list graph, or ``None`` if not a walk."""
    total = 0
    for a, b in zip(path, path[1:]):
        w = next((w for u, w in adj[a] if u == b), None)
        if w is None:
            return None
        total += w
    return total
