"""In-place vertex insertion and deletion for undirected indexes.

Insertion treats the new vertex as if it had been present at build time and
never selected into an independent set: it stays in the top graph, the levels
below keep their members, and contracting a lower neighbor ``y`` produces the
augmenting edges ``u - z`` that the rebuild would have produced. Only snapshot
edges incident to ``u``, top-graph edges incident to ``u`` and label entries
whose ancestor is ``u`` change, so queries stay exact.

Deletion removes every trace of the vertex. That is exact when no stored edge
or label entry routes through it; otherwise the index is marked stale and
should be rebuilt before its answers are trusted.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Optional

from .graph import MAX_DISTANCE
from .index import DELETED, ISLabelIndex, UpdateLog
from .labeling import DIRECT, SELF, THROUGH, Label

log = logging.getLogger(__name__)


class UpdateError(ValueError):
    pass


@dataclass(frozen=True)
class RebuildPolicy:
    """Rebuild once inserted plus deleted vertices exceed ``max_fraction`` of the build-time size."""

    max_fraction: float = 0.1


def should_rebuild(log: UpdateLog, policy: RebuildPolicy = RebuildPolicy()) -> bool:
    if log.stale:
        return True
    changes = log.inserted + log.deleted
    return changes > 0 and changes > policy.max_fraction * log.baseline_vertices


def _require_undirected(index: ISLabelIndex) -> None:
    if index.directed:
        raise UpdateError("dynamic updates are only supported for undirected indexes")


def _normalize_adjacency(index: ISLabelIndex, u_ext: int, adj_ext: Iterable[tuple[int, int]]) -> dict[int, int]:
    adj: dict[int, int] = {}
    for v_ext, w in adj_ext:
        if v_ext == u_ext:
            continue
        if not isinstance(w, int) or w < 1:
            raise UpdateError(f"edge ({u_ext},{v_ext}): weight must be a positive integer, got {w!r}")
        if w > MAX_DISTANCE:
            raise OverflowError(f"edge ({u_ext},{v_ext}): weight {w} exceeds the distance range")
        if not index.has_external(v_ext):
            raise UpdateError(f"unknown neighbor {v_ext}")
        v = index.internal(v_ext)
        if v not in adj or w < adj[v]:
            adj[v] = w
    return adj


def _children(index: ISLabelIndex) -> dict[int, list[int]]:
    """``p -> [x, ...]`` for every lower-level ``x`` whose snapshot contains ``p``."""
    kids: dict[int, list[int]] = {}
    for x, snap in enumerate(index.out_snap):
        if snap is None:
            continue
        for p in snap:
            kids.setdefault(p, []).append(x)
    return kids


def insert_vertex(index: ISLabelIndex, u_ext: int, adj_ext: Iterable[tuple[int, int]]) -> UpdateLog:
    """Add vertex ``u_ext`` with weighted edges to existing vertices; returns the log delta."""
    _require_undirected(index)
    if index.has_external(u_ext):
        raise UpdateError(f"vertex {u_ext} already exists")
    adj = _normalize_adjacency(index, u_ext, adj_ext)
    level_of = index.level_of

    u = index.n
    index.ext_ids.append(u_ext)
    level_of.append(index.k)
    index.out_snap.append(None)
    index.out_labels.append(Label(u, [u], [0], [SELF], [None]))
    index._int_of[u_ext] = u

    # u's adjacency in the current residual graph, walked up level by level
    frontier: dict[int, tuple[int, Optional[int]]] = {v: (w, None) for v, w in adj.items()}
    seeded: list[int] = []
    for level in range(1, index.k):
        for y in sorted(v for v in frontier if level_of[v] == level):
            wy, mid = frontier.pop(y)
            snap = index.out_snap[y]
            snap[u] = (wy, mid)
            seeded.append(y)
            for z in sorted(snap):
                if z == u:
                    continue
                cand = wy + snap[z][0]
                cur = frontier.get(z)
                if cur is None or cand < cur[0]:
                    frontier[z] = (cand, y)

    top = index.top_out
    top[u] = {}
    # u has the largest id, so appending keeps every row sorted
    for z, edge in sorted(frontier.items()):
        top[u][z] = edge
        top[z][u] = edge

    touched = _relabel_descendants(index, u, seeded)
    delta = UpdateLog(inserted=1, touched_labels=touched)
    index.log += delta
    log.info("inserted %s: %d top edges, %d labels touched", u_ext, len(frontier), touched)
    return delta


def _relabel_descendants(index: ISLabelIndex, u: int, seeded: list[int]) -> int:
    """Recompute the entry for ancestor ``u`` in every label that can reach it."""
    level_of = index.level_of
    labels = index.out_labels
    kids = _children(index)
    affected = set(seeded)
    stack = list(seeded)
    while stack:
        p = stack.pop()
        for x in kids.get(p, ()):
            if x not in affected:
                affected.add(x)
                stack.append(x)
    for x in sorted(affected, key=lambda v: (-level_of[v], v)):
        snap = index.out_snap[x]
        lab = labels[x]
        best: Optional[tuple[int, int, Optional[int]]] = None
        if u in snap:
            w, mid = snap[u]
            best = (w, DIRECT, mid)
        for p in sorted(snap, key=lambda v: (level_of[v], v)):
            if p == u or u not in labels[p]:
                continue
            c = lab.entry(p)[0] + labels[p].entry(u)[0]
            if best is None or c < best[0]:
                best = (c, THROUGH, p)
        if best is not None:
            lab.set_entry(u, *best)
    return len(affected)


def _routes_through(index: ISLabelIndex, u: int) -> bool:
    """True when a stored edge has midpoint ``u`` or a label entry derives through ``u``."""
    for snap in index.out_snap:
        if snap is not None and any(mid == u for _, mid in snap.values()):
            return True
    for row in index.top_out.values():
        if any(mid == u for _, mid in row.values()):
            return True
    for lab in index.out_labels:
        for kind, via in zip(lab.kinds, lab.vias):
            if via == u and kind != SELF:
                return True
    return False


def delete_vertex(index: ISLabelIndex, u_ext: int) -> UpdateLog:
    """Remove vertex ``u_ext``; sets the stale flag when the result may be inexact."""
    _require_undirected(index)
    u = index.internal(u_ext)
    stale = not index.is_top(u) and _routes_through(index, u)

    touched = 0
    for x, lab in enumerate(index.out_labels):
        if x != u and lab.remove(u):
            touched += 1
    if index.is_top(u):
        for z in index.top_out.pop(u):
            del index.top_out[z][u]
    for snap in index.out_snap:
        if snap is not None:
            snap.pop(u, None)

    del index._int_of[u_ext]
    index.level_of[u] = DELETED
    index.out_snap[u] = None
    index.out_labels[u] = Label(u, [], [], [], [])
    # trailing deleted ids are dropped so insert-then-delete is an exact inverse
    while index.level_of and index.level_of[-1] == DELETED:
        index.level_of.pop()
        index.ext_ids.pop()
        index.out_snap.pop()
        index.out_labels.pop()

    delta = UpdateLog(deleted=1, touched_labels=touched, stale=stale)
    index.log += delta
    if stale:
        log.warning("deleting %s left the index stale; rebuild before trusting answers", u_ext)
    return delta
