"""Relaxed vertex labels.

Each label entry is ``(ancestor, bound, kind, via)``:

* ``SELF``: the owner itself, bound 0.
* ``DIRECT``: a hierarchy edge owner -> ancestor; ``via`` is that edge's midpoint or ``None``.
* ``THROUGH``: bound = d(owner, via) + d(via, ancestor) where ``via`` is a
  lower-level ancestor of the owner.

For in-labels (directed mode) the bound is a distance *from* the ancestor to
the owner and the same three kinds apply with arcs reversed.
"""

from __future__ import annotations

import bisect
import heapq
from typing import Iterable, Optional

import numpy as np

from .hierarchy import VertexHierarchy

SELF, DIRECT, THROUGH = 0, 1, 2
KIND_NAMES = {SELF: "SELF", DIRECT: "DIRECT", THROUGH: "THROUGH"}


class Label:
    """Entries of one vertex label, sorted by ancestor id (parallel lists)."""

    __slots__ = ("owner", "ancestors", "bounds", "kinds", "vias")

    def __init__(
        self,
        owner: int,
        ancestors: list[int],
        bounds: list[int],
        kinds: list[int],
        vias: list[Optional[int]],
    ) -> None:
        self.owner = owner
        self.ancestors = ancestors
        self.bounds = bounds
        self.kinds = kinds
        self.vias = vias

    @classmethod
    def from_map(cls, owner: int, entries: dict[int, tuple[int, int, Optional[int]]]) -> "Label":
        keys = sorted(entries)
        vals = [entries[a] for a in keys]
        return cls(owner, keys, [v[0] for v in vals], [v[1] for v in vals], [v[2] for v in vals])

    @classmethod
    def from_pairs(cls, owner: int, pairs: Iterable[tuple[int, int]]) -> "Label":
        """Distance-only label, e.g. a hand-written table."""
        entries = {a: (d, SELF if a == owner else DIRECT, None) for a, d in pairs}
        return cls.from_map(owner, entries)

    def to_map(self) -> dict[int, tuple[int, int, Optional[int]]]:
        return {a: (d, k, x) for a, d, k, x in zip(self.ancestors, self.bounds, self.kinds, self.vias)}

    def as_pairs(self) -> dict[int, int]:
        return dict(zip(self.ancestors, self.bounds))

    def entry(self, ancestor: int) -> tuple[int, int, Optional[int]]:
        i = bisect.bisect_left(self.ancestors, ancestor)
        if i == len(self.ancestors) or self.ancestors[i] != ancestor:
            raise KeyError(ancestor)
        return self.bounds[i], self.kinds[i], self.vias[i]

    def set_entry(self, ancestor: int, bound: int, kind: int, via: Optional[int]) -> None:
        i = bisect.bisect_left(self.ancestors, ancestor)
        if i < len(self.ancestors) and self.ancestors[i] == ancestor:
            self.bounds[i], self.kinds[i], self.vias[i] = bound, kind, via
            return
        self.ancestors.insert(i, ancestor)
        self.bounds.insert(i, bound)
        self.kinds.insert(i, kind)
        self.vias.insert(i, via)

    def remove(self, ancestor: int) -> bool:
        i = bisect.bisect_left(self.ancestors, ancestor)
        if i == len(self.ancestors) or self.ancestors[i] != ancestor:
            return False
        for seq in (self.ancestors, self.bounds, self.kinds, self.vias):
            del seq[i]
        return True

    def __contains__(self, ancestor: int) -> bool:
        i = bisect.bisect_left(self.ancestors, ancestor)
        return i < len(self.ancestors) and self.ancestors[i] == ancestor

    def __len__(self) -> int:
        return len(self.ancestors)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Label):
            return NotImplemented
        return (
            self.owner == other.owner
            and self.ancestors == other.ancestors
            and self.bounds == other.bounds
            and self.kinds == other.kinds
            and self.vias == other.vias
        )

    def __repr__(self) -> str:
        body = ", ".join(f"({a},{d})" for a, d in zip(self.ancestors, self.bounds))
        return f"Label({self.owner}: {body})"


def _snapshot(h: VertexHierarchy, v: int, inbound: bool):
    return h.in_snapshot(v) if inbound else h.out_snapshot(v)


def initialize_labels(h: VertexHierarchy, inbound: bool = False) -> list[dict]:
    """SELF entry for every vertex plus one DIRECT entry per higher-level neighbor."""
    labels: list[dict] = [None] * h.n  # type: ignore[list-item]
    for v in range(h.n):
        entries = {v: (0, SELF, None)}
        if not h.is_top(v):
            for u, (w, mid) in _snapshot(h, v, inbound).items():
                entries[u] = (w, DIRECT, mid)
        labels[v] = entries
    return labels


def topdown_propagate(h: VertexHierarchy, labels: list[dict], inbound: bool = False) -> list[Label]:
    """Complete the labels level by level from ``k-1`` down to 1.

    For ``v`` in ``L_i`` the labels of its direct neighbors (already complete)
    are merged in ascending (level, id) order, so ``d(v, u)`` is final before
    ``label(u)`` is joined in.
    """
    level_of = h.level_of
    for ls in reversed(h.levels):
        for v in ls.members:
            lab = labels[v]
            snap = _snapshot(h, v, inbound)
            for u in sorted(snap, key=lambda x: (level_of[x], x)):
                du = lab[u][0]
                for x, (dx, _, _) in labels[u].items():
                    if x == u:
                        continue
                    c = du + dx
                    cur = lab.get(x)
                    if cur is None or c < cur[0]:
                        lab[x] = (c, THROUGH, u)
    return [Label.from_map(v, labels[v]) for v in range(h.n)]


def build_labels(h: VertexHierarchy, inbound: bool = False) -> list[Label]:
    return topdown_propagate(h, initialize_labels(h, inbound), inbound)


def reference_label(h: VertexHierarchy, v: int, inbound: bool = False) -> dict[int, int]:
    """Relaxed label computed by the literal mark/unmark procedure.

    Repeatedly unmarks the marked vertex of smallest level and relaxes its
    higher-level neighbors in that level's graph. Returns ``{ancestor: bound}``.
    """
    level_of = h.level_of
    lab = {v: 0}
    marked = [(level_of[v], v)]
    queued = {v}
    while marked:
        _, u = heapq.heappop(marked)
        queued.discard(u)
        if h.is_top(u):
            continue
        j = level_of[u]
        for w, (wt, _) in _snapshot(h, u, inbound).items():
            if level_of[w] <= j:
                continue
            c = lab[u] + wt
            if w not in lab:
                lab[w] = c
            elif c < lab[w]:
                lab[w] = c
            else:
                continue
            if w not in queued:
                queued.add(w)
                heapq.heappush(marked, (level_of[w], w))
    return lab


class LabelStore:
    """Packed labels: a per-vertex offset table over contiguous entry arrays."""

    def __init__(
        self,
        offsets: np.ndarray,
        ancestors: np.ndarray,
        bounds: np.ndarray,
        kinds: np.ndarray,
        vias: np.ndarray,
    ) -> None:
        self.offsets = offsets
        self.ancestors = ancestors
        self.bounds = bounds
        self.kinds = kinds
        self.vias = vias

    NULL = 0xFFFFFFFF

    @classmethod
    def pack(cls, labels: list[Label]) -> "LabelStore":
        sizes = np.fromiter((len(lab) for lab in labels), dtype=np.uint64, count=len(labels))
        offsets = np.zeros(len(labels) + 1, dtype=np.uint64)
        np.cumsum(sizes, out=offsets[1:])
        anc: list[int] = []
        bnd: list[int] = []
        knd: list[int] = []
        via: list[int] = []
        for lab in labels:
            anc.extend(lab.ancestors)
            bnd.extend(lab.bounds)
            knd.extend(lab.kinds)
            via.extend(cls.NULL if x is None else x for x in lab.vias)
        return cls(
            offsets,
            np.array(anc, dtype=np.uint32),
            np.array(bnd, dtype=np.uint64),
            np.array(knd, dtype=np.uint8),
            np.array(via, dtype=np.uint32),
        )

    def __len__(self) -> int:
        return len(self.offsets) - 1

    @property
    def entry_count(self) -> int:
        return int(self.offsets[-1])

    def label(self, v: int) -> Label:
        lo, hi = int(self.offsets[v]), int(self.offsets[v + 1])
        vias = [None if x == self.NULL else x for x in self.vias[lo:hi].tolist()]
        return Label(
            v,
            self.ancestors[lo:hi].tolist(),
            self.bounds[lo:hi].tolist(),
            self.kinds[lo:hi].tolist(),
            vias,
        )

    def unpack(self) -> list[Label]:
        return [self.label(v) for v in range(len(self))]
