"""The assembled index: level numbers, labels, level snapshots and the top graph."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Optional

from .graph import Graph
from .hierarchy import DEFAULT_SIGMA, Adjacency, VertexHierarchy, build_hierarchy
from .labeling import Label, build_labels

log = logging.getLogger(__name__)

DELETED = 0


@dataclass
class UpdateLog:
    """Update counters since the last full build.

    ``baseline_vertices`` is the live vertex count at build time; ``stale``
    records that some deletion could not be repaired in place.
    """

    inserted: int = 0
    deleted: int = 0
    touched_labels: int = 0
    baseline_vertices: int = 0
    stale: bool = False

    def __iadd__(self, other: "UpdateLog") -> "UpdateLog":
        self.inserted += other.inserted
        self.deleted += other.deleted
        self.touched_labels += other.touched_labels
        self.stale = self.stale or other.stale
        return self


@dataclass
class ISLabelIndex:
    """Query-ready index.

    ``out_snap[v]`` / ``in_snap[v]`` hold ``adj_{G_l(v)}(v)`` for non-top vertices
    (``None`` for top or deleted vertices). In undirected mode the ``in_*``
    attributes alias the ``out_*`` ones.
    """

    directed: bool
    k: int
    ext_ids: list[int]
    level_of: list[int]
    out_snap: list[Optional[Adjacency]]
    in_snap: list[Optional[Adjacency]]
    top_out: dict[int, Adjacency]
    top_in: dict[int, Adjacency]
    out_labels: list[Label]
    in_labels: list[Label]
    path_capable: bool = True
    log: UpdateLog = field(default_factory=UpdateLog)
    build_seconds: float = 0.0

    def __post_init__(self) -> None:
        self._int_of = {e: i for i, e in enumerate(self.ext_ids) if self.level_of[i] != DELETED}
        if not self.log.baseline_vertices:
            self.log.baseline_vertices = self.live_count

    @property
    def stale(self) -> bool:
        return self.log.stale

    @classmethod
    def build(
        cls,
        g: Graph,
        sigma: float = DEFAULT_SIGMA,
        max_k: int | None = None,
        path_capable: bool = True,
    ) -> "ISLabelIndex":
        t0 = time.perf_counter()
        h = build_hierarchy(g, sigma=sigma, max_k=max_k)
        idx = cls.from_hierarchy(h, g.ext_ids, path_capable=path_capable)
        idx.build_seconds = time.perf_counter() - t0
        log.info("built index: k=%d top=%d in %.2fs", idx.k, len(idx.top_out), idx.build_seconds)
        return idx

    @classmethod
    def from_hierarchy(
        cls, h: VertexHierarchy, ext_ids: list[int] | None = None, path_capable: bool = True
    ) -> "ISLabelIndex":
        out_labels = build_labels(h)
        in_labels = build_labels(h, inbound=True) if h.directed else out_labels
        out_snap: list[Optional[Adjacency]] = [None] * h.n
        in_snap: list[Optional[Adjacency]] = [None] * h.n if h.directed else out_snap
        for ls in h.levels:
            for v in ls.members:
                out_snap[v] = ls.out_snapshot[v]
                if h.directed:
                    in_snap[v] = ls.in_snapshot[v]
        return cls(
            directed=h.directed,
            k=h.k,
            ext_ids=list(ext_ids) if ext_ids is not None else list(range(h.n)),
            level_of=list(h.level_of),
            out_snap=out_snap,
            in_snap=in_snap,
            top_out=h.top_out,
            top_in=h.top_in,
            out_labels=out_labels,
            in_labels=in_labels,
            path_capable=path_capable,
        )

    # -- basic accessors -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.level_of)

    @property
    def live_count(self) -> int:
        return sum(1 for x in self.level_of if x != DELETED)

    def is_top(self, v: int) -> bool:
        return self.level_of[v] == self.k

    def check_vertex(self, v: int) -> None:
        if not isinstance(v, int) or not 0 <= v < self.n or self.level_of[v] == DELETED:
            raise IndexError(f"invalid vertex id {v!r}")

    def internal(self, ext: int) -> int:
        try:
            return self._int_of[ext]
        except KeyError:
            raise KeyError(f"unknown vertex {ext}") from None

    def has_external(self, ext: int) -> bool:
        return ext in self._int_of

    def out_label(self, v: int) -> Label:
        return self.out_labels[v]

    def in_label(self, v: int) -> Label:
        return self.in_labels[v]

    # -- queries (see query.py) -------------------------------------------

    def classify(self, s: int, t: int):
        from .query import classify

        return classify(self, s, t)

    def distance(self, s: int, t: int):
        from .query import distance

        return distance(self, s, t)

    def shortest_path(self, s: int, t: int):
        from .query import shortest_path

        return shortest_path(self, s, t)

    # -- statistics --------------------------------------------------------

    @property
    def top_edge_count(self) -> int:
        m = sum(len(a) for a in self.top_out.values())
        return m if self.directed else m // 2

    def level_sizes(self) -> list[int]:
        sizes = [0] * self.k
        for lv in self.level_of:
            if lv != DELETED:
                sizes[lv - 1] += 1
        return sizes

    def label_entry_count(self) -> int:
        total = sum(len(lab) for lab in self.out_labels)
        if self.directed:
            total += sum(len(lab) for lab in self.in_labels)
        return total

    def stats(self) -> dict[str, object]:
        sizes = [len(lab) for lab in self.out_labels]
        if self.directed:
            sizes += [len(lab) for lab in self.in_labels]
        live = [s for s in sizes if s]
        return {
            "k": self.k,
            "vertices": self.live_count,
            "top_vertices": len(self.top_out),
            "top_edges": self.top_edge_count,
            "level_sizes": ",".join(str(x) for x in self.level_sizes()),
            "label_entries": sum(sizes),
            "label_max_entries": max(live, default=0),
            "label_mean_entries": round(sum(live) / len(live), 3) if live else 0.0,
            "directed": int(self.directed),
            "path_capable": int(self.path_capable),
            "stale": int(self.stale),
        }
