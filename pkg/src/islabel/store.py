"""Binary index file.

Layout (all integers little-endian)::

    header   magic "ISLB", u32 version, u64 flags, u64 k, u64 n, u64 top vertices,
             u64 top edges, u64 section count
    table    (u64 offset, u64 length) per section
    sections each starting on an 8-byte boundary
    trailer  u32 CRC-32 of every preceding byte

Sections, in order: external ids; level numbers (0 marks a deleted vertex);
out-label offsets, entries (u32 ancestor, u64 bound) and kinds/vias
(u8 kind, u32 via); the same three for in-labels (empty when undirected);
out- and in-snapshot offsets and records (u32 neighbor, u64 weight, u32
midpoint); top-graph offsets and records; update counters.

Offset tables have ``n + 1`` entries counted in records, so the entries of one
label are a single contiguous byte range.
"""

from __future__ import annotations

import os
import struct
import tempfile
import zlib
from pathlib import Path
from typing import BinaryIO, Optional

import numpy as np

from .index import DELETED, ISLabelIndex, UpdateLog
from .labeling import DIRECT, SELF, Label

MAGIC = b"ISLB"
VERSION = 1
NULL = 0xFFFFFFFF

FLAG_DIRECTED = 1
FLAG_PATHS = 2
FLAG_STALE = 4

HEADER = struct.Struct("<4sIQQQQQQ")
SECTION = struct.Struct("<QQ")
CRC = struct.Struct("<I")

ENTRY = np.dtype([("anc", "<u4"), ("bound", "<u8")])
VIA = np.dtype([("kind", "u1"), ("via", "<u4")])
EDGE = np.dtype([("nbr", "<u4"), ("w", "<u8"), ("mid", "<u4")])

SECTIONS = (
    "ids",
    "levels",
    "out_offsets",
    "out_entries",
    "out_vias",
    "in_offsets",
    "in_entries",
    "in_vias",
    "snap_out_offsets",
    "snap_out_edges",
    "snap_in_offsets",
    "snap_in_edges",
    "top_offsets",
    "top_edges",
    "log",
)
TABLE_START = HEADER.size
DATA_START = TABLE_START + SECTION.size * len(SECTIONS)


class IndexFormatError(ValueError):
    """Raised for files that are truncated, corrupted or not index files."""


# -- encoding ------------------------------------------------------------------


def _pack_labels(labels: list[Label], with_vias: bool) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    sizes = np.fromiter((len(lab) for lab in labels), dtype=np.uint64, count=len(labels))
    offsets = np.zeros(len(labels) + 1, dtype="<u8")
    np.cumsum(sizes, out=offsets[1:])
    total = int(offsets[-1])
    entries = np.empty(total, dtype=ENTRY)
    vias = np.empty(total if with_vias else 0, dtype=VIA)
    anc: list[int] = []
    bnd: list[int] = []
    knd: list[int] = []
    via: list[int] = []
    for lab in labels:
        anc += lab.ancestors
        bnd += lab.bounds
        if with_vias:
            knd += lab.kinds
            via += [NULL if x is None else x for x in lab.vias]
    entries["anc"] = anc
    entries["bound"] = bnd
    if with_vias:
        vias["kind"] = knd
        vias["via"] = via
    return offsets, entries, vias


def _pack_adjacency(rows: list[Optional[dict]]) -> tuple[np.ndarray, np.ndarray]:
    offsets = np.zeros(len(rows) + 1, dtype="<u8")
    nbr: list[int] = []
    wts: list[int] = []
    mids: list[int] = []
    for v, row in enumerate(rows):
        if row:
            for u in sorted(row):
                w, mid = row[u]
                nbr.append(u)
                wts.append(w)
                mids.append(NULL if mid is None else mid)
        offsets[v + 1] = len(nbr)
    edges = np.empty(len(nbr), dtype=EDGE)
    edges["nbr"] = nbr
    edges["w"] = wts
    edges["mid"] = mids
    return offsets, edges


def serialize(index: ISLabelIndex) -> bytes:
    """Encode ``index``; equal indexes give identical bytes."""
    n = index.n
    empty_off = np.zeros(0, dtype="<u8")
    out_off, out_ent, out_via = _pack_labels(index.out_labels, index.path_capable)
    if index.directed:
        in_off, in_ent, in_via = _pack_labels(index.in_labels, index.path_capable)
        sin_off, sin_edges = _pack_adjacency(index.in_snap)
    else:
        in_off, in_ent, in_via = empty_off, np.zeros(0, ENTRY), np.zeros(0, VIA)
        sin_off, sin_edges = empty_off, np.zeros(0, EDGE)
    sout_off, sout_edges = _pack_adjacency(index.out_snap)
    top_rows = [index.top_out.get(v) if index.is_top(v) else None for v in range(n)]
    top_off, top_edges = _pack_adjacency(top_rows)
    lg = index.log
    log_arr = np.array([lg.inserted, lg.deleted, lg.touched_labels, lg.baseline_vertices], dtype="<u8")

    arrays = [
        np.asarray(index.ext_ids, dtype="<u8"),
        np.asarray(index.level_of, dtype="<u4"),
        out_off, out_ent, out_via,
        in_off, in_ent, in_via,
        sout_off, sout_edges,
        sin_off, sin_edges,
        top_off, top_edges,
        log_arr,
    ]  # fmt: skip
    flags = (
        (FLAG_DIRECTED if index.directed else 0)
        | (FLAG_PATHS if index.path_capable else 0)
        | (FLAG_STALE if index.stale else 0)
    )
    buf = bytearray(DATA_START)
    HEADER.pack_into(
        buf, 0, MAGIC, VERSION, flags, index.k, n, len(index.top_out), index.top_edge_count, len(SECTIONS)
    )
    for i, arr in enumerate(arrays):
        buf += b"\0" * (-len(buf) % 8)
        data = arr.tobytes()
        SECTION.pack_into(buf, TABLE_START + i * SECTION.size, len(buf), len(data))
        buf += data
    buf += CRC.pack(zlib.crc32(buf))
    return bytes(buf)


def save_index(index: ISLabelIndex, path: str | os.PathLike) -> int:
    """Write atomically (temp file + rename); returns the file size."""
    data = serialize(index)
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=path.name + ".", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return len(data)


# -- decoding ------------------------------------------------------------------


class Header:
    def __init__(self, raw: bytes, size: int) -> None:
        if len(raw) < DATA_START + CRC.size:
            raise IndexFormatError("file too short for an index header")
        magic, version, flags, k, n, n_top, m_top, count = HEADER.unpack_from(raw, 0)
        if magic != MAGIC:
            raise IndexFormatError("not an index file (bad magic)")
        if version != VERSION:
            raise IndexFormatError(f"unsupported format version {version}")
        if count != len(SECTIONS):
            raise IndexFormatError(f"expected {len(SECTIONS)} sections, found {count}")
        self.flags = flags
        self.directed = bool(flags & FLAG_DIRECTED)
        self.path_capable = bool(flags & FLAG_PATHS)
        self.stale = bool(flags & FLAG_STALE)
        self.k, self.n, self.top_vertices, self.top_edges = k, n, n_top, m_top
        self.sections: dict[str, tuple[int, int]] = {}
        limit = size - CRC.size
        for i, name in enumerate(SECTIONS):
            off, length = SECTION.unpack_from(raw, TABLE_START + i * SECTION.size)
            if off < DATA_START or off + length > limit:
                raise IndexFormatError(f"section {name} out of bounds")
            self.sections[name] = (off, length)

    def fields(self) -> dict[str, object]:
        return {
            "version": VERSION,
            "directed": int(self.directed),
            "path_capable": int(self.path_capable),
            "stale": int(self.stale),
            "k": self.k,
            "vertices": self.n,
            "top_vertices": self.top_vertices,
            "top_edges": self.top_edges,
        }


def _verify(data: bytes) -> None:
    if len(data) < CRC.size:
        raise IndexFormatError("file too short")
    (stored,) = CRC.unpack_from(data, len(data) - CRC.size)
    if zlib.crc32(memoryview(data)[: -CRC.size]) != stored:
        raise IndexFormatError("checksum mismatch")


def _section(data: bytes, hdr: Header, name: str, dtype) -> np.ndarray:
    off, length = hdr.sections[name]
    dtype = np.dtype(dtype)
    if length % dtype.itemsize:
        raise IndexFormatError(f"section {name} has a partial record")
    return np.frombuffer(data, dtype=dtype, count=length // dtype.itemsize, offset=off)


def _offsets(data: bytes, hdr: Header, name: str, records: int) -> np.ndarray:
    off = _section(data, hdr, name, "<u8")
    if len(off) != hdr.n + 1 or off[0] != 0 or off[-1] != records:
        raise IndexFormatError(f"section {name} is inconsistent")
    if len(off) > 1 and np.any(np.diff(off.astype(np.int64)) < 0):
        raise IndexFormatError(f"section {name} is not monotone")
    return off


def _unpack_labels(data: bytes, hdr: Header, prefix: str) -> list[Label]:
    ent = _section(data, hdr, f"{prefix}_entries", ENTRY)
    off = _offsets(data, hdr, f"{prefix}_offsets", len(ent)).tolist()
    vias = _section(data, hdr, f"{prefix}_vias", VIA)
    if hdr.path_capable and len(vias) != len(ent):
        raise IndexFormatError(f"section {prefix}_vias does not match its entries")
    anc = ent["anc"].tolist()
    bnd = ent["bound"].tolist()
    if hdr.path_capable:
        knd = vias["kind"].tolist()
        via = [None if x == NULL else x for x in vias["via"].tolist()]
    labels = []
    for v in range(hdr.n):
        lo, hi = off[v], off[v + 1]
        a = anc[lo:hi]
        if hdr.path_capable:
            k, x = knd[lo:hi], via[lo:hi]
        else:
            k, x = [SELF if y == v else DIRECT for y in a], [None] * (hi - lo)
        labels.append(Label(v, a, bnd[lo:hi], k, x))
    return labels


def _unpack_adjacency(data: bytes, hdr: Header, prefix: str, present: list[bool]) -> list[Optional[dict]]:
    edges = _section(data, hdr, f"{prefix}_edges", EDGE)
    off = _offsets(data, hdr, f"{prefix}_offsets", len(edges)).tolist()
    nbr = edges["nbr"].tolist()
    wts = edges["w"].tolist()
    mids = [None if m == NULL else m for m in edges["mid"].tolist()]
    rows: list[Optional[dict]] = []
    for v in range(hdr.n):
        lo, hi = off[v], off[v + 1]
        if not present[v]:
            if hi != lo:
                raise IndexFormatError(f"section {prefix} has edges for an absent vertex {v}")
            rows.append(None)
        else:
            rows.append({nbr[i]: (wts[i], mids[i]) for i in range(lo, hi)})
    return rows


def deserialize(data: bytes) -> ISLabelIndex:
    _verify(data)
    hdr = Header(data, len(data))
    n, k = hdr.n, hdr.k
    ids = _section(data, hdr, "ids", "<u8").tolist()
    level_of = _section(data, hdr, "levels", "<u4").tolist()
    if len(ids) != n or len(level_of) != n:
        raise IndexFormatError("id map or level section has the wrong length")
    if any(lv > k for lv in level_of):
        raise IndexFormatError("level number above k")
    lower = [lv != DELETED and lv != k for lv in level_of]
    is_top = [lv == k for lv in level_of]

    out_labels = _unpack_labels(data, hdr, "out")
    out_snap = _unpack_adjacency(data, hdr, "snap_out", lower)
    top_rows = _unpack_adjacency(data, hdr, "top", is_top)
    top_out = {v: row for v, row in enumerate(top_rows) if row is not None}
    if hdr.directed:
        in_labels = _unpack_labels(data, hdr, "in")
        in_snap = _unpack_adjacency(data, hdr, "snap_in", lower)
        top_in: dict = {v: {} for v in top_out}
        for v, row in top_out.items():
            for u, edge in row.items():
                top_in[u][v] = edge
    else:
        in_labels, in_snap, top_in = out_labels, out_snap, top_out
    lg = _section(data, hdr, "log", "<u8").tolist()
    if len(lg) != 4:
        raise IndexFormatError("update log section has the wrong length")
    log = UpdateLog(inserted=lg[0], deleted=lg[1], touched_labels=lg[2], baseline_vertices=lg[3], stale=hdr.stale)
    return ISLabelIndex(
        directed=hdr.directed,
        k=k,
        ext_ids=ids,
        level_of=level_of,
        out_snap=out_snap,
        in_snap=in_snap,
        top_out=top_out,
        top_in=top_in,
        out_labels=out_labels,
        in_labels=in_labels,
        path_capable=hdr.path_capable,
        log=log,
    )


def load_index(path: str | os.PathLike) -> ISLabelIndex:
    return deserialize(Path(path).read_bytes())


def section_sizes(path: str | os.PathLike) -> tuple[Header, dict[str, int]]:
    data = Path(path).read_bytes()
    _verify(data)
    hdr = Header(data, len(data))
    return hdr, {name: length for name, (_, length) in hdr.sections.items()}


class IndexReader:
    """Index file opened for on-demand label retrieval.

    Offset tables, level numbers and the top graph are loaded once; each label
    is read from disk on request. ``bytes_read`` counts label payload bytes.
    """

    def __init__(self, path: str | os.PathLike, verify: bool = True) -> None:
        self.path = Path(path)
        self._fh: BinaryIO = open(self.path, "rb")
        try:
            self._load(verify)
        except BaseException:
            self._fh.close()
            raise

    def _load(self, verify: bool) -> None:
        size = os.fstat(self._fh.fileno()).st_size
        if verify:
            _verify(self._fh.read())
        self._fh.seek(0)
        raw = self._fh.read(DATA_START + CRC.size)
        self.header = hdr = Header(raw, size)

        def section(name: str, dtype) -> np.ndarray:
            off, length = hdr.sections[name]
            self._fh.seek(off)
            buf = self._fh.read(length)
            return np.frombuffer(buf, dtype=dtype)

        self.level_of = section("levels", "<u4").tolist()
        self.ext_ids = section("ids", "<u8").tolist()
        self._int_of = {e: i for i, e in enumerate(self.ext_ids) if self.level_of[i] != DELETED}
        self._offsets = {"out": section("out_offsets", "<u8")}
        if hdr.directed:
            self._offsets["in"] = section("in_offsets", "<u8")
        top_off = section("top_offsets", "<u8").tolist()
        top_edges = section("top_edges", EDGE)
        self.top_out: dict[int, dict] = {}
        for v in range(hdr.n):
            if self.level_of[v] == hdr.k:
                lo, hi = top_off[v], top_off[v + 1]
                self.top_out[v] = {
                    int(e["nbr"]): (int(e["w"]), None if e["mid"] == NULL else int(e["mid"])) for e in top_edges[lo:hi]
                }
        if hdr.directed:
            self.top_in: dict[int, dict] = {v: {} for v in self.top_out}
            for v, row in self.top_out.items():
                for u, edge in row.items():
                    self.top_in[u][v] = edge
        else:
            self.top_in = self.top_out
        self.bytes_read = 0

    @property
    def n(self) -> int:
        return self.header.n

    @property
    def k(self) -> int:
        return self.header.k

    @property
    def directed(self) -> bool:
        return self.header.directed

    def is_top(self, v: int) -> bool:
        return self.level_of[v] == self.header.k

    def internal(self, ext: int) -> int:
        try:
            return self._int_of[ext]
        except KeyError:
            raise KeyError(f"unknown vertex {ext}") from None

    def label(self, v: int, inbound: bool = False, with_vias: bool = False) -> Label:
        """Read one label with a single contiguous read of its entries.

        With ``with_vias`` the parallel kind/via range is read as well.
        """
        if not 0 <= v < self.n or self.level_of[v] == DELETED:
            raise IndexError(f"invalid vertex id {v!r}")
        prefix = "in" if inbound and self.header.directed else "out"
        offsets = self._offsets[prefix]
        lo, hi = int(offsets[v]), int(offsets[v + 1])
        base, _ = self.header.sections[f"{prefix}_entries"]
        self._fh.seek(base + lo * ENTRY.itemsize)
        buf = self._fh.read((hi - lo) * ENTRY.itemsize)
        self.bytes_read += len(buf)
        ent = np.frombuffer(buf, dtype=ENTRY)
        anc = ent["anc"].tolist()
        if with_vias and self.header.path_capable:
            vbase, _ = self.header.sections[f"{prefix}_vias"]
            self._fh.seek(vbase + lo * VIA.itemsize)
            vbuf = self._fh.read((hi - lo) * VIA.itemsize)
            self.bytes_read += len(vbuf)
            vias = np.frombuffer(vbuf, dtype=VIA)
            kinds = vias["kind"].tolist()
            via = [None if x == NULL else x for x in vias["via"].tolist()]
        else:
            kinds = [SELF if a == v else DIRECT for a in anc]
            via = [None] * len(anc)
        return Label(v, anc, ent["bound"].tolist(), kinds, via)

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> "IndexReader":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def load_label(path: str | os.PathLike, v: int, inbound: bool = False) -> Label:
    """Read the label of internal vertex ``v`` from an index file."""
    with IndexReader(path) as reader:
        return reader.label(v, inbound=inbound, with_vias=True)
