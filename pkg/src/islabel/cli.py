"""Command-line interface: build, query, oracle, stats, bench, update, generate."""

from __future__ import annotations

import argparse
import logging
import os
import random
import statistics
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterable, Sequence

from .dynamic import RebuildPolicy, delete_vertex, insert_vertex, should_rebuild
from .generators import preferential_attachment, uniform_random
from .graph import INF, GraphFormatError, dijkstra_oracle, load_edge_list
from .hierarchy import DEFAULT_SIGMA
from .index import DELETED, ISLabelIndex
from .query import QueryClass, classify_labels, distance_from_labels
from .store import IndexFormatError, IndexReader, load_index, save_index, section_sizes

log = logging.getLogger("islabel")

LABEL_SECTIONS = ("out_offsets", "out_entries", "out_vias", "in_offsets", "in_entries", "in_vias")


class CliError(Exception):
    pass


def _fmt(d: float) -> str:
    return "INF" if d == INF else str(d)


def _report(pairs: Iterable[tuple[str, object]]) -> None:
    for key, value in pairs:
        print(f"{key}={value}")


def read_pairs(path: str | os.PathLike) -> list[tuple[int, int]]:
    pairs = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise CliError(f"{path}:{lineno}: expected two vertex ids, got {line!r}")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise CliError(f"{path}:{lineno}: vertex ids must be integers, got {line!r}") from None
    return pairs


def parse_insert(spec: str) -> tuple[int, list[tuple[int, int]]]:
    """Parse ``"u: v1 w1, v2 w2"`` (weights default to 1)."""
    head, sep, tail = spec.partition(":")
    if not sep:
        raise CliError(f"insert spec {spec!r} must look like 'u: v1 w1, v2 w2'")
    try:
        u = int(head)
        adj = []
        for item in tail.split(","):
            fields = item.split()
            if not fields:
                continue
            if len(fields) > 2:
                raise ValueError
            adj.append((int(fields[0]), int(fields[1]) if len(fields) == 2 else 1))
    except ValueError:
        raise CliError(f"malformed insert spec {spec!r}") from None
    return u, adj


def _check_direction(directed_index: bool, directed_flag: bool) -> None:
    if directed_index != directed_flag:
        have = "directed" if directed_index else "undirected"
        raise CliError(f"index is {have}; pass --directed only for directed indexes")


# -- subcommands -----------------------------------------------------------------


def cmd_build(args: argparse.Namespace) -> int:
    if Path(args.input).resolve() == Path(args.output).resolve():
        raise CliError("input and output paths must differ")
    g = load_edge_list(args.input, directed=args.directed)
    index = ISLabelIndex.build(g, sigma=args.sigma, max_k=args.max_k, path_capable=not args.no_paths)
    size = save_index(index, args.output)
    _, sections = section_sizes(args.output)
    _report(
        [
            ("k", index.k),
            ("vertices", index.n),
            ("top_vertices", len(index.top_out)),
            ("top_edges", index.top_edge_count),
            ("label_entries", index.label_entry_count()),
            ("label_bytes", sum(sections[name] for name in LABEL_SECTIONS)),
            ("index_bytes", size),
            ("build_seconds", f"{index.build_seconds:.3f}"),
        ]
    )
    return 0


def cmd_query(args: argparse.Namespace) -> int:
    index = load_index(args.index)
    _check_direction(index.directed, args.directed)
    if args.path and not index.path_capable:
        raise CliError("index was built with --no-paths")
    if index.stale:
        print("warning: index is stale after deletions; rebuild before trusting answers", file=sys.stderr)
    pairs = read_pairs(args.pairs)
    resolved = []
    for s, t in pairs:
        try:
            resolved.append((index.internal(s), index.internal(t)))
        except KeyError as exc:
            raise CliError(f"pair ({s},{t}): {exc.args[0]}") from None

    def answer(job: tuple[int, int]) -> str:
        s, t = job
        d = index.distance(s, t)
        line = f"{index.ext_ids[s]} {index.ext_ids[t]} {_fmt(d)}"
        if args.path and d != INF:
            path = index.shortest_path(s, t).vertices
            line += " " + ",".join(str(index.ext_ids[v]) for v in path)
        return line

    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            lines = list(pool.map(answer, resolved))
    else:
        lines = [answer(job) for job in resolved]
    for line in lines:
        print(line)
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    g = load_edge_list(args.input, directed=args.directed)
    cache: dict[int, list] = {}
    for s_ext, t_ext in read_pairs(args.pairs):
        try:
            s, t = g.internal(s_ext), g.internal(t_ext)
        except KeyError as exc:
            raise CliError(f"pair ({s_ext},{t_ext}): {exc.args[0]}") from None
        if s not in cache:
            cache[s] = dijkstra_oracle(g, s)
        print(f"{s_ext} {t_ext} {_fmt(cache[s][t])}")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    header, sections = section_sizes(args.index)
    _report(header.fields().items())
    _report((f"section.{name}", size) for name, size in sections.items())
    _report([("label_bytes", sum(sections[name] for name in LABEL_SECTIONS))])
    _report([("file_bytes", os.path.getsize(args.index))])
    if args.full:
        index = load_index(args.index)
        stats = index.stats()
        _report((key, stats[key]) for key in ("level_sizes", "label_entries", "label_max_entries", "label_mean_entries"))
        _report((key, int(v) if isinstance(v, bool) else v) for key, v in vars(index.log).items())
    return 0


def _ms(xs: list[float]) -> tuple[str, str]:
    if not xs:
        return "0.000", "0.000"
    return f"{statistics.fmean(xs) * 1e3:.3f}", f"{statistics.median(xs) * 1e3:.3f}"


def cmd_bench(args: argparse.Namespace) -> int:
    if args.queries < 0:
        raise CliError("--queries must be non-negative")
    with IndexReader(args.index) as reader:
        live = [v for v, lv in enumerate(reader.level_of) if lv != DELETED]
        rng = random.Random(args.seed)
        pairs = [(rng.choice(live), rng.choice(live)) for _ in range(args.queries)] if live else []
        fetch, search, total = [], [], []
        kinds = {QueryClass.TYPE1: 0, QueryClass.TYPE2: 0}
        membership = {"both_top": 0, "one_top": 0, "no_top": 0}
        for s, t in pairs:
            t0 = time.perf_counter()
            ls = reader.label(s)
            lt = reader.label(t, inbound=True)
            t1 = time.perf_counter()
            s_top, t_top = reader.is_top(s), reader.is_top(t)
            distance_from_labels(ls, lt, s_top, t_top, reader.top_out, reader.top_in, prune=not args.no_prune)
            t2 = time.perf_counter()
            fetch.append(t1 - t0)
            search.append(t2 - t1)
            total.append(t2 - t0)
            kinds[classify_labels(ls, lt, s_top, t_top, reader.top_out)] += 1
            membership[("no_top", "one_top", "both_top")[s_top + t_top]] += 1
        bytes_read = reader.bytes_read
    mean, median = _ms(total)
    fmean, fmedian = _ms(fetch)
    smean, smedian = _ms(search)
    _report(
        [
            ("queries", len(pairs)),
            ("seed", args.seed),
            ("mean_ms", mean),
            ("median_ms", median),
            ("label_mean_ms", fmean),
            ("label_median_ms", fmedian),
            ("search_mean_ms", smean),
            ("search_median_ms", smedian),
            ("label_bytes_read", bytes_read),
            ("type1", kinds[QueryClass.TYPE1]),
            ("type2", kinds[QueryClass.TYPE2]),
            *membership.items(),
        ]
    )
    return 0


def cmd_update(args: argparse.Namespace) -> int:
    if not args.insert and not args.delete:
        raise CliError("nothing to do: pass --insert and/or --delete")
    index = load_index(args.index)
    for spec in args.insert or ():
        u, adj = parse_insert(spec)
        insert_vertex(index, u, adj)
    for u in args.delete or ():
        delete_vertex(index, u)
    save_index(index, args.index)
    lg = index.log
    _report(
        [
            ("inserted", lg.inserted),
            ("deleted", lg.deleted),
            ("touched_labels", lg.touched_labels),
            ("stale", int(lg.stale)),
            ("should_rebuild", int(should_rebuild(lg, RebuildPolicy(args.rebuild_fraction)))),
        ]
    )
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    if args.model == "pa":
        if args.directed:
            raise CliError("the preferential-attachment model is undirected only")
        g = preferential_attachment(args.n, args.avg_degree, seed=args.seed, max_weight=args.max_weight)
    else:
        g = uniform_random(args.n, args.avg_degree, seed=args.seed, max_weight=args.max_weight, directed=args.directed)
    text = g.to_edge_list()
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
        _report([("vertices", g.n), ("edges", g.edge_count)])
    return 0


# -- wiring ------------------------------------------------------------------------


def _sigma(text: str) -> float:
    value = float(text)
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError("sigma must lie in (0, 1]")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="islabel", description="Independent-set based shortest-path label index.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build an index from an edge list")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--sigma", type=_sigma, default=DEFAULT_SIGMA)
    p.add_argument("--max-k", type=int, default=None)
    p.add_argument("--directed", action="store_true")
    p.add_argument("--no-paths", action="store_true", help="omit via data (distance-only index)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="answer distance or path queries from an index")
    p.add_argument("--index", required=True)
    p.add_argument("--pairs", required=True)
    p.add_argument("--path", action="store_true")
    p.add_argument("--directed", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("oracle", help="answer queries with plain Dijkstra on the edge list")
    p.add_argument("--input", required=True)
    p.add_argument("--pairs", required=True)
    p.add_argument("--directed", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("stats", help="print header fields and section sizes")
    p.add_argument("--index", required=True)
    p.add_argument("--full", action="store_true", help="also load the index and print label statistics")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="time seeded random queries, split into label fetch and search")
    p.add_argument("--index", required=True)
    p.add_argument("--queries", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-prune", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("update", help="insert or delete vertices in place")
    p.add_argument("--index", required=True)
    p.add_argument("--insert", action="append", metavar="'u: v1 w1, v2 w2'")
    p.add_argument("--delete", action="append", type=int, metavar="u")
    p.add_argument("--rebuild-fraction", type=float, default=RebuildPolicy().max_fraction)
    p.set_defaults(func=cmd_update)

    p = sub.add_parser("generate", help="write a seeded synthetic edge list")
    p.add_argument("--model", choices=("uniform", "pa"), default="uniform")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--avg-degree", type=float, default=4.0)
    p.add_argument("--max-weight", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--directed", action="store_true")
    p.add_argument("--output", default="-")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(
        level=os.environ.get("ISLABEL_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, GraphFormatError, IndexFormatError, ValueError, KeyError, IndexError, OverflowError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
