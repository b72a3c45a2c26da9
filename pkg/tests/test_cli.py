from __future__ import annotations

import pytest

from islabel.cli import main, parse_insert
from islabel.store import load_index


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(text: str) -> dict[str, str]:
    return dict(line.split("=", 1) for line in text.splitlines())


@pytest.fixture
def graph_file(tmp_path, capsys):
    path = tmp_path / "g.txt"
    code, _, _ = run(capsys, "generate", "--n", "400", "--avg-degree", "3", "--max-weight", "5", "--seed", "4",
                     "--output", str(path))  # fmt: skip
    assert code == 0
    return path


@pytest.fixture
def pairs_file(tmp_path):
    path = tmp_path / "pairs.txt"
    path.write_text("".join(f"{(i * 37) % 400} {(i * 91 + 5) % 400}\n" for i in range(150)))
    return path


def test_query_matches_oracle(tmp_path, capsys, graph_file, pairs_file):
    idx = tmp_path / "g.isl"
    code, out, _ = run(capsys, "build", "--input", str(graph_file), "--output", str(idx))
    assert code == 0 and int(report(out)["index_bytes"]) == idx.stat().st_size
    _, answers, _ = run(capsys, "query", "--index", str(idx), "--pairs", str(pairs_file))
    _, expected, _ = run(capsys, "oracle", "--input", str(graph_file), "--pairs", str(pairs_file))
    assert answers == expected and len(answers.splitlines()) == 150
    _, threaded, _ = run(capsys, "query", "--index", str(idx), "--pairs", str(pairs_file), "--workers", "4")
    assert threaded == answers


def test_query_paths(tmp_path, capsys):
    g = tmp_path / "g.txt"
    g.write_text("10 20 1\n20 30 2\n40 50 1\n")
    pairs = tmp_path / "p.txt"
    pairs.write_text("10 30\n30 10\n10 40\n20 20\n")
    idx = tmp_path / "g.isl"
    run(capsys, "build", "--input", str(g), "--output", str(idx))
    _, out, _ = run(capsys, "query", "--index", str(idx), "--pairs", str(pairs), "--path")
    assert out.splitlines() == ["10 30 3 10,20,30", "30 10 3 30,20,10", "10 40 INF", "20 20 0 20"]


def test_build_report_for_short_path(tmp_path, capsys):
    g = tmp_path / "g.txt"
    g.write_text("0 1 1\n1 2 1\n")
    code, out, _ = run(capsys, "build", "--input", str(g), "--output", str(tmp_path / "g.isl"), "--sigma", "0.5")
    rep = report(out)
    assert code == 0
    assert (rep["k"], rep["vertices"], rep["top_vertices"], rep["top_edges"]) == ("2", "3", "1", "0")


def test_empty_input_builds(tmp_path, capsys):
    g = tmp_path / "g.txt"
    g.write_text("# nothing\n")
    code, out, _ = run(capsys, "build", "--input", str(g), "--output", str(tmp_path / "g.isl"))
    assert code == 0 and report(out)["k"] == "1" and report(out)["vertices"] == "0"
    code, out, _ = run(capsys, "bench", "--index", str(tmp_path / "g.isl"), "--queries", "10")
    assert code == 0 and report(out)["queries"] == "0"


def test_builds_are_deterministic(tmp_path, capsys, graph_file):
    a, b = tmp_path / "a.isl", tmp_path / "b.isl"
    run(capsys, "build", "--input", str(graph_file), "--output", str(a))
    run(capsys, "build", "--input", str(graph_file), "--output", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_stats_and_bench(tmp_path, capsys, graph_file):
    idx = tmp_path / "g.isl"
    run(capsys, "build", "--input", str(graph_file), "--output", str(idx))
    code, out, _ = run(capsys, "stats", "--index", str(idx), "--full")
    rep = report(out)
    assert code == 0 and rep["vertices"] == "400" and rep["stale"] == "0"
    assert int(rep["file_bytes"]) == idx.stat().st_size
    code, out, _ = run(capsys, "bench", "--index", str(idx), "--queries", "0")
    assert code == 0 and report(out)["mean_ms"] == "0.000"
    _, out, _ = run(capsys, "bench", "--index", str(idx), "--queries", "200", "--seed", "3")
    rep = report(out)
    assert int(rep["type1"]) + int(rep["type2"]) == 200
    assert int(rep["both_top"]) + int(rep["one_top"]) + int(rep["no_top"]) == 200
    assert int(rep["label_bytes_read"]) > 0


def test_update_round_trip(tmp_path, capsys, graph_file):
    idx = tmp_path / "g.isl"
    run(capsys, "build", "--input", str(graph_file), "--output", str(idx))
    code, out, _ = run(capsys, "update", "--index", str(idx), "--insert", "1000: 3 2, 7", "--insert", "1001: 1000 1")
    rep = report(out)
    assert code == 0 and rep["inserted"] == "2" and rep["stale"] == "0" and rep["should_rebuild"] == "0"
    loaded = load_index(idx)
    assert loaded.distance(loaded.internal(1001), loaded.internal(3)) == 3
    code, out, _ = run(capsys, "update", "--index", str(idx), "--delete", "1001", "--rebuild-fraction", "0.001")
    assert report(out)["deleted"] == "1" and report(out)["should_rebuild"] == "1"


def test_parse_insert():
    assert parse_insert("5: 1 2, 3") == (5, [(1, 2), (3, 1)])
    assert parse_insert("5:") == (5, [])


@pytest.mark.parametrize(
    "argv, fragment",
    [
        (["update", "--index", "IDX", "--insert", "nonsense"], "insert spec"),
        (["update", "--index", "IDX", "--delete", "99999"], "unknown vertex"),
        (["query", "--index", "IDX", "--pairs", "IDX", "--directed"], "undirected"),
        (["stats", "--index", "MISSING"], "error"),
        (["build", "--input", "MISSING", "--output", "x.isl"], "error"),
    ],
)
def test_errors_exit_nonzero(tmp_path, capsys, graph_file, argv, fragment):
    idx = tmp_path / "g.isl"
    run(capsys, "build", "--input", str(graph_file), "--output", str(idx))
    argv = [str(idx) if a == "IDX" else str(tmp_path / a) if a == "MISSING" else a for a in argv]
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert err.startswith("error:") and fragment in err


def test_bad_edge_line_reports_line_number(tmp_path, capsys):
    g = tmp_path / "g.txt"
    g.write_text("0 1 1\n1 2 zero\n")
    code, _, err = run(capsys, "build", "--input", str(g), "--output", str(tmp_path / "g.isl"))
    assert code == 1 and "line 2" in err


def test_generate_to_stdout(capsys):
    code, out, _ = run(capsys, "generate", "--model", "pa", "--n", "50", "--avg-degree", "4", "--seed", "1")
    assert code == 0 and out.count("\n") >= 49
