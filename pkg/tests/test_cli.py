import subprocess
import sys
from pathlib import Path

import pytest

from spinrank.cli import run
from spinrank.io import read_edges, read_nodes

FIXTURE = Path(__file__).parent / "data" / "cdr_fixture.txt"


@pytest.fixture
def chain_files(tmp_path):
    (tmp_path / "nodes.txt").write_text("A\nB\nC\n")
    (tmp_path / "edges.txt").write_text("A;B;1\nB;C;1\nC;B;1\n")
    return tmp_path / "nodes.txt", tmp_path / "edges.txt"


def read_spin(path):
    out = {}
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            continue
        m, v, r = line.split(";")
        out[m] = (float(v), int(r))
    return out


def test_spin_chain(chain_files, tmp_path):
    n, e = chain_files
    out = tmp_path / "sp.txt"
    assert run(["spin", str(n), str(e), "--tau", "1e-12", "--out", str(out)]) == 0
    res = read_spin(out)
    assert res["A"][0] == pytest.approx(0.5, abs=1e-9)
    assert res["B"][0] == pytest.approx(4 / 3, abs=1e-9)
    assert res["C"][0] == pytest.approx(7 / 6, abs=1e-9)
    assert [res[k][1] for k in "ABC"] == [3, 1, 2]


@pytest.mark.parametrize("variant", ["nodes", "hybrid"])
def test_spin_variants_agree(chain_files, tmp_path, variant):
    n, e = chain_files
    run(["spin", str(n), str(e), "--out", str(tmp_path / "a")])
    run(["spin", str(n), str(e), "--variant", variant, "--chunk-size", "1", "--out", str(tmp_path / "b")])
    assert (tmp_path / "a").read_text() == (tmp_path / "b").read_text()


def test_spin_rejects_non_commitment(tmp_path):
    (tmp_path / "e.txt").write_text("A;B;0.5\nB;A;1\n")
    (tmp_path / "n.txt").write_text("A\nB\n")
    assert run(["spin", str(tmp_path / "n.txt"), str(tmp_path / "e.txt")]) == 1
    assert run(["spin", str(tmp_path / "n.txt"), str(tmp_path / "e.txt"), "--no-validate",
                "--out", str(tmp_path / "o")]) == 0


def test_log_dir_env_override(chain_files, tmp_path, monkeypatch):
    n, e = chain_files
    env_dir = tmp_path / "envlogs"
    monkeypatch.setenv("SPINRANK_LOG_DIR", str(env_dir))
    assert run(["spin", str(n), str(e), "--log-dir", str(tmp_path / "arglogs"), "--snapshots",
                "--out", str(tmp_path / "o")]) == 0
    assert (env_dir / "iterations.csv").exists()
    assert (env_dir / "sp_0001.txt").exists()
    assert not (tmp_path / "arglogs").exists()


def test_quiet_does_not_change_output(chain_files, tmp_path):
    n, e = chain_files
    run(["spin", str(n), str(e), "--out", str(tmp_path / "a")])
    run(["--quiet", "spin", str(n), str(e), "--out", str(tmp_path / "b")])
    run(["spin", str(n), str(e), "--quiet", "--out", str(tmp_path / "c")])
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes() == (tmp_path / "c").read_bytes()


def test_compare_self(tmp_path, capsys):
    p = tmp_path / "s.txt"
    p.write_text("A;3\nB;1\nC;2\n")
    assert run(["compare", str(p), str(p)]) == 0
    assert capsys.readouterr().out.strip() == "1.0"
    q = tmp_path / "r.txt"
    q.write_text("C;2\nB;3\nA;1\n")
    assert run(["compare", str(p), str(q)]) == 0
    assert float(capsys.readouterr().out) == -1.0


def test_compare_member_mismatch(tmp_path):
    (tmp_path / "a").write_text("A;1\nB;2\n")
    (tmp_path / "b").write_text("A;1\nC;2\n")
    assert run(["compare", str(tmp_path / "a"), str(tmp_path / "b")]) == 1


def test_rank_and_stats(tmp_path, capsys):
    p = tmp_path / "s.txt"
    p.write_text("# member;score\nA;5\nB;5\nC;3\n")
    assert run(["rank", str(p), "--out", str(tmp_path / "r")]) == 0
    assert (tmp_path / "r").read_text().splitlines()[1:] == ["A;5;1", "B;5;1", "C;3;3"]
    assert run(["stats", str(p)]) == 0
    out = capsys.readouterr().out
    assert "duplicates: 1" in out and "33.33" in out


def test_gen_errors_and_output(tmp_path):
    assert run(["gen", "--nodes", "3", "--edges", "7", "--out-dir", str(tmp_path)]) == 1
    assert run(["gen", "--nodes", "100", "--edges", "20", "--out-dir", str(tmp_path)]) == 1
    assert run(["gen", "--nodes", "50", "--edges", "200", "--seed", "4", "--out-dir", str(tmp_path / "g")]) == 0
    assert len(read_nodes(tmp_path / "g" / "nodes.txt")) == 50
    assert len(read_edges(tmp_path / "g" / "edges.txt")) == 200
    first = (tmp_path / "g" / "edges.txt").read_bytes()
    run(["--seed", "4", "gen", "--nodes", "50", "--edges", "200", "--out-dir", str(tmp_path / "h")])
    assert (tmp_path / "h" / "edges.txt").read_bytes() == first


def test_ingest_and_centrality(tmp_path):
    out = tmp_path / "cdr"
    assert run(["ingest", str(FIXTURE), "--out-dir", str(out)]) == 1
    assert run(["ingest", str(FIXTURE), "--lenient", "--out-dir", str(out)]) == 0
    for measure in ("degree", "closeness", "betweenness", "proximity_prestige"):
        dest = tmp_path / f"{measure}.txt"
        assert run(["--threads", "2", "centrality", str(out / "nodes.txt"), str(out / "edges_count.txt"),
                    "--measure", measure, "--normalized", "--out", str(dest)]) == 0
        lines = dest.read_text().splitlines()
        assert lines[0].startswith(f"# measure={measure}")
        assert len(lines) == 6
    assert run(["spin", str(out / "nodes.txt"), str(out / "edges_duration.txt"),
                "--out", str(tmp_path / "sp")]) == 0


def test_commit_modes(tmp_path):
    raw = tmp_path / "raw.txt"
    raw.write_text("A;B;3;30\nA;C;1;90\nB;A;2;10\n")
    assert run(["commit", str(raw), "--out", str(tmp_path / "c"), "--nodes-out", str(tmp_path / "n")]) == 0
    rows = {(a, b): w for a, b, w in read_edges(tmp_path / "c")}
    assert rows[("A", "B")] == 0.75 and rows[("B", "A")] == 1.0 and rows[("C", "A")] == 1.0
    assert run(["commit", str(raw), "--mode", "duration", "--out", str(tmp_path / "d")]) == 0
    rows = {(a, b): w for a, b, w in read_edges(tmp_path / "d")}
    assert rows[("A", "C")] == 0.75
    dec = tmp_path / "dec.txt"
    dec.write_text("A;B;1;0\nA;C;1;1\nB;A;1;0\n")
    assert run(["commit", str(dec), "--mode", "decay", "--lambda", "0.5", "--periods", "2",
                "--out", str(tmp_path / "e")]) == 0
    rows = {(a, b): w for a, b, w in read_edges(tmp_path / "e")}
    assert rows[("A", "B")] == pytest.approx(2 / 3)
    assert run(["commit", str(dec), "--mode", "decay", "--lambda", "1.5", "--out", str(tmp_path / "f")]) == 1


def test_bench_cli(tmp_path):
    grid = tmp_path / "grid.csv"
    grid.write_text("nodes,edges,seed\n40,120,1\n")
    assert run(["bench", "--grid", str(grid), "--iterations", "2", "--out", str(tmp_path / "b.csv"),
                "--ratios", str(tmp_path / "r.csv")]) == 0
    assert len((tmp_path / "b.csv").read_text().splitlines()) == 4
    assert "nodes_over_edges" in (tmp_path / "r.csv").read_text()
    assert run(["bench", "--grid", str(grid), "--variants", "nodes,gpu"]) == 1


@pytest.mark.parametrize("argv", [
    [],
    ["spin"],
    ["frobnicate"],
    ["spin", "n", "e", "--epsilon", "1.5"],
    ["--threads", "0", "rank", "x"],
])
def test_usage_errors_exit_one(argv):
    assert run(argv) == 1


def test_missing_file_exit_one(tmp_path):
    assert run(["rank", str(tmp_path / "nope.txt")]) == 1


def test_console_entry_point(tmp_path):
    p = tmp_path / "s.txt"
    p.write_text("A;1\nB;2\n")
    proc = subprocess.run([sys.executable, "-m", "spinrank.cli", "compare", str(p), str(p)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "1.0"
