import datetime as dt
import random
from fractions import Fraction
from pathlib import Path

import pytest

from spinrank import build_network, validate_commitment
from spinrank.cdr import (
    CallRecord,
    ConnectionStats,
    aggregate,
    commitment_rows,
    emit_edge_files,
    filter_short_calls,
    ingest,
    parse_cdr_line,
    read_cdr,
    restrict_to_subscribers,
)
from spinrank.errors import EmptyInput, Malformed
from spinrank.io import read_edges, read_nodes

FIXTURE = Path(__file__).parent / "data" / "cdr_fixture.txt"


def rec(a, b, d):
    return CallRecord(a, b, dt.date(2005, 8, 1), dt.time(12, 0, 0), d)


def test_parse_line():
    r = parse_cdr_line("1234567,7654321,050813,142305,127")
    assert r == CallRecord("1234567", "7654321", dt.date(2005, 8, 13), dt.time(14, 23, 5), 127)


def test_zero_duration_is_valid():
    assert parse_cdr_line("A,B,050801,000000,0").duration_s == 0


@pytest.mark.parametrize("line", [
    "A,B,050801,000000",
    "A,B,050801,000000,1,2",
    "A,B,0508,000000,5",
    "A,B,051301,000000,5",
    "A,B,050801,250000,5",
    "A,B,050801,000000,-4",
    ",B,050801,000000,4",
])
def test_malformed_lines(line):
    with pytest.raises(Malformed):
        parse_cdr_line(line, 9)


def test_read_cdr_lenient_counts():
    from spinrank.cdr import ReadStats
    st = ReadStats()
    out = list(read_cdr(["A,B,050801,000000,4\n", "\n", "bad\n"], lenient=True, stats=st))
    assert len(out) == 1 and st.lines == 2 and st.malformed == 1
    with pytest.raises(Malformed) as exc:
        list(read_cdr(["A,B,050801,000000,4", "bad"]))
    assert exc.value.line_no == 2


def test_short_call_filter():
    recs = [rec("A", "B", d) for d in (0, 1, 2, 3, 33)]
    kept = list(filter_short_calls(recs))
    assert [r.duration_s for r in kept] == [3, 33]
    assert list(filter_short_calls(kept)) == kept


def test_subscriber_restriction():
    recs = [rec("A", "B", 5), rec("B", "A", 5), rec("A", "X", 5)]
    kept = list(restrict_to_subscribers(recs))
    assert [(r.caller, r.receiver) for r in kept] == [("A", "B"), ("B", "A")]
    assert list(restrict_to_subscribers(recs, {"A"})) == [recs[1]]


def test_aggregate_example():
    recs = [rec("A", "B", 10), rec("A", "B", 20), rec("A", "C", 5), rec("B", "A", 7)]
    users, conns = aggregate(recs)
    assert [(c.a, c.b, c.calls, c.duration_s) for c in conns] == [
        ("A", "B", 2, 30), ("A", "C", 1, 5), ("B", "A", 1, 7)]
    a = users[0]
    assert (a.label, a.dialled_calls, a.received_calls, a.outgoing_duration_s,
            a.incoming_duration_s, a.distinct_callees, a.distinct_callers) == ("A", 3, 1, 35, 7, 2, 1)
    shuffled = recs[:]
    random.Random(1).shuffle(shuffled)
    assert aggregate(shuffled) == (users, conns)


def test_emit_examples(tmp_path):
    conns = [ConnectionStats("A", "B", 3, 60), ConnectionStats("A", "C", 1, 0)]
    s = emit_edge_files(conns, "count", tmp_path / "n.txt", tmp_path / "e.txt")
    assert read_edges(tmp_path / "e.txt") == [("A", "B", 0.75), ("A", "C", 0.25)]
    assert s.nodes == 3 and s.edges == 2
    emit_edge_files(conns, "duration", tmp_path / "n.txt", tmp_path / "d.txt")
    assert (tmp_path / "d.txt").read_text().strip().splitlines()[-1] == "A;B;1"
    assert read_nodes(tmp_path / "n.txt") == ["A", "B", "C"]
    with pytest.raises(EmptyInput):
        emit_edge_files([], "count", tmp_path / "n.txt", tmp_path / "e.txt")
    with pytest.raises(ValueError):
        commitment_rows(conns, "bytes")


# (calls, seconds) per retained connection in the fixture, computed by hand
FIXTURE_CONNS = {
    ("A", "B"): (4, 100), ("A", "C"): (2, 20),
    ("B", "A"): (3, 120), ("B", "C"): (1, 60), ("B", "D"): (4, 12),
    ("C", "A"): (6, 57), ("C", "B"): (2, 40),
    ("D", "A"): (3, 75), ("D", "B"): (1, 45), ("D", "E"): (2, 10),
    ("E", "A"): (1, 13), ("E", "D"): (3, 180),
}
FIXTURE_USERS = {
    "A": (6, 13, 120, 265, 2, 4),
    "B": (8, 7, 192, 185, 3, 3),
    "C": (8, 3, 97, 80, 2, 2),
    "D": (6, 7, 130, 192, 3, 2),
    "E": (4, 2, 193, 10, 2, 1),
}


def expected_weights(idx):
    tot = {}
    for (a, _), v in FIXTURE_CONNS.items():
        tot[a] = tot.get(a, 0) + v[idx]
    return {k: Fraction(v[idx], tot[k[0]]) for k, v in FIXTURE_CONNS.items()}


def test_fixture_ingest(tmp_path):
    s = ingest(FIXTURE, tmp_path, lenient=True)
    assert (s.total_calls, s.malformed_lines, s.short_calls_removed, s.zero_duration_calls,
            s.non_subscriber_calls_removed, s.retained_calls) == (49, 1, 11, 4, 6, 32)
    assert (s.callers, s.receivers, s.distinct_pairs, s.both_caller_and_receiver) == (6, 8, 18, 6)
    assert (s.network_users, s.network_connections) == (5, 12)

    conns = {}
    for line in (tmp_path / "connections.csv").read_text().splitlines()[1:]:
        a, b, c, d = line.split(";")
        conns[(a, b)] = (int(c), int(d))
    assert conns == FIXTURE_CONNS

    users = {}
    for line in (tmp_path / "users.csv").read_text().splitlines()[1:]:
        f = line.split(";")
        users[f[0]] = tuple(int(v) for v in f[1:])
    assert users == FIXTURE_USERS

    assert read_nodes(tmp_path / "nodes.txt") == ["A", "B", "C", "D", "E"]
    for kind, idx, tol in (("count", 0, 0.0), ("duration", 1, 1e-12)):
        rows = read_edges(tmp_path / f"edges_{kind}.txt")
        want = expected_weights(idx)
        assert {(a, b) for a, b, _ in rows} == set(want)
        for a, b, w in rows:
            assert w == pytest.approx(float(want[(a, b)]), abs=tol)
        assert validate_commitment(build_network(rows), tol=1e-9).ok
    assert "retained_calls:32" in (tmp_path / "summary.txt").read_text()


def test_fixture_strict_reports_line(tmp_path):
    with pytest.raises(Malformed) as exc:
        ingest(FIXTURE, tmp_path)
    assert exc.value.line_no == 18


def test_ingest_is_order_independent(tmp_path):
    lines = FIXTURE.read_text().splitlines(keepends=True)
    random.Random(11).shuffle(lines)
    shuffled = tmp_path / "shuf.txt"
    shuffled.write_text("".join(lines))
    ingest(FIXTURE, tmp_path / "a", lenient=True)
    ingest(shuffled, tmp_path / "b", lenient=True)
    for name in ("users.csv", "connections.csv", "edges_count.txt", "edges_duration.txt"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
