"""Call-detail-record ingestion.

Input lines look like ``caller,receiver,YYMMDD,HHMMSS,duration``. The
cleaning order is: parse -> drop short calls -> keep only calls whose
receiver is also a caller (a subscriber) -> aggregate per user and per
ordered pair.
"""
from __future__ import annotations

import datetime as dt
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import EmptyInput, Malformed
from .io import write_edges, write_nodes

DEFAULT_MIN_DURATION = 3


@dataclass(frozen=True)
class CallRecord:
    caller: str
    receiver: str
    date: dt.date
    time: dt.time
    duration_s: int


@dataclass
class UserStats:
    label: str
    dialled_calls: int = 0
    received_calls: int = 0
    outgoing_duration_s: int = 0
    incoming_duration_s: int = 0
    distinct_callees: int = 0
    distinct_callers: int = 0


@dataclass
class ConnectionStats:
    a: str
    b: str
    calls: int
    duration_s: int


def parse_cdr_line(line: str, line_no: int = 0) -> CallRecord:
    fields = [f.strip() for f in line.strip().split(",")]
    if len(fields) != 5:
        raise Malformed(line_no, f"expected 5 comma-separated fields, got {len(fields)}")
    caller, receiver, date_s, time_s, dur_s = fields
    if not caller or not receiver:
        raise Malformed(line_no, "empty caller or receiver")
    if len(date_s) != 6 or not date_s.isdigit():
        raise Malformed(line_no, f"date {date_s!r} is not YYMMDD")
    if len(time_s) != 6 or not time_s.isdigit():
        raise Malformed(line_no, f"time {time_s!r} is not HHMMSS")
    try:
        date = dt.date(2000 + int(date_s[:2]), int(date_s[2:4]), int(date_s[4:]))
        tod = dt.time(int(time_s[:2]), int(time_s[2:4]), int(time_s[4:]))
    except ValueError as exc:
        raise Malformed(line_no, f"invalid date/time: {exc}") from None
    if not dur_s.isdigit():
        raise Malformed(line_no, f"duration {dur_s!r} is not a non-negative integer")
    return CallRecord(caller, receiver, date, tod, int(dur_s))


@dataclass
class ReadStats:
    lines: int = 0
    malformed: int = 0


def read_cdr(lines: Iterable[str], lenient: bool = False, stats: ReadStats | None = None) -> Iterator[CallRecord]:
    """Parse lines lazily. Blank lines are skipped; malformed ones raise
    unless ``lenient``, in which case they are counted in ``stats``."""
    for no, line in enumerate(lines, 1):
        if not line.strip():
            continue
        if stats is not None:
            stats.lines += 1
        try:
            yield parse_cdr_line(line, no)
        except Malformed:
            if not lenient:
                raise
            if stats is not None:
                stats.malformed += 1


def filter_short_calls(records: Iterable[CallRecord], min_duration_s: int = DEFAULT_MIN_DURATION) -> Iterator[CallRecord]:
    if min_duration_s < 0:
        raise ValueError("min_duration_s must be >= 0")
    return (r for r in records if r.duration_s >= min_duration_s)


def restrict_to_subscribers(records: Iterable[CallRecord], subscribers: set[str] | None = None) -> Iterator[CallRecord]:
    """Keep calls whose receiver is a subscriber.

    Without ``subscribers`` the records are materialized once to collect the
    caller set; pass the set explicitly to stay streaming.
    """
    if subscribers is None:
        records = list(records)
        subscribers = {r.caller for r in records}
    return (r for r in records if r.receiver in subscribers)


def aggregate(records: Iterable[CallRecord]) -> tuple[list[UserStats], list[ConnectionStats]]:
    pairs: dict[tuple[str, str], list[int]] = defaultdict(lambda: [0, 0])
    for r in records:
        p = pairs[(r.caller, r.receiver)]
        p[0] += 1
        p[1] += r.duration_s

    users: dict[str, UserStats] = {}

    def user(lb):
        u = users.get(lb)
        if u is None:
            u = users[lb] = UserStats(lb)
        return u

    for (a, b), (calls, dur) in pairs.items():
        ua, ub = user(a), user(b)
        ua.dialled_calls += calls
        ua.outgoing_duration_s += dur
        ua.distinct_callees += 1
        ub.received_calls += calls
        ub.incoming_duration_s += dur
        ub.distinct_callers += 1

    conns = [ConnectionStats(a, b, c, d) for (a, b), (c, d) in sorted(pairs.items())]
    return [users[k] for k in sorted(users)], conns


def commitment_rows(connections: list[ConnectionStats], kind: str = "count"):
    """``(a, b, w)`` with ``w = N(a->b)/N(a)`` (count) or ``T(a->b)/T(a)`` (duration)."""
    if kind not in ("count", "duration"):
        raise ValueError(f"kind must be 'count' or 'duration', not {kind!r}")
    attr = "calls" if kind == "count" else "duration_s"
    totals: dict[str, int] = defaultdict(int)
    for c in connections:
        totals[c.a] += getattr(c, attr)
    rows = []
    for c in sorted(connections, key=lambda c: (c.a, c.b)):
        v = getattr(c, attr)
        if v > 0:
            rows.append((c.a, c.b, v / totals[c.a]))
    return rows


def _fmt12(w: float) -> str:
    return format(w, ".12g")


@dataclass
class EdgeFileSummary:
    kind: str
    nodes: int
    edges: int
    node_path: str
    edge_path: str


def emit_edge_files(connections: list[ConnectionStats], kind: str, node_path, edge_path) -> EdgeFileSummary:
    """Write the node list and the ``A;B;w`` commitment edge file."""
    if not connections:
        raise EmptyInput("no connections to write")
    rows = commitment_rows(connections, kind)
    labels = sorted({c.a for c in connections} | {c.b for c in connections})
    formatter = _fmt12 if kind == "duration" else repr
    n_nodes = write_nodes(node_path, labels)
    n_edges = write_edges(edge_path, rows, formatter)
    return EdgeFileSummary(kind, n_nodes, n_edges, str(node_path), str(edge_path))


@dataclass
class IngestSummary:
    total_calls: int = 0
    malformed_lines: int = 0
    zero_duration_calls: int = 0
    short_calls_removed: int = 0
    non_subscriber_calls_removed: int = 0
    retained_calls: int = 0
    callers: int = 0
    receivers: int = 0
    distinct_pairs: int = 0
    both_caller_and_receiver: int = 0
    network_users: int = 0
    network_connections: int = 0
    files: dict[str, str] = field(default_factory=dict)

    def format(self) -> str:
        lines = [f"{k}:{v}" for k, v in vars(self).items() if k != "files"]
        lines += [f"{k}:{v}" for k, v in self.files.items()]
        return "\n".join(lines) + "\n"


def _open_lines(path):
    with open(path, encoding="utf-8") as fh:
        yield from fh


def ingest(cdr_path, out_dir, min_duration_s: int = DEFAULT_MIN_DURATION, lenient: bool = False) -> IngestSummary:
    """Run the full cleaning pipeline over a CDR file and write all outputs.

    Two streaming passes over the input: the first collects the subscriber
    set (callers after the short-call filter) and raw counts, the second
    filters and aggregates.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = IngestSummary()

    read_stats = ReadStats()
    callers: set[str] = set()
    receivers: set[str] = set()
    raw_pairs: set[tuple[str, str]] = set()
    subscribers: set[str] = set()
    for r in read_cdr(_open_lines(cdr_path), lenient, read_stats):
        summary.total_calls += 1
        callers.add(r.caller)
        receivers.add(r.receiver)
        raw_pairs.add((r.caller, r.receiver))
        if r.duration_s == 0:
            summary.zero_duration_calls += 1
        if r.duration_s >= min_duration_s:
            subscribers.add(r.caller)
        else:
            summary.short_calls_removed += 1
    summary.malformed_lines = read_stats.malformed
    summary.callers = len(callers)
    summary.receivers = len(receivers)
    summary.distinct_pairs = len(raw_pairs)
    summary.both_caller_and_receiver = len(callers & receivers)
    del callers, receivers, raw_pairs

    kept = 0

    def counted(stream):
        nonlocal kept
        for r in stream:
            kept += 1
            yield r

    records = read_cdr(_open_lines(cdr_path), lenient=True)
    records = filter_short_calls(records, min_duration_s)
    users, conns = aggregate(counted(restrict_to_subscribers(records, subscribers)))
    summary.retained_calls = kept
    summary.non_subscriber_calls_removed = summary.total_calls - summary.short_calls_removed - kept
    summary.network_users = len(users)
    summary.network_connections = len(conns)

    write_user_table(out / "users.csv", users)
    write_connection_table(out / "connections.csv", conns)
    summary.files["users"] = str(out / "users.csv")
    summary.files["connections"] = str(out / "connections.csv")
    if conns:
        for kind in ("count", "duration"):
            s = emit_edge_files(conns, kind, out / "nodes.txt", out / f"edges_{kind}.txt")
            summary.files[f"edges_{kind}"] = s.edge_path
        summary.files["nodes"] = str(out / "nodes.txt")
    (out / "summary.txt").write_text(summary.format(), encoding="utf-8")
    return summary


def write_user_table(path, users: list[UserStats]):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# user;dialled;received;out_s;in_s;callees;callers\n")
        for u in users:
            fh.write(
                f"{u.label};{u.dialled_calls};{u.received_calls};{u.outgoing_duration_s};"
                f"{u.incoming_duration_s};{u.distinct_callees};{u.distinct_callers}\n"
            )


def write_connection_table(path, conns: list[ConnectionStats]):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# a;b;calls;duration_s\n")
        for c in conns:
            fh.write(f"{c.a};{c.b};{c.calls};{c.duration_s}\n")

