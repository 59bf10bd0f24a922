"""Command-line entry point: ``spinrank <subcommand> ...``.

Exit codes: 0 success, 1 bad input or usage, 2 internal invariant failure.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys

from . import bench as benchmod
from . import cdr, centrality, commitment, io, netgen, ranking
from .errors import InputError, InvariantError, Malformed
from .graph import validate_commitment
from .spin import SpinConfig, run_spin

log = logging.getLogger("spinrank")

LOG_DIR_ENV = "SPINRANK_LOG_DIR"


class UsageError(InputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _global_options(p: argparse.ArgumentParser, suppress: bool):
    # Subcommands repeat the global flags with suppressed defaults so they
    # may appear on either side of the subcommand name.
    def dflt(value):
        return argparse.SUPPRESS if suppress else value

    p.add_argument("--threads", type=int, default=dflt(1),
                   help="worker processes for path-based centralities")
    p.add_argument("--seed", type=int, default=dflt(0))
    p.add_argument("--quiet", action="store_true", default=dflt(False))


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    _global_options(common, suppress=True)

    p = _Parser(prog="spinrank", description="Social Position key-user extraction")
    _global_options(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("ingest", parents=[common], help="clean CDR data into node/edge files")
    s.add_argument("cdr")
    s.add_argument("--min-duration", type=int, default=cdr.DEFAULT_MIN_DURATION)
    s.add_argument("--out-dir", required=True)
    s.add_argument("--lenient", action="store_true", help="skip malformed lines instead of failing")

    s = sub.add_parser("commit", parents=[common], help="normalize raw activity into commitment edges")
    s.add_argument("edges", help="A;B;activity rows (count/duration modes also accept A;B;calls;seconds)")
    s.add_argument("--mode", choices=["count", "duration", "decay"], default="count")
    s.add_argument("--lambda", dest="lam", type=float, default=1.0)
    s.add_argument("--periods", type=int, default=1)
    s.add_argument("--out", required=True, help="output edge file")
    s.add_argument("--nodes-out", help="also write the member list here")

    s = sub.add_parser("spin", parents=[common], help="compute Social Position")
    s.add_argument("nodes")
    s.add_argument("edges")
    s.add_argument("--variant", choices=["nodes", "edges", "hybrid"], default="edges")
    s.add_argument("--epsilon", type=float, default=0.5)
    s.add_argument("--tau", type=float, default=1e-5)
    s.add_argument("--stop", choices=["per-member", "sum"], default="per-member")
    s.add_argument("--max-iter", type=int, default=100)
    s.add_argument("--initial-sp", type=float, default=1.0)
    s.add_argument("--chunk-size", type=int, default=8192)
    s.add_argument("--log-dir")
    s.add_argument("--snapshots", action="store_true", help="write member;sp per iteration into the log dir")
    s.add_argument("--no-validate", action="store_true")
    s.add_argument("--out", help="output file (default stdout)")

    s = sub.add_parser("centrality", parents=[common], help="classical centrality baselines")
    s.add_argument("nodes")
    s.add_argument("edges")
    s.add_argument("--measure", choices=list(centrality.MEASURES), default="degree")
    s.add_argument("--normalized", action="store_true")
    s.add_argument("--out")

    s = sub.add_parser("rank", parents=[common], help="competition ranking of a score file")
    s.add_argument("scores")
    s.add_argument("--out")

    s = sub.add_parser("compare", parents=[common], help="Kendall coefficient of two score files")
    s.add_argument("a")
    s.add_argument("b")

    s = sub.add_parser("stats", parents=[common], help="distribution and duplicate report")
    s.add_argument("scores")

    s = sub.add_parser("gen", parents=[common], help="generate a random commitment network")
    s.add_argument("--nodes", type=int, required=True)
    s.add_argument("--edges", type=int, required=True)
    s.add_argument("--weight-mode", choices=list(netgen.WEIGHT_MODES), default="uniform_normalized")
    s.add_argument("--allow-isolated", action="store_true")
    s.add_argument("--out-dir", default=".")

    s = sub.add_parser("bench", parents=[common], help="time SPIN variants over a network grid")
    s.add_argument("--grid", help="CSV nodes,edges,seed (default: the 25-network grid)")
    s.add_argument("--epsilon", type=float, default=0.8)
    s.add_argument("--variants", default="nodes,edges,hybrid")
    s.add_argument("--repetitions", type=int, default=1)
    s.add_argument("--iterations", type=int, default=5, help="timed iterations per run")
    s.add_argument("--chunk-size", type=int, default=8192)
    s.add_argument("--out", help="bench CSV (default stdout)")
    s.add_argument("--ratios", help="also write the time-ratio table here")
    return p


def _check_args(args):
    if getattr(args, "threads", 1) < 1:
        raise UsageError("--threads must be >= 1")
    if args.command == "ingest" and args.min_duration < 0:
        raise UsageError("--min-duration must be >= 0")
    if args.command == "commit" and args.mode == "decay":
        if not 0 < args.lam <= 1:
            raise UsageError("--lambda must be in (0, 1]")
        if args.periods < 1:
            raise UsageError("--periods must be >= 1")
    if args.command == "spin":
        if not 0 < args.epsilon < 1:
            raise UsageError("--epsilon must be in (0, 1)")
        if args.tau < 0:
            raise UsageError("--tau must be >= 0")
        if args.max_iter < 1:
            raise UsageError("--max-iter must be >= 1")
        if args.chunk_size < 1:
            raise UsageError("--chunk-size must be >= 1")
    if args.command == "bench":
        if not 0 < args.epsilon < 1:
            raise UsageError("--epsilon must be in (0, 1)")
        bad = set(args.variants.split(",")) - set(("nodes", "edges", "hybrid"))
        if bad:
            raise UsageError(f"--variants: unknown variant(s) {', '.join(sorted(bad))}")
    if args.command == "gen" and (args.nodes < 2 or args.edges < 1):
        raise UsageError("--nodes must be >= 2 and --edges >= 1")


def _writer(path):
    if path is None:
        return sys.stdout
    return open(path, "w", encoding="utf-8")


def _emit(path, text: str):
    fh = _writer(path)
    try:
        fh.write(text)
    finally:
        if fh is not sys.stdout:
            fh.close()


def cmd_ingest(args):
    summary = cdr.ingest(args.cdr, args.out_dir, args.min_duration, args.lenient)
    if not args.quiet:
        sys.stderr.write(summary.format())


def cmd_commit(args):
    rows = []
    for no, row in io.iter_rows(args.edges):
        try:
            if args.mode == "decay":
                if len(row) != 4:
                    raise ValueError("expected A;B;activity;period")
                rows.append((row[0], row[1], float(row[2]), int(row[3])))
            elif len(row) == 3:
                rows.append((row[0], row[1], float(row[2])))
            elif len(row) == 4:
                col = 2 if args.mode == "count" else 3
                rows.append((row[0], row[1], float(row[col])))
            else:
                raise ValueError(f"unexpected field count {len(row)}")
        except ValueError as exc:
            raise Malformed(no, str(exc)) from None
    if not rows:
        raise InputError("no activity rows")
    if args.mode == "decay":
        acts = commitment.ActivityMatrix.from_labelled(rows, periods=args.periods)
        decay = commitment.TimeDecayConfig(args.lam, args.periods)
    else:
        acts = commitment.ActivityMatrix.from_labelled(rows)
        decay = None
    net = commitment.commitment_network(acts, decay)
    io.write_edges(args.out, net.labelled_edges())
    if args.nodes_out:
        io.write_nodes(args.nodes_out, net.labels)
    if not args.quiet:
        sys.stderr.write(f"members:{net.member_count}\nedges:{net.edge_count}\n")


def _spin_output(net, values) -> str:
    r = ranking.make_ranking(values)
    lines = ["# member;sp;rank"]
    for lb, v, pos in zip(net.labels, values.tolist(), r.positions.tolist()):
        lines.append(f"{lb};{v!r};{pos}")
    return "\n".join(lines) + "\n"


def cmd_spin(args):
    net = io.read_network(args.nodes, args.edges)
    if not args.no_validate:
        report = validate_commitment(net)
        if not report.ok:
            raise InputError(f"commitment check failed: {report.describe(net)}")
    log_dir = os.environ.get(LOG_DIR_ENV) or args.log_dir
    cfg = SpinConfig(
        epsilon=args.epsilon,
        tau=args.tau,
        stop_mode="per_member" if args.stop == "per-member" else "sum",
        max_iterations=args.max_iter,
        initial_sp=args.initial_sp,
        chunk_size=args.chunk_size,
        keep_snapshots=bool(log_dir and args.snapshots),
    )
    res = run_spin(net, cfg, args.variant)
    if log_dir:
        d = io.ensure_dir(log_dir)
        with open(d / "iterations.csv", "w", encoding="utf-8") as fh:
            fh.write("iteration,duration_ms\n")
            for e in res.per_iteration_log:
                fh.write(f"{e.iteration},{e.duration_ms:.6f}\n")
                if e.snapshot is not None:
                    with open(d / f"sp_{e.iteration:04d}.txt", "w", encoding="utf-8") as snap:
                        for lb, v in zip(net.labels, e.snapshot.tolist()):
                            snap.write(f"{lb};{v!r}\n")
    _emit(args.out, _spin_output(net, res.values))
    if not args.quiet:
        sys.stderr.write(
            f"variant:{args.variant}\niterations:{res.iterations}\nconverged:{res.converged}\n"
        )


def cmd_centrality(args):
    net = io.read_network(args.nodes, args.edges)
    scores = centrality.compute(net, args.measure, args.normalized, args.threads)
    lines = [f"# measure={args.measure} normalized={str(args.normalized).lower()} network={args.edges}"]
    lines += [f"{lb};{io.fmt(v)}" for lb, v in zip(net.labels, scores.values.tolist())]
    _emit(args.out, "\n".join(lines) + "\n")


def cmd_rank(args):
    members, scores = io.read_scores(args.scores)
    r = ranking.make_ranking(scores)
    lines = ["# member;score;position"]
    lines += [f"{m};{io.fmt(s)};{p}" for m, s, p in zip(members, scores, r.positions.tolist())]
    _emit(args.out, "\n".join(lines) + "\n")


def cmd_compare(args):
    ma, sa = io.read_scores(args.a)
    mb, sb = io.read_scores(args.b)
    if sorted(ma) != sorted(mb) or len(set(ma)) != len(ma):
        raise InputError("score files must list the same, unique members")
    lookup = dict(zip(mb, sb))
    ra = ranking.make_ranking(sa)
    rb = ranking.make_ranking([lookup[m] for m in ma])
    print(repr(ranking.kendall(ra, rb)))


def cmd_stats(args):
    _, scores = io.read_scores(args.scores)
    print(ranking.sp_distribution(scores).format())
    print()
    print(ranking.duplicate_stats(scores).format())


def cmd_gen(args):
    spec = netgen.GenSpec(args.nodes, args.edges, args.seed, args.weight_mode, args.allow_isolated)
    net = netgen.generate(spec)
    out = io.ensure_dir(args.out_dir)
    io.write_network(net, out / "nodes.txt", out / "edges.txt")
    if not args.quiet:
        sys.stderr.write(f"members:{net.member_count}\nedges:{net.edge_count}\n")


def cmd_bench(args):
    if args.grid:
        grid = benchmod.load_grid(args.grid)
    else:
        grid = netgen.efficiency_grid(seed=args.seed)
    cfg = SpinConfig(epsilon=args.epsilon, tau=0.0, max_iterations=args.iterations,
                     chunk_size=args.chunk_size)
    rows = benchmod.bench_grid(grid, cfg, args.variants.split(","), args.repetitions)
    _emit(args.out, benchmod.to_csv(rows, benchmod.BENCH_COLUMNS))
    if args.ratios:
        _emit(args.ratios, benchmod.to_csv(benchmod.ratio_rows(rows)))


COMMANDS = {
    "ingest": cmd_ingest,
    "commit": cmd_commit,
    "spin": cmd_spin,
    "centrality": cmd_centrality,
    "rank": cmd_rank,
    "compare": cmd_compare,
    "stats": cmd_stats,
    "gen": cmd_gen,
    "bench": cmd_bench,
}


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _check_args(args)
    except UsageError as exc:
        sys.stderr.write(f"spinrank: usage error: {exc}\n")
        return 1
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except InvariantError as exc:
        sys.stderr.write(f"spinrank: internal invariant failed: {exc}\n")
        return 2
    except (InputError, OSError, ValueError) as exc:
        sys.stderr.write(f"spinrank: {type(exc).__name__}: {exc}\n")
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
