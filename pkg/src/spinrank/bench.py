"""Per-iteration timing of the SPIN variants and of degree centrality."""
from __future__ import annotations

import csv
import gc
import io
import logging
import statistics
import time
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .centrality import degree
from .errors import VariantMismatch
from .graph import SocialNetwork
from .netgen import GenSpec, generate
from .spin import VARIANTS, SpinConfig, make_stepper, run_spin

log = logging.getLogger(__name__)

MATCH_TOL = 1e-12
BENCH_COLUMNS = ["variant", "nodes", "edges", "epsilon", "mean_iter_ms", "std_iter_ms", "iterations"]


@dataclass
class BenchRecord:
    variant: str
    node_count: int
    edge_count: int
    epsilon: float
    iteration_durations: list[float] = field(default_factory=list)
    iterations: int = 0
    threads: int = 1

    @property
    def mean_ms(self) -> float:
        return statistics.fmean(self.iteration_durations)

    @property
    def median_ms(self) -> float:
        return statistics.median(self.iteration_durations)

    @property
    def std_ms(self) -> float:
        d = self.iteration_durations
        return statistics.pstdev(d) if len(d) > 1 else 0.0


@contextmanager
def _no_gc():
    enabled = gc.isenabled()
    gc.collect()
    gc.disable()
    try:
        yield
    finally:
        if enabled:
            gc.enable()


def bench_spin(
    net: SocialNetwork,
    cfg: SpinConfig,
    variants: Sequence[str] = VARIANTS,
    repetitions: int = 1,
    warmup: bool = True,
) -> list[BenchRecord]:
    """Time each variant ``repetitions`` times and cross-check their outputs.

    One untimed step is run before each timed run and the garbage collector
    is paused while timing. Raises ``VariantMismatch`` if any variant's final
    vector differs from the first by more than 1e-12.
    """
    records = []
    reference = None
    for variant in variants:
        step = make_stepper(net, variant, cfg)
        for _ in range(repetitions):
            with _no_gc():
                if warmup:
                    step(np.full(net.member_count, cfg.initial_sp), cfg.epsilon)
                res = run_spin(net, cfg, variant, step=step)
            if reference is None:
                reference = (variant, res.values)
            else:
                diff = float(np.max(np.abs(res.values - reference[1]))) if net.member_count else 0.0
                if diff > MATCH_TOL:
                    raise VariantMismatch(
                        f"{variant} differs from {reference[0]} by {diff:.3e} "
                        f"after {res.iterations} iterations"
                    )
            records.append(
                BenchRecord(variant, net.member_count, net.edge_count, cfg.epsilon,
                            res.durations_ms(), res.iterations)
            )
    return records


def bench_degree(net: SocialNetwork, repetitions: int = 3) -> list[BenchRecord]:
    """Time in- and out-degree computation, one duration per repetition."""
    out = []
    for direction, tag in (("in", "indegree"), ("out", "outdegree")):
        durations = []
        for _ in range(repetitions):
            t0 = time.perf_counter_ns()
            degree(net, direction)
            durations.append((time.perf_counter_ns() - t0) / 1e6)
        out.append(BenchRecord(tag, net.member_count, net.edge_count, float("nan"), durations, 1))
    return out


def summarize(records: Iterable[BenchRecord]) -> dict[str, tuple[float, float]]:
    """Per variant: mean and population std of all pooled iteration times."""
    pooled: dict[str, list[float]] = {}
    for r in records:
        pooled.setdefault(r.variant, []).extend(r.iteration_durations)
    return {
        v: (statistics.fmean(d), statistics.pstdev(d) if len(d) > 1 else 0.0)
        for v, d in pooled.items()
    }


def epsilon_sweep(
    net: SocialNetwork,
    cfg: SpinConfig,
    epsilons: Sequence[float] = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9),
    variants: Sequence[str] = VARIANTS,
    repetitions: int = 1,
    rounds: int = 1,
) -> dict[str, list[float]]:
    """Median iteration time per variant for each epsilon, in sweep order.

    With ``rounds > 1`` the epsilons are visited round-robin and samples are
    pooled per epsilon, so slow drift in machine load hits every epsilon alike.
    """
    pooled: dict[str, list[list[float]]] = {v: [[] for _ in epsilons] for v in variants}
    for _ in range(rounds):
        for i, eps in enumerate(epsilons):
            recs = bench_spin(net, replace(cfg, epsilon=eps), variants, repetitions)
            for r in recs:
                pooled[r.variant][i].extend(r.iteration_durations)
    return {v: [statistics.median(t) for t in pooled[v]] for v in variants}


def epsilon_variation(times: Sequence[float]) -> float:
    """Population std of per-epsilon times relative to their mean."""
    return statistics.pstdev(times) / statistics.fmean(times)


def bench_grid(
    grid: Sequence[GenSpec],
    cfg: SpinConfig,
    variants: Sequence[str] = VARIANTS,
    repetitions: int = 1,
) -> list[dict]:
    """One row per (network, variant) with mean/std iteration time in ms.

    Specs with too few edges to avoid isolated members are generated with
    ``allow_isolated`` so the full grid can be timed.
    """
    rows = []
    for spec in grid:
        if 2 * spec.edge_count < spec.node_count and not spec.allow_isolated:
            spec = replace(spec, allow_isolated=True)
        net = generate(spec)
        log.info("bench %d nodes / %d edges", spec.node_count, spec.edge_count)
        recs = bench_spin(net, cfg, variants, repetitions)
        stats = summarize(recs)
        for v in variants:
            mean, std = stats[v]
            iters = max(r.iterations for r in recs if r.variant == v)
            rows.append({
                "variant": v,
                "nodes": spec.node_count,
                "edges": spec.edge_count,
                "epsilon": cfg.epsilon,
                "mean_iter_ms": mean,
                "std_iter_ms": std,
                "iterations": iters,
            })
    return rows


def ratio_rows(rows: Sequence[dict], baseline: str = "edges") -> list[dict]:
    """Per network: every other variant's mean time divided by ``baseline``'s."""
    by_net: dict[tuple[int, int], dict[str, float]] = {}
    for r in rows:
        by_net.setdefault((r["nodes"], r["edges"]), {})[r["variant"]] = r["mean_iter_ms"]
    out = []
    for (n, e), times in by_net.items():
        if baseline not in times:
            continue
        row = {"nodes": n, "edges": e}
        for v, t in times.items():
            if v != baseline:
                row[f"{v}_over_{baseline}"] = t / times[baseline]
        out.append(row)
    return out


def load_grid(path, weight_mode: str = "uniform_normalized") -> list[GenSpec]:
    """Read ``nodes,edges,seed`` rows; a header line is optional."""
    specs = []
    with open(path, encoding="utf-8", newline="") as fh:
        for row in csv.reader(fh):
            row = [c.strip() for c in row]
            if not row or not row[0] or row[0].startswith("#") or row[0] == "nodes":
                continue
            n, e = int(row[0]), int(row[1])
            seed = int(row[2]) if len(row) > 2 and row[2] else 0
            specs.append(GenSpec(n, e, seed, weight_mode, allow_isolated=2 * e < n))
    return specs


def to_csv(rows: Sequence[dict], columns: Sequence[str] | None = None) -> str:
    if not rows:
        return ",".join(columns or BENCH_COLUMNS) + "\n"
    columns = list(columns or rows[0].keys())
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (f"{v:.6f}" if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()
