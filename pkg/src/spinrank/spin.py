"""Social Position iteration.

Each step computes ``sp_next[x] = (1 - eps) + eps * sum_y sp[y] * C(y->x)``
from the previous vector only (Jacobi). The three variants differ in how the
incoming contributions are gathered:

* ``nodes``  -- for each member, walk its incoming edges;
* ``edges``  -- one pass over the global edge list into an accumulator;
* ``hybrid`` -- members are cut into contiguous blocks and, per block, the
  edge list is scanned for edges landing in that block.

All three sum each member's contributions in ascending source order, so
their results agree to the last bit on the same input.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import LengthMismatch
from .graph import SocialNetwork

log = logging.getLogger(__name__)

VARIANTS = ("nodes", "edges", "hybrid")
STOP_MODES = ("per_member", "sum")


@dataclass(frozen=True)
class SpinConfig:
    epsilon: float = 0.5
    tau: float = 1e-5
    stop_mode: str = "per_member"
    max_iterations: int = 100
    initial_sp: float = 1.0
    chunk_size: int = 8192
    keep_snapshots: bool = False

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")
        if not self.tau >= 0:
            raise ValueError(f"tau must be >= 0, got {self.tau}")
        if self.stop_mode not in STOP_MODES:
            raise ValueError(f"stop_mode must be one of {STOP_MODES}, got {self.stop_mode!r}")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")
        if not math.isfinite(self.initial_sp):
            raise ValueError("initial_sp must be finite")


@dataclass
class SpVector:
    values: np.ndarray
    iteration: int = 0

    def __len__(self):
        return len(self.values)


@dataclass
class IterationLog:
    iteration: int
    duration_ms: float
    snapshot: np.ndarray | None = None


@dataclass
class SpinResult:
    sp: SpVector
    iterations: int
    converged: bool
    variant: str
    per_iteration_log: list[IterationLog] = field(default_factory=list)

    @property
    def values(self) -> np.ndarray:
        return self.sp.values

    def durations_ms(self) -> list[float]:
        return [e.duration_ms for e in self.per_iteration_log]


def check_stop(sp_prev, sp_next, tau: float, mode: str = "per_member") -> bool:
    a = np.asarray(sp_prev, dtype=np.float64)
    b = np.asarray(sp_next, dtype=np.float64)
    if a.shape != b.shape:
        raise LengthMismatch(f"vectors of length {a.size} and {b.size}")
    if mode == "per_member":
        return a.size == 0 or float(np.max(np.abs(b - a))) <= tau
    if mode == "sum":
        return abs(math.fsum(b.tolist()) - math.fsum(a.tolist())) <= tau
    raise ValueError(f"unknown stop mode {mode!r}")


class _NodeStepper:
    def __init__(self, net: SocialNetwork, cfg: SpinConfig):
        ptr = net.in_ptr.tolist()
        src = net.in_src.tolist()
        w = net.in_weight.tolist()
        self.incoming = [
            list(zip(src[ptr[x]:ptr[x + 1]], w[ptr[x]:ptr[x + 1]]))
            for x in range(net.member_count)
        ]

    def __call__(self, sp: np.ndarray, eps: float) -> np.ndarray:
        prev = sp.tolist()
        base = 1.0 - eps
        out = []
        for edges in self.incoming:
            acc = 0.0
            for y, c in edges:
                acc += prev[y] * c
            out.append(base + eps * acc)
        return np.array(out, dtype=np.float64)


class _EdgeStepper:
    def __init__(self, net: SocialNetwork, cfg: SpinConfig):
        self.src, self.dst, self.w = net.src, net.dst, net.weight
        self.n = net.member_count

    def __call__(self, sp: np.ndarray, eps: float) -> np.ndarray:
        acc = np.bincount(self.dst, weights=sp[self.src] * self.w, minlength=self.n)
        return (1.0 - eps) + eps * acc


class _HybridStepper:
    def __init__(self, net: SocialNetwork, cfg: SpinConfig):
        self.src, self.dst, self.w = net.src, net.dst, net.weight
        self.n = net.member_count
        size = cfg.chunk_size
        self.blocks = [(lo, min(lo + size, self.n)) for lo in range(0, self.n, size)]

    def __call__(self, sp: np.ndarray, eps: float) -> np.ndarray:
        acc = np.empty(self.n)
        src, dst, w = self.src, self.dst, self.w
        for lo, hi in self.blocks:
            hit = (dst >= lo) & (dst < hi)
            acc[lo:hi] = np.bincount(dst[hit] - lo, weights=sp[src[hit]] * w[hit], minlength=hi - lo)
        return (1.0 - eps) + eps * acc


_STEPPERS = {"nodes": _NodeStepper, "edges": _EdgeStepper, "hybrid": _HybridStepper}


def make_stepper(net: SocialNetwork, variant: str, cfg: SpinConfig | None = None):
    """Return a callable ``step(sp, eps) -> sp_next`` for one variant."""
    try:
        cls = _STEPPERS[variant]
    except KeyError:
        raise ValueError(f"unknown variant {variant!r}; choose from {VARIANTS}") from None
    return cls(net, cfg or SpinConfig())


def iterate_once(net: SocialNetwork, sp_prev, epsilon: float) -> SpVector:
    """One Jacobi step. ``sp_prev`` may be an ``SpVector`` or a plain array."""
    it = sp_prev.iteration if isinstance(sp_prev, SpVector) else 0
    values = sp_prev.values if isinstance(sp_prev, SpVector) else np.asarray(sp_prev, dtype=np.float64)
    if values.shape != (net.member_count,):
        raise LengthMismatch(f"expected {net.member_count} values, got {values.size}")
    return SpVector(_EdgeStepper(net, None)(values, epsilon), it + 1)


def run_spin(net: SocialNetwork, cfg: SpinConfig, variant: str = "edges", step=None) -> SpinResult:
    step = step or make_stepper(net, variant, cfg)
    eps = cfg.epsilon
    sp = np.full(net.member_count, float(cfg.initial_sp))
    logs: list[IterationLog] = []
    converged = False
    n = 0
    while n < cfg.max_iterations:
        t0 = time.perf_counter_ns()
        nxt = step(sp, eps)
        dt = (time.perf_counter_ns() - t0) / 1e6
        n += 1
        converged = check_stop(sp, nxt, cfg.tau, cfg.stop_mode)
        logs.append(IterationLog(n, dt, nxt.copy() if cfg.keep_snapshots else None))
        sp = nxt
        if converged:
            break
    log.debug("spin %s: %d iterations, converged=%s", variant, n, converged)
    return SpinResult(SpVector(sp, n), n, converged, variant, logs)


def spin_nodes(net: SocialNetwork, cfg: SpinConfig | None = None) -> SpinResult:
    return run_spin(net, cfg or SpinConfig(), "nodes")


def spin_edges(net: SocialNetwork, cfg: SpinConfig | None = None) -> SpinResult:
    return run_spin(net, cfg or SpinConfig(), "edges")


def spin_hybrid(net: SocialNetwork, cfg: SpinConfig | None = None) -> SpinResult:
    return run_spin(net, cfg or SpinConfig(), "hybrid")


def spin(net: SocialNetwork, cfg: SpinConfig | None = None, variant: str = "edges") -> SpinResult:
    return run_spin(net, cfg or SpinConfig(), variant)
