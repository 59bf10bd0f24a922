"""Seeded random directed networks for the efficiency experiments.

Randomness comes from numpy's PCG64 bit generator. The integer seed is fed
to a ``SeedSequence`` that is split into independent streams for edge
sampling, rewiring and weights, so changing the weight mode never changes
the sampled edges.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass

import numpy as np

from .commitment import normalize_rows, redistribute_arrays
from .errors import TooFewEdges, TooManyEdges
from .graph import SocialNetwork

log = logging.getLogger(__name__)

WEIGHT_MODES = ("uniform_normalized", "unit")


@dataclass(frozen=True)
class GenSpec:
    node_count: int
    edge_count: int
    seed: int = 0
    weight_mode: str = "uniform_normalized"
    allow_isolated: bool = False

    def __post_init__(self):
        if self.node_count < 2:
            raise ValueError("node_count must be >= 2")
        if self.edge_count < 1:
            raise ValueError("edge_count must be >= 1")
        if self.weight_mode not in WEIGHT_MODES:
            raise ValueError(f"weight_mode must be one of {WEIGHT_MODES}")

    @property
    def capacity(self) -> int:
        return self.node_count * (self.node_count - 1)


# (nodes, edges) pairs of the 25-network efficiency grid.
EFFICIENCY_GRID = [(n, e) for n in (1_000, 5_000, 10_000, 50_000, 100_000)
           for e in (1_000, 5_000, 10_000, 50_000, 100_000)]


def efficiency_grid(seed: int = 0, scale: float = 1.0) -> list[GenSpec]:
    out = []
    for i, (n, e) in enumerate(EFFICIENCY_GRID):
        n, e = max(2, int(n * scale)), max(1, int(e * scale))
        out.append(GenSpec(n, e, seed + i, allow_isolated=2 * e < n))
    return out


def _decode(keys: np.ndarray, n: int):
    src = keys // (n - 1)
    r = keys % (n - 1)
    dst = r + (r >= src)
    return src, dst


def _sample_keys(rng: np.random.Generator, capacity: int, k: int) -> np.ndarray:
    """``k`` distinct integers from ``[0, capacity)``, in first-drawn order."""
    keys = np.zeros(0, dtype=np.int64)
    while keys.size < k:
        need = k - keys.size
        draw = rng.integers(0, capacity, size=need + need // 8 + 16, dtype=np.int64)
        merged = np.concatenate((keys, draw))
        _, first = np.unique(merged, return_index=True)
        keys = merged[np.sort(first)]
    return keys[:k]


def sample_pairs(rng: np.random.Generator, n: int, m: int):
    """``m`` distinct ordered pairs without self-loops, uniformly at random."""
    capacity = n * (n - 1)
    if m <= capacity // 2:
        keys = _sample_keys(rng, capacity, m)
    else:
        dropped = _sample_keys(rng, capacity, capacity - m)
        mask = np.ones(capacity, dtype=bool)
        mask[dropped] = False
        keys = rng.permutation(np.flatnonzero(mask))
    return _decode(keys, n)


def _fix_isolated(src, dst, n, rng):
    """Move edge endpoints onto isolated members, never creating new isolates."""
    deg = np.bincount(src, minlength=n) + np.bincount(dst, minlength=n)
    isolated = np.flatnonzero(deg == 0).tolist()
    if not isolated:
        return 0
    deg = deg.tolist()
    pool = deque(rng.permutation(src.size).tolist())
    for v in isolated:
        while True:
            i = pool.popleft()
            a, b = int(src[i]), int(dst[i])
            if deg[a] >= 2:
                src[i] = v
                deg[a] -= 1
            elif deg[b] >= 2:
                dst[i] = v
                deg[b] -= 1
            else:
                continue
            deg[v] = 1
            pool.append(i)
            break
    return len(isolated)


def _fix_inactive(src, dst, n, rng):
    """Give every member an outgoing edge by moving surplus edge sources."""
    outdeg = np.bincount(src, minlength=n)
    inactive = np.flatnonzero(outdeg == 0).tolist()
    if not inactive:
        return 0
    outdeg = outdeg.tolist()
    pool = deque(rng.permutation(src.size).tolist())
    for v in inactive:
        deferred = []
        while True:
            i = pool.popleft()
            a = int(src[i])
            if outdeg[a] < 2:
                continue
            if int(dst[i]) == v:
                deferred.append(i)
                continue
            src[i] = v
            outdeg[a] -= 1
            outdeg[v] = 1
            break
        pool.extendleft(reversed(deferred))
    return len(inactive)


def generate(spec: GenSpec) -> SocialNetwork:
    """Random commitment network with exactly ``spec.edge_count`` sampled relations.

    Unless ``allow_isolated`` is set, sampled edges are re-wired (count kept)
    so that nobody is isolated and, when ``edge_count >= node_count``, so that
    everybody has an outgoing edge. Remaining inactive members then get
    redistributed edges, which is the only case where the output has more
    edges than ``edge_count``.
    """
    n, m = spec.node_count, spec.edge_count
    if m > spec.capacity:
        raise TooManyEdges(f"{m} edges requested but {n} nodes allow at most {spec.capacity}")
    if not spec.allow_isolated and 2 * m < n:
        raise TooFewEdges(
            f"{m} edges cannot touch all {n} nodes; use allow_isolated for raw timing networks"
        )
    edge_ss, rewire_ss, weight_ss = np.random.SeedSequence(spec.seed).spawn(3)
    src, dst = sample_pairs(np.random.Generator(np.random.PCG64(edge_ss)), n, m)
    src, dst = src.copy(), dst.copy()

    if not spec.allow_isolated:
        rng = np.random.Generator(np.random.PCG64(rewire_ss))
        if m >= n:
            moved = _fix_inactive(src, dst, n, rng)
        else:
            moved = _fix_isolated(src, dst, n, rng)
        if moved:
            log.debug("re-wired %d edges for %d nodes / %d edges", moved, n, m)

    if spec.weight_mode == "unit":
        act = np.ones(m)
    else:
        act = 1.0 - np.random.Generator(np.random.PCG64(weight_ss)).random(m)
    src, dst, w = normalize_rows(src, dst, act, n)
    labels = [str(i) for i in range(n)]
    src, dst, w = redistribute_arrays(src, dst, w, n, labels, allow_isolated=spec.allow_isolated)
    return SocialNetwork(labels, src, dst, w)
