"""Immutable sparse directed graph with commitment weights on the edges."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyInput, InvalidWeight, OutOfRange, SelfLoop

ROW_SUM_TOL = 1e-9


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


class SocialNetwork:
    """Directed graph over members ``0..member_count-1``.

    Edges are held twice: sorted by ``(src, dst)`` with ``out_ptr`` giving
    each member's slice, and permuted by ``(dst, src)`` with ``in_ptr``.
    Arrays are read-only once built.
    """

    def __init__(self, labels: Sequence[str], src, dst, weight):
        labels = tuple(str(lb) for lb in labels)
        n = len(labels)
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        weight = np.asarray(weight, dtype=np.float64)
        if not (src.shape == dst.shape == weight.shape) or src.ndim != 1:
            raise ValueError("src, dst and weight must be 1-d arrays of equal length")
        if src.size and (min(src.min(), dst.min()) < 0 or max(src.max(), dst.max()) >= n):
            raise OutOfRange("edge endpoint outside 0..member_count-1")
        loops = np.flatnonzero(src == dst)
        if loops.size:
            raise SelfLoop(labels[src[loops[0]]])

        order = np.lexsort((dst, src))
        src, dst, weight = src[order], dst[order], weight[order]
        if src.size > 1:
            dup = (src[1:] == src[:-1]) & (dst[1:] == dst[:-1])
            if dup.any():
                i = int(np.flatnonzero(dup)[0])
                raise ValueError(f"duplicate edge {labels[src[i]]!r}->{labels[dst[i]]!r}")

        self.labels = labels
        self._index = {lb: i for i, lb in enumerate(labels)}
        if len(self._index) != n:
            raise ValueError("member labels must be unique")
        self.src = _frozen(src)
        self.dst = _frozen(dst)
        self.weight = _frozen(weight)
        self.out_ptr = _frozen(np.concatenate(([0], np.cumsum(np.bincount(src, minlength=n)))))

        in_order = np.lexsort((src, dst))
        self.in_src = _frozen(src[in_order])
        self.in_weight = _frozen(weight[in_order])
        self.in_ptr = _frozen(np.concatenate(([0], np.cumsum(np.bincount(dst, minlength=n)))))

    @property
    def member_count(self) -> int:
        return len(self.labels)

    @property
    def edge_count(self) -> int:
        return int(self.src.size)

    def __len__(self):
        return self.member_count

    def __repr__(self):
        return f"SocialNetwork(members={self.member_count}, edges={self.edge_count})"

    def __eq__(self, other):
        if not isinstance(other, SocialNetwork):
            return NotImplemented
        return (
            self.labels == other.labels
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.weight, other.weight)
        )

    __hash__ = None

    def id_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise OutOfRange(f"unknown member {label!r}") from None

    def label_of(self, member: int) -> str:
        self._check(member)
        return self.labels[member]

    def _check(self, x: int):
        if not 0 <= x < self.member_count:
            raise OutOfRange(f"member {x} not in 0..{self.member_count - 1}")

    def out_degree(self) -> np.ndarray:
        return np.diff(self.out_ptr)

    def in_degree(self) -> np.ndarray:
        return np.diff(self.in_ptr)

    def out_sums(self) -> np.ndarray:
        return np.bincount(self.src, weights=self.weight, minlength=self.member_count)

    def edges(self):
        """Yield ``(from, to, weight)`` in ``(from, to)`` order."""
        for s, d, w in zip(self.src.tolist(), self.dst.tolist(), self.weight.tolist()):
            yield s, d, w

    def labelled_edges(self):
        lb = self.labels
        for s, d, w in self.edges():
            yield lb[s], lb[d], w

    def out_adjacency(self) -> list[list[int]]:
        dst = self.dst.tolist()
        ptr = self.out_ptr.tolist()
        return [dst[ptr[i]:ptr[i + 1]] for i in range(self.member_count)]

    def in_adjacency(self) -> list[list[int]]:
        src = self.in_src.tolist()
        ptr = self.in_ptr.tolist()
        return [src[ptr[i]:ptr[i + 1]] for i in range(self.member_count)]

    def is_symmetric(self) -> bool:
        """True when every edge a->b has a reverse edge b->a."""
        fwd = self.src * self.member_count + self.dst
        rev = np.sort(self.dst * self.member_count + self.src)
        return bool(np.array_equal(fwd, rev))


def neighbors(net: SocialNetwork, x: int, direction: str = "out") -> list[tuple[int, float]]:
    """Edges incident to ``x`` as ``(neighbor, weight)``, neighbor ids ascending."""
    net._check(x)
    if direction == "out":
        lo, hi = net.out_ptr[x], net.out_ptr[x + 1]
        return list(zip(net.dst[lo:hi].tolist(), net.weight[lo:hi].tolist()))
    if direction == "in":
        lo, hi = net.in_ptr[x], net.in_ptr[x + 1]
        return list(zip(net.in_src[lo:hi].tolist(), net.in_weight[lo:hi].tolist()))
    raise ValueError(f"direction must be 'in' or 'out', not {direction!r}")


def build_network(
    edges: Iterable[tuple[str, str, float]],
    labels: Sequence[str] | None = None,
) -> SocialNetwork:
    """Build a network from labelled ``(from, to, weight)`` rows.

    Repeated ``(from, to)`` rows are merged by summing their weights. Member
    ids follow ``labels`` when given (extra labels become isolated members),
    otherwise the sorted set of labels seen in ``edges``.
    """
    merged: dict[tuple[str, str], float] = {}
    for a, b, w in edges:
        a, b, w = str(a), str(b), float(w)
        if a == b:
            raise SelfLoop(a)
        if not math.isfinite(w) or w < 0:
            raise InvalidWeight(f"weight {w!r} on {a!r}->{b!r} must be finite and >= 0")
        merged[(a, b)] = merged.get((a, b), 0.0) + w
    if not merged:
        raise EmptyInput("no edges given")

    if labels is None:
        labels = sorted({lb for pair in merged for lb in pair})
    index = {lb: i for i, lb in enumerate(labels)}
    try:
        src = [index[a] for a, _ in merged]
        dst = [index[b] for _, b in merged]
    except KeyError as exc:
        raise OutOfRange(f"edge endpoint {exc.args[0]!r} missing from member list") from None
    return SocialNetwork(labels, src, dst, list(merged.values()))


@dataclass
class ValidationReport:
    sum_violations: list[tuple[int, float]] = field(default_factory=list)
    isolated: list[int] = field(default_factory=list)
    range_violations: list[tuple[int, int, float]] = field(default_factory=list)
    inactive: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.sum_violations or self.isolated or self.range_violations)

    def describe(self, net: SocialNetwork, limit: int = 5) -> str:
        lb = net.labels
        parts = []
        if self.sum_violations:
            shown = ", ".join(f"{lb[y]}={s:.12g}" for y, s in self.sum_violations[:limit])
            parts.append(f"{len(self.sum_violations)} members with outgoing sum != 1 ({shown})")
        if self.isolated:
            shown = ", ".join(lb[y] for y in self.isolated[:limit])
            parts.append(f"{len(self.isolated)} isolated members ({shown})")
        if self.range_violations:
            shown = ", ".join(f"{lb[a]}->{lb[b]}={w:.12g}" for a, b, w in self.range_violations[:limit])
            parts.append(f"{len(self.range_violations)} weights outside [0,1] ({shown})")
        return "; ".join(parts) or "ok"


def validate_commitment(
    net: SocialNetwork, tol: float = ROW_SUM_TOL, exempt_inactive: bool = False
) -> ValidationReport:
    """Check the commitment conditions on ``net`` without raising.

    Members with no outgoing edges count as sum violations (their row sums
    to 0) unless ``exempt_inactive`` is set, in which case they are listed
    under ``inactive`` instead.
    """
    rep = ValidationReport()
    sums = net.out_sums()
    outdeg = net.out_degree()
    indeg = net.in_degree()
    for y in np.flatnonzero(np.abs(sums - 1.0) > tol).tolist():
        if outdeg[y] == 0 and exempt_inactive:
            rep.inactive.append(y)
        elif outdeg[y] > 0 or indeg[y] > 0:
            rep.sum_violations.append((y, float(sums[y])))
    rep.isolated = np.flatnonzero((outdeg == 0) & (indeg == 0)).tolist()
    bad = np.flatnonzero((net.weight < 0) | (net.weight > 1))
    rep.range_violations = [
        (int(net.src[i]), int(net.dst[i]), float(net.weight[i])) for i in bad.tolist()
    ]
    return rep
