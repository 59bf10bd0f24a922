"""Commitment function: raw activity -> row-normalized edge weights.

Pipeline: ``relationship_commitment`` (or ``time_decayed_commitment``)
normalizes each member's outgoing activity, then ``redistribute_inactive``
gives members with no outgoing activity equal-weight edges back to everyone
who is active towards them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidWeight, IsolatedMember, SelfLoop
from .graph import SocialNetwork

SparseMap = dict[tuple[int, int], float]


@dataclass
class ActivityMatrix:
    """Sparse raw activity ``(y, x) -> A(y->x)`` between members ``0..member_count-1``.

    ``period_entries[i]`` holds the activity of period ``i``; period 0 is the
    most recent one.
    """

    member_count: int
    entries: dict[tuple[int, int], float] = field(default_factory=dict)
    period_entries: list[dict[tuple[int, int], float]] | None = None
    labels: Sequence[str] | None = None

    def __post_init__(self):
        maps = [self.entries] + list(self.period_entries or [])
        for m in maps:
            for (y, x), a in m.items():
                if not (0 <= y < self.member_count and 0 <= x < self.member_count):
                    raise IndexError(f"activity pair ({y}, {x}) outside 0..{self.member_count - 1}")
                if a < 0 or a != a:
                    raise InvalidWeight(f"activity {a!r} on ({y}, {x}) must be >= 0")
                if y == x and a > 0:
                    raise SelfLoop(self._label(y))
        if self.labels is not None and len(self.labels) != self.member_count:
            raise ValueError("labels length must equal member_count")

    def _label(self, i: int) -> str:
        return str(self.labels[i]) if self.labels is not None else str(i)

    def member_labels(self) -> list[str]:
        return [self._label(i) for i in range(self.member_count)]

    @classmethod
    def from_labelled(cls, rows, periods: int | None = None):
        """Build from ``(a, b, activity)`` or ``(a, b, activity, period)`` rows.

        Repeated pairs are summed. Labels are numbered in sorted order.
        """
        rows = list(rows)
        labels = sorted({str(r[0]) for r in rows} | {str(r[1]) for r in rows})
        idx = {lb: i for i, lb in enumerate(labels)}
        if periods is None:
            entries: dict = {}
            for a, b, act in rows:
                key = (idx[str(a)], idx[str(b)])
                entries[key] = entries.get(key, 0.0) + float(act)
            return cls(len(labels), entries, labels=labels)
        per = [dict() for _ in range(periods)]
        for a, b, act, i in rows:
            i = int(i)
            if not 0 <= i < periods:
                raise IndexError(f"period {i} outside 0..{periods - 1}")
            key = (idx[str(a)], idx[str(b)])
            per[i][key] = per[i].get(key, 0.0) + float(act)
        return cls(len(labels), {}, period_entries=per, labels=labels)


@dataclass(frozen=True)
class TimeDecayConfig:
    lam: float
    k: int

    def __post_init__(self):
        if not 0 < self.lam <= 1:
            raise ValueError(f"lambda must be in (0, 1], got {self.lam}")
        if self.k < 1:
            raise ValueError(f"period count must be >= 1, got {self.k}")

    def period_weights(self) -> list[float]:
        return [self.lam ** i for i in range(self.k)]


def _to_arrays(m: Mapping[tuple[int, int], float]):
    if not m:
        z = np.zeros(0, dtype=np.int64)
        return z, z.copy(), np.zeros(0)
    keys = np.array(list(m.keys()), dtype=np.int64).reshape(-1, 2)
    return keys[:, 0], keys[:, 1], np.fromiter(m.values(), dtype=np.float64, count=len(m))


def normalize_rows(src, dst, act, member_count: int):
    """Per-source normalization of activity arrays.

    Returns ``(src, dst, weight)`` restricted to strictly positive weights;
    sources whose activity sums to zero lose all their entries.
    """
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    act = np.asarray(act, dtype=np.float64)
    keep = act > 0
    src, dst, act = src[keep], dst[keep], act[keep]
    totals = np.bincount(src, weights=act, minlength=member_count)
    return src, dst, act / totals[src]


def relationship_commitment(acts: ActivityMatrix) -> SparseMap:
    """``C_rel(y->x) = A(y->x) / sum_z A(y->z)``; rows with no activity stay empty."""
    src, dst, w = normalize_rows(*_to_arrays(acts.entries), acts.member_count)
    return dict(zip(zip(src.tolist(), dst.tolist()), w.tolist()))


def time_decayed_commitment(acts: ActivityMatrix, cfg: TimeDecayConfig) -> SparseMap:
    """Like ``relationship_commitment`` but period ``i`` is weighted by ``lam**i``."""
    periods = acts.period_entries
    if periods is None:
        raise ValueError("activity matrix has no period entries")
    if len(periods) != cfg.k:
        raise ValueError(f"expected {cfg.k} periods, got {len(periods)}")
    combined: dict[tuple[int, int], float] = {}
    for weight, entries in zip(cfg.period_weights(), periods):
        for key, a in entries.items():
            combined[key] = combined.get(key, 0.0) + weight * a
    src, dst, w = normalize_rows(*_to_arrays(combined), acts.member_count)
    return dict(zip(zip(src.tolist(), dst.tolist()), w.tolist()))


def redistribute_arrays(src, dst, weight, member_count: int, labels=None, allow_isolated=False):
    """Array form of ``redistribute_inactive``; returns the completed edge arrays."""
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    weight = np.asarray(weight, dtype=np.float64)
    outdeg = np.bincount(src, minlength=member_count)
    indeg = np.bincount(dst, minlength=member_count)

    isolated = np.flatnonzero((outdeg == 0) & (indeg == 0))
    if isolated.size and not allow_isolated:
        i = int(isolated[0])
        raise IsolatedMember(labels[i] if labels is not None else str(i))

    # Targets come from the pre-redistribution in-edges only (single pass).
    inactive = (outdeg == 0) & (indeg > 0)
    rev = inactive[dst]
    new_src, new_dst = dst[rev], src[rev]
    new_w = 1.0 / indeg[new_src]
    return (
        np.concatenate((src, new_src)),
        np.concatenate((dst, new_dst)),
        np.concatenate((weight, new_w)),
    )


def redistribute_inactive(
    c_rel: Mapping[tuple[int, int], float],
    member_count: int,
    labels: Sequence[str] | None = None,
    allow_isolated: bool = False,
) -> SocialNetwork:
    """Turn relationship commitment into the final commitment network.

    Active rows are copied unchanged. A member with an empty row gets an edge
    of weight ``1/k`` to each of the ``k`` members with ``C_rel(x->y) > 0``.
    Members with no entries in either direction raise ``IsolatedMember``.
    """
    if labels is None:
        labels = [str(i) for i in range(member_count)]
    src, dst, w = _to_arrays({k: v for k, v in c_rel.items() if v > 0})
    src, dst, w = redistribute_arrays(src, dst, w, member_count, labels, allow_isolated)
    return SocialNetwork(labels, src, dst, w)


def commitment_network(
    acts: ActivityMatrix, decay: TimeDecayConfig | None = None, allow_isolated: bool = False
) -> SocialNetwork:
    """Activity matrix straight to a validated-shape commitment network."""
    if decay is None:
        c_rel = relationship_commitment(acts)
    else:
        c_rel = time_decayed_commitment(acts, decay)
    return redistribute_inactive(c_rel, acts.member_count, acts.member_labels(), allow_isolated)
