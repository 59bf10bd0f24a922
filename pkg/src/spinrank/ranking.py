"""Competition rankings, Kendall's coefficient and score-distribution summaries."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, NonFinite, TooSmall

CLASS_LABELS = ("SP<=1", "1<SP<10", "10<=SP<100", "100<=SP<1000", "SP>=1000")


@dataclass
class Ranking:
    positions: np.ndarray
    scores: np.ndarray

    def __len__(self):
        return len(self.positions)


def _finite(scores) -> np.ndarray:
    arr = np.asarray(scores, dtype=np.float64).ravel()
    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        raise NonFinite(int(bad[0]))
    return arr


def make_ranking(scores) -> Ranking:
    """Competition ranking, highest score first.

    Position = 1 + number of strictly greater scores, so ``k`` tied members
    share a position and the next ``k - 1`` positions stay empty.
    """
    arr = _finite(scores)
    asc = np.sort(arr)
    positions = arr.size - np.searchsorted(asc, arr, side="right") + 1
    return Ranking(positions.astype(np.int64), arr)


def _positions(r) -> np.ndarray:
    return np.asarray(r.positions if isinstance(r, Ranking) else r, dtype=np.int64)


def kendall_naive(rank_x, rank_y) -> float:
    """Direct double sum over all ordered pairs, O(n^2). Used as a reference."""
    x, y = _positions(rank_x), _positions(rank_y)
    _check_pair(x, y)
    n = x.size
    total = 0
    for lo in range(0, n, 512):
        xs = np.sign(x[None, :] - x[lo:lo + 512, None])
        ys = np.sign(y[None, :] - y[lo:lo + 512, None])
        total += int(np.sum(xs * ys))
    return total / (n * (n - 1))


def _check_pair(x, y):
    if x.shape != y.shape:
        raise LengthMismatch(f"rankings of length {x.size} and {y.size}")
    if x.size < 2:
        raise TooSmall("need at least two items to compare rankings")


def _tied_pairs(values: np.ndarray) -> int:
    _, counts = np.unique(values, return_counts=True)
    return int(np.sum(counts * (counts - 1) // 2))


def _count_inversions(seq: list[int]) -> int:
    """Pairs i < j with seq[i] > seq[j]; values must be 0..m-1 (Fenwick tree)."""
    size = max(seq) + 2 if seq else 1
    tree = [0] * size
    inversions = 0
    seen = 0
    for v in seq:
        # count already-seen values <= v
        i = v + 1
        le = 0
        while i > 0:
            le += tree[i]
            i -= i & -i
        inversions += seen - le
        i = v + 1
        while i < size:
            tree[i] += 1
            i += i & -i
        seen += 1
    return inversions


def kendall(rank_x, rank_y) -> float:
    """Kendall's coefficient over ranking positions, O(n log n).

    Tied positions contribute 0 and no tie correction is applied, so the
    result equals ``kendall_naive`` exactly (up to float division).
    """
    x, y = _positions(rank_x), _positions(rank_y)
    _check_pair(x, y)
    n = x.size
    order = np.lexsort((y, x))
    _, y_dense = np.unique(y, return_inverse=True)
    discordant = _count_inversions(y_dense[order].tolist())
    pairs = n * (n - 1) // 2
    tx = _tied_pairs(x)
    ty = _tied_pairs(y)
    txy = _tied_pairs(x * (int(y.max()) + 1) + y) if n else 0
    net = pairs - tx - ty + txy - 2 * discordant
    return 2 * net / (n * (n - 1))


@dataclass
class DistributionReport:
    class_counts: list[int]
    class_percentages: list[float]
    mean: float
    std_dev: float
    min: float
    max: float

    @property
    def total(self) -> int:
        return sum(self.class_counts)

    def format(self) -> str:
        lines = [
            f"{'Members':<14}{self.total:>16d}",
            f"{'Average SP':<14}{self.mean:>16.6f}",
            f"{'Std. Dev. SP':<14}{self.std_dev:>16.6f}",
            f"{'Min SP value':<14}{self.min:>16.6f}",
            f"{'Max SP value':<14}{self.max:>16.6f}",
            "",
            f"{'Class':<14}{'Count':>16}{'Percent':>10}",
        ]
        for lb, c, p in zip(CLASS_LABELS, self.class_counts, self.class_percentages):
            lines.append(f"{lb:<14}{c:>16d}{p:>10.3f}")
        return "\n".join(lines)


def sp_distribution(scores) -> DistributionReport:
    """Class counts for ``<=1``, ``(1,10)``, ``[10,100)``, ``[100,1000)``, ``>=1000``."""
    arr = _finite(scores)
    n = arr.size
    counts = [
        int(np.sum(arr <= 1)),
        int(np.sum((arr > 1) & (arr < 10))),
        int(np.sum((arr >= 10) & (arr < 100))),
        int(np.sum((arr >= 100) & (arr < 1000))),
        int(np.sum(arr >= 1000)),
    ]
    pct = [100.0 * c / n if n else 0.0 for c in counts]
    if n == 0:
        return DistributionReport(counts, pct, math.nan, math.nan, math.nan, math.nan)
    return DistributionReport(
        counts, pct, float(arr.mean()), float(arr.std()), float(arr.min()), float(arr.max())
    )


@dataclass
class DuplicateReport:
    duplicates: int
    percentage: float
    distinct: int

    def format(self) -> str:
        return (
            f"distinct values: {self.distinct}\n"
            f"duplicates: {self.duplicates}\n"
            f"duplicate percentage: {self.percentage:.2f}"
        )


def duplicate_stats(scores) -> DuplicateReport:
    """Members minus distinct values, using exact float equality."""
    arr = _finite(scores)
    n = arr.size
    distinct = int(np.unique(arr).size)
    dup = n - distinct
    return DuplicateReport(dup, 100.0 * dup / n if n else 0.0, distinct)
