"""Structural centrality and prestige baselines.

Edge weights are ignored here: distances are hop counts over the directed
edges, and an undirected tie is represented as two opposite edges.
"""
from __future__ import annotations

from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .graph import SocialNetwork

MEASURES = (
    "degree",
    "indegree",
    "outdegree",
    "closeness",
    "betweenness",
    "degree_prestige",
    "influence_domain",
    "proximity_prestige",
)


@dataclass
class CentralityScores:
    measure: str
    normalized: bool
    values: np.ndarray

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


def _bfs_distances(adj: list[list[int]], source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        dv = dist[v] + 1
        for w in adj[v]:
            if w not in dist:
                dist[w] = dv
                queue.append(w)
    return dist


def degree(net: SocialNetwork, direction: str = "both", normalized: bool = False) -> CentralityScores:
    """Number of distinct neighbors; ``normalized`` divides by n-1."""
    n = net.member_count
    if direction == "out":
        d = net.out_degree().astype(np.float64)
        tag = "outdegree"
    elif direction == "in":
        d = net.in_degree().astype(np.float64)
        tag = "indegree"
    elif direction == "both":
        out_adj, in_adj = net.out_adjacency(), net.in_adjacency()
        d = np.array([len(set(o) | set(i)) for o, i in zip(out_adj, in_adj)], dtype=np.float64)
        tag = "degree"
    else:
        raise ValueError(f"direction must be in, out or both, not {direction!r}")
    if normalized:
        d = d / (n - 1) if n > 1 else np.zeros(n)
    return CentralityScores(tag, normalized, d)


def degree_prestige(net: SocialNetwork, normalized: bool = False) -> CentralityScores:
    s = degree(net, "in", normalized)
    return CentralityScores("degree_prestige", normalized, s.values)


def _closeness_block(adj, sources, n):
    out = []
    for x in sources:
        dist = _bfs_distances(adj, x)
        r = len(dist) - 1
        total = sum(dist.values())
        out.append((r, total))
    return out


def _map_sources(fn, adj, n, threads: int):
    """Run ``fn(adj, sources, n)`` over all sources, optionally in worker processes.

    Results are concatenated in source order regardless of ``threads``.
    """
    sources = list(range(n))
    if threads <= 1 or n < 2:
        return fn(adj, sources, n)
    size = -(-n // threads)
    blocks = [sources[i:i + size] for i in range(0, n, size)]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(fn, [adj] * len(blocks), blocks, [n] * len(blocks)))
    return [item for part in parts for item in part]


def closeness(net: SocialNetwork, normalized: bool = True, threads: int = 1) -> CentralityScores:
    """Outward closeness over reachable members.

    Normalized: ``(r/sum_d) * (r/(n-1))`` with ``r`` the number of members
    reachable from x; equals ``(n-1)/sum_d`` on strongly connected graphs.
    Unnormalized: ``1/sum_d``. Members that reach nobody score 0.
    """
    n = net.member_count
    rows = _map_sources(_closeness_block, net.out_adjacency(), n, threads)
    vals = np.zeros(n)
    for x, (r, total) in enumerate(rows):
        if r == 0:
            continue
        vals[x] = (r / total) * (r / (n - 1)) if normalized else 1.0 / total
    return CentralityScores("closeness", normalized, vals)


def _betweenness_block(adj, sources, n):
    cb = [0.0] * n
    for s in sources:
        stack = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0] * n
        sigma[s] = 1
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            dv = dist[v] + 1
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dv
                    queue.append(w)
                if dist[w] == dv:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        while stack:
            w = stack.pop()
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                cb[w] += delta[w]
    return [cb]


def betweenness(net: SocialNetwork, normalized: bool = True, threads: int = 1) -> CentralityScores:
    """Shortest-path betweenness by dependency accumulation.

    On symmetric networks pairs are unordered and the normalizer is
    ``(n-1)(n-2)/2``; otherwise pairs are ordered and it is ``(n-1)(n-2)``.
    """
    n = net.member_count
    parts = _map_sources(_betweenness_block, net.out_adjacency(), n, threads)
    vals = np.zeros(n)
    for part in parts:
        vals += np.asarray(part)
    symmetric = net.is_symmetric()
    if symmetric:
        vals /= 2.0
    if normalized:
        if n > 2:
            vals /= (n - 1) * (n - 2) / (2.0 if symmetric else 1.0)
        else:
            vals[:] = 0.0
    return CentralityScores("betweenness", normalized, vals)


def _inward(net: SocialNetwork):
    """Per member: (number of members that reach it, sum of their distances)."""
    in_adj = net.in_adjacency()
    out = []
    for x in range(net.member_count):
        dist = _bfs_distances(in_adj, x)
        out.append((len(dist) - 1, sum(dist.values())))
    return out


def influence_domain(net: SocialNetwork) -> CentralityScores:
    """Count of members with a directed path to each member."""
    vals = np.array([r for r, _ in _inward(net)], dtype=np.float64)
    return CentralityScores("influence_domain", False, vals)


def proximity_prestige(net: SocialNetwork, normalized: bool = True) -> CentralityScores:
    """Influence domain over summed inward distance.

    Unnormalized ``I/sum_d``; normalized ``I**2 / ((n-1) * sum_d)``.
    """
    n = net.member_count
    vals = np.zeros(n)
    for x, (r, total) in enumerate(_inward(net)):
        if r == 0:
            continue
        vals[x] = r * r / ((n - 1) * total) if normalized else r / total
    return CentralityScores("proximity_prestige", normalized, vals)


def compute(net: SocialNetwork, measure: str, normalized: bool = False, threads: int = 1) -> CentralityScores:
    """Dispatch by measure name (see ``MEASURES``)."""
    if measure == "degree":
        return degree(net, "both", normalized)
    if measure == "indegree":
        return degree(net, "in", normalized)
    if measure == "outdegree":
        return degree(net, "out", normalized)
    if measure == "degree_prestige":
        return degree_prestige(net, normalized)
    if measure == "closeness":
        return closeness(net, normalized, threads)
    if measure == "betweenness":
        return betweenness(net, normalized, threads)
    if measure == "influence_domain":
        return influence_domain(net)
    if measure == "proximity_prestige":
        return proximity_prestige(net, normalized)
    raise ValueError(f"unknown measure {measure!r}; choose from {', '.join(MEASURES)}")
