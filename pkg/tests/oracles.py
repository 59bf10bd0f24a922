"""Independent reference computations used only by the tests.

These deliberately avoid the package's own sparse machinery: everything is
done on dense matrices or by explicit enumeration.
"""
import itertools
from collections import deque

import numpy as np


def dense_commitment(net):
    n = net.member_count
    c = np.zeros((n, n))
    for y, x, w in net.edges():
        c[y, x] = w
    return c


def dense_jacobi(net, eps, iterations=None, tau=None, sp0=1.0, max_iter=100_000):
    """Iterate sp <- (1-eps) + eps * C^T sp on a dense matrix."""
    c = dense_commitment(net)
    sp = np.full(net.member_count, float(sp0))
    n = 0
    while True:
        nxt = (1 - eps) + eps * (c.T @ sp)
        n += 1
        done = iterations is not None and n >= iterations
        if tau is not None and np.max(np.abs(nxt - sp)) <= tau:
            done = True
        sp = nxt
        if done or n >= max_iter:
            return sp, n


def fixed_point(net, eps):
    """Solve (I - eps C^T) sp = (1-eps) 1 directly."""
    c = dense_commitment(net)
    n = net.member_count
    return np.linalg.solve(np.eye(n) - eps * c.T, np.full(n, 1 - eps))


def hop_distances(net):
    """All-pairs hop counts by Floyd-Warshall; inf when unreachable."""
    n = net.member_count
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0)
    for a, b, _ in net.edges():
        d[a, b] = 1
    for k in range(n):
        d = np.minimum(d, d[:, [k]] + d[[k], :])
    return d


def all_geodesics(net, i, j, dist):
    """Every shortest path from i to j, as tuples of nodes."""
    if not np.isfinite(dist[i, j]) or i == j:
        return []
    adj = net.out_adjacency()
    target = int(dist[i, j])
    out = []
    stack = [(i, (i,))]
    while stack:
        v, path = stack.pop()
        if len(path) - 1 == target:
            if v == j:
                out.append(path)
            continue
        for w in adj[v]:
            if w not in path:
                stack.append((w, path + (w,)))
    return out


def brute_betweenness(net):
    """Sum over ordered pairs of the share of geodesics through each node."""
    n = net.member_count
    dist = hop_distances(net)
    cb = np.zeros(n)
    for i, j in itertools.permutations(range(n), 2):
        paths = all_geodesics(net, i, j, dist)
        if not paths:
            continue
        for x in range(n):
            if x in (i, j):
                continue
            through = sum(1 for p in paths if x in p[1:-1])
            cb[x] += through / len(paths)
    return cb


def reach_sets(net):
    n = net.member_count
    adj = net.out_adjacency()
    out = []
    for s in range(n):
        seen = {s}
        q = deque([s])
        while q:
            v = q.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    q.append(w)
        out.append(seen - {s})
    return out
