"""Slow reference computations that share no code with the library."""
import itertools
from collections import deque

import numpy as np


def adjacency_lists(g):
    return [set(int(v) for v in g.neighbors_of(u)) for u in range(g.n)]


def all_pairs_distances(g):
    """Floyd-Warshall on the dense adjacency; inf where unreachable."""
    n = g.n
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0)
    for u, nb in enumerate(adjacency_lists(g)):
        for v in nb:
            d[u, v] = 1
    for k in range(n):
        d = np.minimum(d, d[:, [k]] + d[[k], :])
    return d


def shortest_paths(adj, s, t, dist):
    """Every shortest s-t path, by extending partial paths one hop closer."""
    out = []

    def walk(p):
        u = p[-1]
        if u == t:
            out.append(tuple(p))
            return
        for w in sorted(adj[u]):
            if dist[w, t] == dist[u, t] - 1:
                walk(p + [w])

    if np.isfinite(dist[s, t]):
        walk([s])
    return out


def brute_betweenness(g):
    adj = adjacency_lists(g)
    dist = all_pairs_distances(g)
    bc = np.zeros(g.n)
    for s, t in itertools.combinations(range(g.n), 2):
        paths = shortest_paths(adj, s, t, dist)
        if not paths:
            continue
        for v in range(g.n):
            if v in (s, t):
                continue
            bc[v] += sum(v in p for p in paths) / len(paths)
    return bc


def brute_closeness(g):
    n = g.n
    out = np.zeros(n)
    adj = adjacency_lists(g)
    for v in range(n):
        dist = {v: 0}
        q = deque([v])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    q.append(w)
        far = sum(dist.values())
        if far > 0:
            r = len(dist)
            out[v] = (r - 1) / far * (r - 1) / (n - 1)
    return out


def dense_pagerank(g, alpha, tol=1e-14, max_iter=100000):
    n = g.n
    a = np.zeros((n, n))
    for u, nb in enumerate(adjacency_lists(g)):
        for v in nb:
            a[v, u] = 1.0
    col = a.sum(axis=0)
    nmat = np.where(col > 0, a / np.where(col > 0, col, 1), 1.0 / n)
    m = (1 - alpha) * nmat + alpha * np.full((n, n), 1.0 / n)
    x = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        y = m @ x
        if np.abs(y - x).sum() < tol:
            return y, m
        x = y
    return x, m


def brute_knn_edges(x, k):
    n = len(x)
    edges = set()
    for i in range(n):
        d = [(float(np.sum((x[i] - x[j]) ** 2)), j) for j in range(n) if j != i]
        d.sort()
        for _, j in d[:k]:
            edges.add((min(i, j), max(i, j)))
    return edges


def dense_laplacian(g):
    n = g.n
    w = np.zeros((n, n))
    for u, nb in enumerate(adjacency_lists(g)):
        for v in nb:
            w[u, v] = 1.0
    deg = w.sum(axis=1)
    inv = np.array([1 / np.sqrt(d) if d > 0 else 0.0 for d in deg])
    return np.diag((deg > 0).astype(float)) - inv[:, None] * w * inv[None, :]


def spectral_filter(g, x, thetas, lmax=None):
    """``U (sum_k theta_k T_k(2 Lambda / lmax - 1)) U^T x`` from numpy.linalg.eigh."""
    lam, u = np.linalg.eigh(dense_laplacian(g))
    if lmax is None:
        lmax = lam.max()
    scaled = 2 * lam / lmax - 1
    response = np.polynomial.chebyshev.chebval(scaled, thetas)
    return u @ (response * (u.T @ x))


def voterank_trace(g, r):
    """Direct replay of the voting rounds, recording each round's scores."""
    adj = adjacency_lists(g)
    n = g.n
    weaken = 1.0 / (2.0 * g.edge_count / n)
    va = [1.0] * n
    picked = []
    rounds = []
    for _ in range(r):
        s = [0.0 if u in picked else sum(va[v] for v in sorted(adj[u])) for u in range(n)]
        cand = [u for u in range(n) if u not in picked]
        best = max(cand, key=lambda u: (s[u], -u))
        rounds.append((s, best))
        picked.append(best)
        va[best] = 0.0
        for v in adj[best]:
            va[v] = max(0.0, va[v] - weaken)
    return picked, rounds
