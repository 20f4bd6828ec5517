"""Pure-Python versions of the compiled graph kernels.

Every loop here mirrors ``_kernels.pyx`` statement for statement so both
backends produce bit-identical floating point results.
"""
from collections import deque

import numpy as np


def closeness(offsets, neighbors, active):
    off = offsets.tolist()
    nb = neighbors.tolist()
    act = active.tolist()
    n = len(act)
    n_active = sum(act)
    out = [0.0] * n
    dist = [-1] * n
    for s in range(n):
        if not act[s]:
            continue
        dist[s] = 0
        seen = [s]
        q = deque([s])
        total = 0
        while q:
            v = q.popleft()
            dv = dist[v] + 1
            for i in range(off[v], off[v + 1]):
                w = nb[i]
                if act[w] and dist[w] < 0:
                    dist[w] = dv
                    total += dv
                    seen.append(w)
                    q.append(w)
        reach = len(seen)
        if total > 0 and n_active > 1:
            c = (reach - 1) / float(total)
            c *= (reach - 1) / float(n_active - 1)
            out[s] = c
        for v in seen:
            dist[v] = -1
    return np.asarray(out, dtype=np.float64)


def betweenness(offsets, neighbors, active):
    off = offsets.tolist()
    nb = neighbors.tolist()
    act = active.tolist()
    n = len(act)
    bc = [0.0] * n
    dist = [-1] * n
    sigma = [0.0] * n
    delta = [0.0] * n
    for s in range(n):
        if not act[s]:
            continue
        stack = []
        dist[s] = 0
        sigma[s] = 1.0
        q = deque([s])
        while q:
            v = q.popleft()
            stack.append(v)
            for i in range(off[v], off[v + 1]):
                w = nb[i]
                if not act[w]:
                    continue
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    q.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
        for j in range(len(stack) - 1, -1, -1):
            w = stack[j]
            for i in range(off[w], off[w + 1]):
                v = nb[i]
                if act[v] and dist[v] == dist[w] - 1:
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
        for v in stack:
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0
    out = np.asarray(bc, dtype=np.float64)
    return out / 2.0


def voterank(offsets, neighbors, r, weaken):
    off = offsets.tolist()
    nb = neighbors.tolist()
    n = len(off) - 1
    va = [1.0] * n
    chosen = [False] * n
    order = []
    for _ in range(r):
        best = -1
        best_score = -1.0
        for u in range(n):
            if chosen[u]:
                continue
            score = 0.0
            for i in range(off[u], off[u + 1]):
                score += va[nb[i]]
            if score > best_score:
                best_score = score
                best = u
        chosen[best] = True
        va[best] = 0.0
        order.append(best)
        for i in range(off[best], off[best + 1]):
            v = nb[i]
            left = va[v] - weaken
            va[v] = left if left > 0.0 else 0.0
    return np.asarray(order, dtype=np.int64), np.asarray(va, dtype=np.float64)
