# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled BFS, Brandes and VoteRank kernels over CSR arrays."""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t idx_t


def closeness(const idx_t[::1] offsets, const idx_t[::1] neighbors, active):
    cdef cnp.uint8_t[::1] act = np.ascontiguousarray(active, dtype=np.uint8)
    cdef Py_ssize_t n = act.shape[0]
    cdef double[::1] out = np.zeros(n, dtype=np.float64)
    cdef idx_t[::1] dist = np.full(n, -1, dtype=np.int64)
    cdef idx_t[::1] queue = np.empty(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t s, head, tail, i, k
    cdef idx_t v, w, dv
    cdef long long total, n_active = 0
    cdef double c
    for s in range(n):
        n_active += act[s]
    for s in range(n):
        if not act[s]:
            continue
        dist[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        total = 0
        while head < tail:
            v = queue[head]
            head += 1
            dv = dist[v] + 1
            for i in range(offsets[v], offsets[v + 1]):
                w = neighbors[i]
                if act[w] and dist[w] < 0:
                    dist[w] = dv
                    total += dv
                    queue[tail] = w
                    tail += 1
        if total > 0 and n_active > 1:
            c = (tail - 1) / <double>total
            c *= (tail - 1) / <double>(n_active - 1)
            out[s] = c
        for k in range(tail):
            dist[queue[k]] = -1
    return np.asarray(out)


def betweenness(const idx_t[::1] offsets, const idx_t[::1] neighbors, active):
    cdef cnp.uint8_t[::1] act = np.ascontiguousarray(active, dtype=np.uint8)
    cdef Py_ssize_t n = act.shape[0]
    cdef double[::1] bc = np.zeros(n, dtype=np.float64)
    cdef double[::1] sigma = np.zeros(n, dtype=np.float64)
    cdef double[::1] delta = np.zeros(n, dtype=np.float64)
    cdef idx_t[::1] dist = np.full(n, -1, dtype=np.int64)
    # BFS visit order doubles as the Brandes stack
    cdef idx_t[::1] order = np.empty(max(n, 1), dtype=np.int64)
    cdef Py_ssize_t s, head, tail, i, j
    cdef idx_t v, w
    for s in range(n):
        if not act[s]:
            continue
        dist[s] = 0
        sigma[s] = 1.0
        order[0] = s
        head = 0
        tail = 1
        while head < tail:
            v = order[head]
            head += 1
            for i in range(offsets[v], offsets[v + 1]):
                w = neighbors[i]
                if not act[w]:
                    continue
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    order[tail] = w
                    tail += 1
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
        for j in range(tail - 1, -1, -1):
            w = order[j]
            for i in range(offsets[w], offsets[w + 1]):
                v = neighbors[i]
                if act[v] and dist[v] == dist[w] - 1:
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
        for j in range(tail):
            v = order[j]
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0
    return np.asarray(bc) / 2.0


def voterank(const idx_t[::1] offsets, const idx_t[::1] neighbors, Py_ssize_t r, double weaken):
    cdef Py_ssize_t n = offsets.shape[0] - 1
    cdef double[::1] va = np.ones(n, dtype=np.float64)
    cdef cnp.uint8_t[::1] chosen = np.zeros(n, dtype=np.uint8)
    cdef idx_t[::1] order = np.empty(r, dtype=np.int64)
    cdef Py_ssize_t t, u, i, best
    cdef idx_t v
    cdef double score, best_score, left
    for t in range(r):
        best = -1
        best_score = -1.0
        for u in range(n):
            if chosen[u]:
                continue
            score = 0.0
            for i in range(offsets[u], offsets[u + 1]):
                score += va[neighbors[i]]
            if score > best_score:
                best_score = score
                best = u
        chosen[best] = 1
        va[best] = 0.0
        order[t] = best
        for i in range(offsets[best], offsets[best + 1]):
            v = neighbors[i]
            left = va[v] - weaken
            va[v] = left if left > 0.0 else 0.0
    return np.asarray(order), np.asarray(va)
