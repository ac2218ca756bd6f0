# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: AND-popcount pair scans and Hopcroft-Karp matching.

Mirrors ``_fallback`` exactly, including tie-breaking, so the two backends
are interchangeable.  The co-degree scan works on bit-packed rows (one
uint64 word per 64 columns) prepared by the dispatching wrapper.
"""

import numpy as np

NAME = "compiled"

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    #define TP_POPCOUNT64(x) __builtin_popcountll(x)
    #else
    static int TP_POPCOUNT64(unsigned long long x) {
        int c = 0;
        while (x) { x &= x - 1; c++; }
        return c;
    }
    #endif
    """
    int TP_POPCOUNT64(unsigned long long x) nogil

DEF INF = 1073741824  # 1 << 30, matches the pure backend


def packed_pairwise_codegree_max(const unsigned long long[:, ::1] rows):
    """Max over row pairs i < j of popcount(row_i & row_j) on packed rows.

    Returns (value, i, j) with the lexicographically first maximizing pair,
    or (0, -1, -1) with fewer than two rows.
    """
    cdef Py_ssize_t n = rows.shape[0]
    cdef Py_ssize_t words = rows.shape[1]
    cdef Py_ssize_t i, j, k
    cdef int count, best = -1
    cdef Py_ssize_t best_i = -1, best_j = -1
    if n < 2:
        return 0, -1, -1
    with nogil:
        for i in range(n - 1):
            for j in range(i + 1, n):
                count = 0
                for k in range(words):
                    count += TP_POPCOUNT64(rows[i, k] & rows[j, k])
                if count > best:
                    best = count
                    best_i = i
                    best_j = j
    return best, best_i, best_j


def hopcroft_karp(int nl, int nr, const long long[::1] indptr, const int[::1] indices):
    """Maximum bipartite matching; same contract as the pure backend."""
    match_arr = np.full(nl, -1, dtype=np.int32)
    cdef int[::1] match_l = match_arr
    match_r_arr = np.full(nr, -1, dtype=np.int32)
    cdef int[::1] match_r = match_r_arr
    dist_arr = np.zeros(nl, dtype=np.int32)
    cdef int[::1] dist = dist_arr
    ptr_arr = np.zeros(nl, dtype=np.int64)
    cdef long long[::1] ptr = ptr_arr
    queue_arr = np.zeros(max(nl, 1), dtype=np.int32)
    cdef int[::1] queue = queue_arr
    su_arr = np.zeros(nl + 1, dtype=np.int32)
    cdef int[::1] stack_u = su_arr
    sv_arr = np.zeros(nl + 1, dtype=np.int32)
    cdef int[::1] stack_v = sv_arr

    cdef int u, w, v, x, root, du, chosen, top, i
    cdef int head, tail
    cdef bint free_reachable, augment
    cdef long long k

    with nogil:
        while True:
            head = 0
            tail = 0
            for u in range(nl):
                if match_l[u] < 0:
                    dist[u] = 0
                    queue[tail] = u
                    tail += 1
                else:
                    dist[u] = INF
            free_reachable = False
            while head < tail:
                u = queue[head]
                head += 1
                du = dist[u]
                for k in range(indptr[u], indptr[u + 1]):
                    w = match_r[indices[k]]
                    if w < 0:
                        free_reachable = True
                    elif dist[w] == INF:
                        dist[w] = du + 1
                        queue[tail] = w
                        tail += 1
            if not free_reachable:
                break

            for u in range(nl):
                ptr[u] = indptr[u]
            for root in range(nl):
                if match_l[root] >= 0:
                    continue
                top = 0
                stack_u[0] = root
                while top >= 0:
                    x = stack_u[top]
                    chosen = -1
                    augment = False
                    while ptr[x] < indptr[x + 1]:
                        v = indices[ptr[x]]
                        ptr[x] += 1
                        w = match_r[v]
                        if w < 0:
                            chosen = v
                            augment = True
                            break
                        if dist[w] == dist[x] + 1:
                            chosen = v
                            break
                    if chosen < 0:
                        dist[x] = INF
                        top -= 1
                    elif augment:
                        stack_v[top] = chosen
                        for i in range(top, -1, -1):
                            match_l[stack_u[i]] = stack_v[i]
                            match_r[stack_v[i]] = stack_u[i]
                        break
                    else:
                        stack_v[top] = chosen
                        top += 1
                        stack_u[top] = match_r[chosen]

    return match_arr
