"""Pure NumPy/Python kernels.

These are the reference implementations of the two hot loops:

* pairwise AND-popcount maxima (co-degree scans), done here as blocked
  float32 matrix products, which are exact for counts below 2**24;
* Hopcroft-Karp maximum bipartite matching, done here with plain Python
  lists.

The compiled backend in ``_speedups.pyx`` mirrors both functions operation
for operation; for identical inputs the two backends return identical
outputs, including tie-breaking (first maximizer in lexicographic pair
order, same augmenting paths).
"""

from __future__ import annotations

import numpy as np

NAME = "pure"

_BLOCK_ROWS = 1024
_INF = 1 << 30


def pairwise_codegree_max(mat: np.ndarray) -> tuple[int, int, int]:
    """Maximum over row pairs i < j of ``|row_i AND row_j|``.

    Returns ``(value, i, j)`` for the lexicographically first maximizing
    pair, or ``(0, -1, -1)`` when there are fewer than two rows.
    """
    rows = mat.shape[0]
    if rows < 2:
        return 0, -1, -1
    dense = np.ascontiguousarray(mat, dtype=np.float32)
    best, best_i, best_j = -1, -1, -1
    for start in range(0, rows, _BLOCK_ROWS):
        stop = min(start + _BLOCK_ROWS, rows)
        block = dense[start:stop] @ dense.T  # (stop-start, rows) of exact counts
        # mask out j <= i so only ordered pairs survive
        cols = np.arange(rows)[None, :]
        block[cols <= np.arange(start, stop)[:, None]] = -1.0
        flat = int(np.argmax(block))
        value = block[flat // rows, flat % rows]
        if value > best:
            best = value
            best_i = start + flat // rows
            best_j = flat % rows
    return int(best), best_i, best_j


def hopcroft_karp(nl: int, nr: int, indptr, indices) -> np.ndarray:
    """Maximum matching of a bipartite graph given in CSR form.

    ``indptr`` has length nl+1; ``indices[indptr[u]:indptr[u+1]]`` lists the
    right-neighbors of left vertex u.  Returns an int32 array ``match`` of
    length nl with ``match[u]`` the matched right vertex or -1.

    Fully deterministic: BFS scans left vertices in increasing index order
    and DFS follows adjacency order, with per-phase adjacency cursors.
    """
    indptr = [int(x) for x in indptr]
    indices = [int(x) for x in indices]
    match_l = [-1] * nl
    match_r = [-1] * nr
    dist = [0] * nl
    ptr = [0] * nl
    queue = [0] * nl
    stack_u = [0] * (nl + 1)
    stack_v = [0] * (nl + 1)

    while True:
        # BFS phase: layer left vertices by alternating distance.
        head = tail = 0
        for u in range(nl):
            if match_l[u] < 0:
                dist[u] = 0
                queue[tail] = u
                tail += 1
            else:
                dist[u] = _INF
        free_reachable = False
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u]
            for k in range(indptr[u], indptr[u + 1]):
                w = match_r[indices[k]]
                if w < 0:
                    free_reachable = True
                elif dist[w] == _INF:
                    dist[w] = du + 1
                    queue[tail] = w
                    tail += 1
        if not free_reachable:
            break

        # DFS phase: vertex-disjoint augmenting paths along the layering.
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
                    dist[x] = _INF  # dead end for the rest of this phase
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

    return np.asarray(match_l, dtype=np.int32)
