"""Shared brute-force oracles and small builders for the test suite."""

from __future__ import annotations

from itertools import permutations

import numpy as np

from treepack import Graph, TreeTemplate


def brute_min_degree(g: Graph) -> int:
    degs = []
    for v in range(g.n):
        degs.append(sum(1 for w in range(g.n) if g.has_edge(v, w)))
    return min(degs)


def brute_max_codegree(g: Graph) -> int:
    best = 0
    for u in range(g.n):
        nu_ = {w for w in range(g.n) if g.has_edge(u, w)}
        for v in range(u + 1, g.n):
            cd = sum(1 for w in nu_ if g.has_edge(v, w))
            best = max(best, cd)
    return best


def brute_tree_isomorphic(a: TreeTemplate, b: TreeTemplate) -> bool:
    if a.t != b.t:
        return False
    eb = {frozenset(e) for e in b.edges}
    for perm in permutations(range(a.t)):
        if {frozenset((perm[u], perm[v])) for u, v in a.edges} == eb:
            return True
    return False


def random_tree(t: int, seed: int) -> TreeTemplate:
    """Uniform labeled tree from a random sequence (decoded the classic way)."""
    if t == 1:
        return TreeTemplate(1, ())
    if t == 2:
        return TreeTemplate(2, ((0, 1),))
    rng = np.random.default_rng(seed)
    seq = rng.integers(0, t, size=t - 2)
    degree = np.ones(t, dtype=int)
    for x in seq:
        degree[x] += 1
    edges = []
    import heapq

    leaves = [v for v in range(t) if degree[v] == 1]
    heapq.heapify(leaves)
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, int(x)))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, int(x))
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((u, v))
    return TreeTemplate(t, tuple(edges))


def all_labeled_trees(t: int):
    """Every labeled tree on t vertices (sequence decoding, t^(t-2) of them)."""
    if t == 1:
        yield TreeTemplate(1, ())
        return
    if t == 2:
        yield TreeTemplate(2, ((0, 1),))
        return
    import heapq
    from itertools import product

    for seq in product(range(t), repeat=t - 2):
        degree = [1] * t
        for x in seq:
            degree[x] += 1
        edges = []
        leaves = [v for v in range(t) if degree[v] == 1]
        heapq.heapify(leaves)
        deg = list(degree)
        for x in seq:
            leaf = heapq.heappop(leaves)
            edges.append((leaf, x))
            deg[x] -= 1
            if deg[x] == 1:
                heapq.heappush(leaves, x)
        u = heapq.heappop(leaves)
        v = heapq.heappop(leaves)
        edges.append((u, v))
        yield TreeTemplate(t, tuple(edges))


def graph_from_sets(n: int, pairs) -> Graph:
    return Graph(n, sorted(tuple(sorted(p)) for p in pairs))
