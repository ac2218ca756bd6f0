"""Immutable simple graphs, random generators, edge-list I/O, and the
degree/co-degree regularity certifier.

A graph is *(eps, p)-regular* when every vertex has degree at least
``(1-eps)*n*p`` and every vertex pair has co-degree (number of common
neighbors) at most ``(1+eps)*n*p**2``.  ``certify_regular`` checks both
conditions exactly and reports the extremal witnesses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels, rng
from .errors import FormatError

#: Co-degree certification materializes an n-by-n boolean adjacency; keep a
#: sane ceiling so a mistyped n fails fast instead of swapping.
DENSE_LIMIT = 16384

#: Bitset/adjacency-matrix caches are only kept on instances up to this size.
BITSET_CACHE_LIMIT = 4096


class Graph:
    """Immutable simple undirected graph on vertex set {0..n-1}.

    Edges are stored as a lexicographically sorted ``(m, 2)`` int32 array
    with ``u < v`` per row.  Instances are safe to share across threads.
    """

    __slots__ = ("_n", "_edges", "_adj", "_degrees", "_edge_keys", "_dense")

    def __init__(self, n: int, edges, *, _trusted: bool = False):
        if n <= 0:
            raise ValueError(f"vertex count must be positive, got {n}")
        if not isinstance(edges, np.ndarray):
            edges = list(edges)
        arr = np.asarray(edges, dtype=np.int32)
        if arr.size == 0:
            arr = np.empty((0, 2), dtype=np.int32)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ValueError("edges must be an iterable of vertex pairs")
        if not _trusted:
            if arr.size and (arr.min() < 0 or arr.max() >= n):
                raise ValueError("edge endpoint out of range")
            lo = arr.min(axis=1)
            hi = arr.max(axis=1)
            if np.any(lo == hi):
                raise ValueError("self-loops are not allowed")
            arr = np.column_stack([lo, hi])
            order = np.lexsort((arr[:, 1], arr[:, 0]))
            arr = arr[order]
            if arr.shape[0] > 1 and np.any(np.all(arr[1:] == arr[:-1], axis=1)):
                raise ValueError("duplicate edges are not allowed")
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        self._n = int(n)
        self._edges = arr
        self._adj = None
        self._degrees = None
        self._edge_keys = None
        self._dense = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, np.empty((0, 2), dtype=np.int32), _trusted=True)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        u, v = np.triu_indices(n, k=1)
        return cls(n, np.column_stack([u, v]).astype(np.int32), _trusted=True)

    # -- basic accessors -------------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def num_edges(self) -> int:
        return self._edges.shape[0]

    @property
    def edge_array(self) -> np.ndarray:
        """Read-only (m, 2) array, rows sorted lexicographically, u < v."""
        return self._edges

    def edges(self):
        """Iterate edges as (u, v) tuples with u < v."""
        for u, v in self._edges:
            yield int(u), int(v)

    @property
    def degrees(self) -> np.ndarray:
        if self._degrees is None:
            deg = np.bincount(self._edges.ravel(), minlength=self._n)
            deg.flags.writeable = False
            self._degrees = deg
        return self._degrees

    def degree(self, v: int) -> int:
        return int(self.degrees[v])

    def neighbors(self, v: int) -> np.ndarray:
        if self._adj is None:
            e = self._edges
            src = np.concatenate([e[:, 0], e[:, 1]])
            dst = np.concatenate([e[:, 1], e[:, 0]])
            order = np.lexsort((dst, src))
            bounds = np.searchsorted(src[order], np.arange(self._n + 1))
            self._adj = (dst[order], bounds)
        dst, bounds = self._adj
        return dst[bounds[v] : bounds[v + 1]]

    def _keys(self):
        if self._edge_keys is None:
            e = self._edges.astype(np.int64)
            self._edge_keys = frozenset((e[:, 0] * self._n + e[:, 1]).tolist())
        return self._edge_keys

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        a, b = (u, v) if u < v else (v, u)
        return a * self._n + b in self._keys()

    def adjacency_matrix(self) -> np.ndarray:
        """Dense boolean adjacency (cached for small n)."""
        if self._dense is not None:
            return self._dense
        if self._n > DENSE_LIMIT:
            raise ValueError(f"n={self._n} exceeds dense adjacency limit {DENSE_LIMIT}")
        mat = np.zeros((self._n, self._n), dtype=bool)
        mat[self._edges[:, 0], self._edges[:, 1]] = True
        mat[self._edges[:, 1], self._edges[:, 0]] = True
        mat.flags.writeable = False
        if self._n <= BITSET_CACHE_LIMIT:
            self._dense = mat
        return mat

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._edges, other._edges)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.num_edges})"


# -- random generators ---------------------------------------------------------

_CHUNK = 1 << 22


def generate_gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi-Gilbert random graph: each of the C(n, 2) vertex pairs is
    an edge independently with probability p.

    Deterministic in (n, p, seed): pair k (lexicographic order) is decided
    by the k-th variate of the ("gnp", seed) Philox stream.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    if n <= 0:
        raise ValueError(f"n must be positive, got {n}")
    total = n * (n - 1) // 2
    st = rng.stream(seed, "gnp")
    # row u covers pairs (u, u+1..n-1); row_start[u] = first linear index
    row_start = np.concatenate([[0], np.cumsum(n - 1 - np.arange(n - 1, dtype=np.int64))])
    hits = []
    for lo in range(0, total, _CHUNK):
        hi = min(lo + _CHUNK, total)
        mask = st.random(hi - lo) < p
        hits.append(np.flatnonzero(mask).astype(np.int64) + lo)
    k = np.concatenate(hits) if hits else np.empty(0, dtype=np.int64)
    u = np.searchsorted(row_start, k, side="right") - 1
    v = k - row_start[u] + u + 1
    return Graph(n, np.column_stack([u, v]).astype(np.int32), _trusted=True)


def generate_bipartite(nu: int, p: float, seed: int) -> Graph:
    """Random bipartite graph with sides A = {0..nu-1} and B = {nu..2nu-1};
    each of the nu*nu cross pairs is an edge independently with probability p.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    if nu <= 0:
        raise ValueError(f"nu must be positive, got {nu}")
    st = rng.stream(seed, "bipartite")
    rows = []
    for a in range(nu):
        hit = np.flatnonzero(st.random(nu) < p).astype(np.int32)
        if hit.size:
            rows.append(np.column_stack([np.full(hit.size, a, dtype=np.int32), hit + nu]))
    edges = np.concatenate(rows) if rows else np.empty((0, 2), dtype=np.int32)
    return Graph(2 * nu, edges, _trusted=True)


def generate_regular_bipartite(nu: int, d: int, seed: int) -> Graph:
    """Random d-regular bipartite pair built Latin-square style.

    Takes d distinct cyclic-shift matchings of the square L(i, j) = i + j
    mod nu and scrambles both sides with random permutations; every vertex
    ends up with degree exactly d.
    """
    if not 1 <= d <= nu:
        raise ValueError(f"need 1 <= d <= nu, got d={d}, nu={nu}")
    st = rng.stream(seed, "regular-bipartite")
    row = st.permutation(nu)
    col = st.permutation(nu)
    shifts = st.permutation(nu)[:d]
    i = np.repeat(np.arange(nu, dtype=np.int64), d)
    j = col[(row[i] + np.tile(shifts, nu)) % nu]
    return Graph(2 * nu, np.column_stack([i, j + nu]).astype(np.int32))


# -- regularity certification ---------------------------------------------------


@dataclass(frozen=True)
class RegularityReport:
    """Outcome of a degree/co-degree regularity check."""

    epsilon: float
    p: float
    degree_ok: bool
    codegree_ok: bool
    min_degree: int
    max_codegree: int
    worst_degree_vertex: int
    worst_codegree_pair: tuple[int, int] | None

    @property
    def is_regular(self) -> bool:
        return self.degree_ok and self.codegree_ok

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "p": self.p,
            "degree_ok": self.degree_ok,
            "codegree_ok": self.codegree_ok,
            "is_regular": self.is_regular,
            "min_degree": self.min_degree,
            "max_codegree": self.max_codegree,
            "worst_degree_vertex": self.worst_degree_vertex,
            "worst_codegree_pair": list(self.worst_codegree_pair)
            if self.worst_codegree_pair is not None
            else None,
        }


def check_epsilon(epsilon: float) -> None:
    # the regularity notion presumes 0 < eps < 1; reject everything else
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie strictly between 0 and 1, got {epsilon}")


def certify_regular(g: Graph, epsilon: float, p: float) -> RegularityReport:
    """Check (eps, p)-regularity of g exactly.

    Degrees: min over vertices, compared against (1-eps)*n*p.  Co-degrees:
    max over all vertex pairs, compared against (1+eps)*n*p**2 (p = 0 is
    permitted and degenerates to requiring an empty graph to pass).
    """
    check_epsilon(epsilon)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    deg = g.degrees
    worst_v = int(np.argmin(deg))
    min_degree = int(deg[worst_v])
    max_codegree, wi, wj = kernels.max_codegree_pairs(g.adjacency_matrix())
    worst_pair = (wi, wj) if wi >= 0 else None
    return RegularityReport(
        epsilon=epsilon,
        p=p,
        degree_ok=min_degree >= (1.0 - epsilon) * g.n * p,
        codegree_ok=max_codegree <= (1.0 + epsilon) * g.n * p * p,
        min_degree=min_degree,
        max_codegree=int(max_codegree),
        worst_degree_vertex=worst_v,
        worst_codegree_pair=worst_pair,
    )


# -- edge-list file format -------------------------------------------------------
#
# First line "n m", then m lines "u v" with 0 <= u < v < n, ASCII decimal.


def read_edge_list(path) -> Graph:
    """Parse the edge-list text format, reporting the offending line on error."""
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise FormatError("empty file", line=1)
    head = lines[0].split()
    if len(head) != 2:
        raise FormatError("expected header 'n m'", line=1)
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise FormatError("expected integer header 'n m'", line=1) from None
    if n <= 0 or m < 0:
        raise FormatError(f"invalid sizes n={n}, m={m}", line=1)
    if len(lines) - 1 != m:
        raise FormatError(f"expected {m} edge lines, found {len(lines) - 1}", line=len(lines))
    edges = np.empty((m, 2), dtype=np.int64)
    seen = set()
    for idx, text in enumerate(lines[1:], start=2):
        parts = text.split()
        if len(parts) != 2:
            raise FormatError(f"expected 'u v', got {text!r}", line=idx)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"non-integer endpoint in {text!r}", line=idx) from None
        if u == v:
            raise FormatError(f"self-loop at vertex {u}", line=idx)
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(f"vertex id out of range in ({u}, {v})", line=idx)
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise FormatError(f"duplicate edge ({key[0]}, {key[1]})", line=idx)
        seen.add(key)
        edges[idx - 2] = key
    return Graph(n, edges.astype(np.int32), _trusted=False)


def write_edge_list(g: Graph, path) -> None:
    """Write g in the edge-list text format (read_edge_list round-trips)."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{g.n} {g.num_edges}\n")
        for u, v in g.edge_array:
            fh.write(f"{u} {v}\n")
