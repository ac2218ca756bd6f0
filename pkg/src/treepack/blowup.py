"""Permutation layouts and tree blow-ups.

A permutation sigma of {0..n-1} splits the vertex set into t parts of size
nu = n/t (part i holds positions i*nu .. (i+1)*nu - 1 of sigma).  The
blow-up of a host graph keeps exactly the host edges that cross a
*super-edge*: a pair of parts corresponding to an edge of the tree
template.  The prime variant keeps all cross-part edges instead, but still
drops edges inside a part.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import DivisibilityError
from .graphs import Graph, check_epsilon
from .trees import TreeTemplate


@dataclass(frozen=True)
class PermutationLayout:
    """A permutation together with its induced equal-size partition."""

    n: int
    t: int
    nu: int
    sigma: np.ndarray  # the permutation itself, position -> vertex
    parts: tuple  # t sorted int32 arrays, pairwise disjoint, covering {0..n-1}
    part_of: np.ndarray  # vertex -> part index
    local_index: np.ndarray  # vertex -> position within its sorted part

    def part_set(self, i: int) -> set[int]:
        return set(self.parts[i].tolist())


def build_layout(n: int, t: int, sigma) -> PermutationLayout:
    """Partition {0..n-1} into t parts of size n/t according to sigma."""
    if t <= 0 or n <= 0:
        raise ValueError(f"need positive n and t, got n={n}, t={t}")
    if n % t != 0:
        raise DivisibilityError(f"t={t} does not divide n={n}")
    sig = np.asarray(sigma, dtype=np.int64)
    if sig.shape != (n,) or not np.array_equal(np.sort(sig), np.arange(n)):
        raise ValueError("sigma is not a permutation of {0..n-1}")
    nu = n // t
    part_of = np.empty(n, dtype=np.int32)
    part_of[sig] = np.repeat(np.arange(t, dtype=np.int32), nu)
    parts = []
    local_index = np.empty(n, dtype=np.int32)
    for i in range(t):
        block = np.sort(sig[i * nu : (i + 1) * nu]).astype(np.int32)
        local_index[block] = np.arange(nu, dtype=np.int32)
        block.flags.writeable = False
        parts.append(block)
    sig = sig.astype(np.int32)
    sig.flags.writeable = False
    part_of.flags.writeable = False
    local_index.flags.writeable = False
    return PermutationLayout(n, t, nu, sig, tuple(parts), part_of, local_index)


@dataclass(frozen=True)
class BlowupGraph:
    """Host edges surviving a layout's part filter.

    ``pair_ranks`` maps an unordered part pair to the indices (into the
    host edge array) of the kept edges crossing it; ``kept_ranks`` is their
    sorted union.  Only cross-part edges are ever kept; without the prime
    flag only super-edge pairs survive.
    """

    host: Graph
    layout: PermutationLayout
    template: TreeTemplate
    prime: bool
    super_edges: tuple[tuple[int, int], ...]
    kept_ranks: np.ndarray
    pair_ranks: dict

    @property
    def num_kept(self) -> int:
        return int(self.kept_ranks.size)

    def kept_edges(self) -> np.ndarray:
        """The kept host edges as an (k, 2) array."""
        return self.host.edge_array[self.kept_ranks]

    def pair_edges(self, i: int, j: int) -> np.ndarray:
        key = (i, j) if i < j else (j, i)
        ranks = self.pair_ranks.get(key)
        if ranks is None:
            return np.empty((0, 2), dtype=np.int32)
        return self.host.edge_array[ranks]


def build_blowup(
    g: Graph, layout: PermutationLayout, template: TreeTemplate, prime: bool = False
) -> BlowupGraph:
    """Filter host edges through the layout: keep an edge iff its endpoints
    lie in two parts forming a super-edge (or any two distinct parts when
    prime)."""
    if layout.t != template.t:
        raise ValueError(f"layout t={layout.t} does not match template t={template.t}")
    if layout.n != g.n:
        raise ValueError(f"layout n={layout.n} does not match graph n={g.n}")
    e = g.edge_array
    pu = layout.part_of[e[:, 0]].astype(np.int64)
    pv = layout.part_of[e[:, 1]].astype(np.int64)
    lo = np.minimum(pu, pv)
    hi = np.maximum(pu, pv)
    cross = lo != hi
    t = template.t
    if prime:
        keep = cross
    else:
        is_super = np.zeros((t, t), dtype=bool)
        for a, b in template.edges:
            is_super[a, b] = True
        keep = cross & is_super[lo, hi]
    kept_ranks = np.flatnonzero(keep)
    key = lo * t + hi
    pair_ranks = {}
    pairs = (
        [(a, b) for a in range(t) for b in range(a + 1, t)] if prime else list(template.edges)
    )
    for a, b in pairs:
        ranks = np.flatnonzero(keep & (key == a * t + b))
        pair_ranks[(a, b)] = ranks
    return BlowupGraph(
        host=g,
        layout=layout,
        template=template,
        prime=prime,
        super_edges=tuple(template.edges),
        kept_ranks=kept_ranks,
        pair_ranks=pair_ranks,
    )


@dataclass(frozen=True)
class PairRegularityReport:
    """Degree/co-degree regularity of one part pair of a blow-up."""

    pair: tuple[int, int]
    epsilon: float
    p: float
    min_cross_degree: int
    max_within_codegree: int
    ok: bool
    worst_degree_vertex: int | None = None
    worst_codegree_pair: tuple[int, int] | None = None

    def to_dict(self) -> dict:
        return {
            "pair": list(self.pair),
            "epsilon": self.epsilon,
            "p": self.p,
            "min_cross_degree": self.min_cross_degree,
            "max_within_codegree": self.max_within_codegree,
            "ok": self.ok,
            "worst_degree_vertex": self.worst_degree_vertex,
            "worst_codegree_pair": list(self.worst_codegree_pair)
            if self.worst_codegree_pair is not None
            else None,
        }


def _cross_matrix(b: BlowupGraph, i: int, j: int) -> np.ndarray:
    """Boolean nu-by-nu adjacency between parts i and j (kept edges only)."""
    layout = b.layout
    edges = b.pair_edges(i, j)
    mat = np.zeros((layout.nu, layout.nu), dtype=bool)
    if edges.size:
        u = edges[:, 0]
        v = edges[:, 1]
        u_in_i = layout.part_of[u] == i
        rows = np.where(u_in_i, layout.local_index[u], layout.local_index[v])
        cols = np.where(u_in_i, layout.local_index[v], layout.local_index[u])
        mat[rows, cols] = True
    return mat


def certify_pair(b: BlowupGraph, i: int, j: int, epsilon: float, p: float) -> PairRegularityReport:
    """Certify one part pair: min cross-degree against (1-eps)*nu*p and max
    same-side co-degree into the other side against (1+eps)*nu*p**2."""
    check_epsilon(epsilon)
    layout = b.layout
    nu = layout.nu
    mat = _cross_matrix(b, i, j)
    row_deg = mat.sum(axis=1)
    col_deg = mat.sum(axis=0)
    ri = int(np.argmin(row_deg))
    rj = int(np.argmin(col_deg))
    if row_deg[ri] <= col_deg[rj]:
        min_degree = int(row_deg[ri])
        worst_vertex = int(layout.parts[i][ri])
    else:
        min_degree = int(col_deg[rj])
        worst_vertex = int(layout.parts[j][rj])
    cd_i, ai, aj = kernels.max_codegree_pairs(mat)
    cd_j, bi, bj = kernels.max_codegree_pairs(np.ascontiguousarray(mat.T))
    if cd_i >= cd_j:
        max_codegree = cd_i
        worst_pair = (int(layout.parts[i][ai]), int(layout.parts[i][aj])) if ai >= 0 else None
    else:
        max_codegree = cd_j
        worst_pair = (int(layout.parts[j][bi]), int(layout.parts[j][bj])) if bi >= 0 else None
    ok = min_degree >= (1.0 - epsilon) * nu * p and max_codegree <= (1.0 + epsilon) * nu * p * p
    return PairRegularityReport(
        pair=(i, j),
        epsilon=epsilon,
        p=p,
        min_cross_degree=min_degree,
        max_within_codegree=int(max_codegree),
        ok=ok,
        worst_degree_vertex=worst_vertex,
        worst_codegree_pair=worst_pair,
    )


def certify_blowup(
    b: BlowupGraph, epsilon: float, p: float, strict: bool = False
) -> list[PairRegularityReport]:
    """One report per super-edge; the blow-up is (eps, p)-regular iff all ok.

    With ``strict`` every cross-part pair is checked, not just super-edges;
    that is only meaningful for the prime variant, which keeps edges
    between all part pairs.
    """
    if strict:
        pairs = [(a, bb) for a in range(b.template.t) for bb in range(a + 1, b.template.t)]
    else:
        pairs = list(b.super_edges)
    return [certify_pair(b, i, j, epsilon, p) for i, j in pairs]


def crossing_probability(t: int, n: int) -> Fraction:
    """Exact probability that a fixed host edge crosses a super-edge under a
    uniformly random layout: 2(t-1)/t^2 * (1 + 1/(n-1)).

    Exact for every finite n: condition on the position of one endpoint;
    the other endpoint lands in a specific other part with probability
    nu/(n-1), there are two orientations, and the t-1 tree edges give
    disjoint events.
    """
    if t < 2:
        raise ValueError(f"need t >= 2, got t={t}")
    if n % t != 0:
        raise DivisibilityError(f"t={t} does not divide n={n}")
    return Fraction(2 * (t - 1), t * t) * (1 + Fraction(1, n - 1))
