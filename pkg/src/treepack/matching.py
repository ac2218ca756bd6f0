"""Edge-disjoint perfect matching extraction from bipartite pairs.

The extractor repeatedly computes a maximum matching (Hopcroft-Karp with a
randomized vertex relabeling per round for tie-breaking), records it and
removes its edges while the matching stays perfect, and stops at the first
non-perfect maximum matching.  On a d-regular pair this provably yields
exactly d matchings; on irregular pairs the count is reported next to the
theory targets below, never asserted against them.

Targets: the pseudo-random pair bound floor((1 - eta^(1/3)) * d * nu) and
the random-pair slack delta = sqrt(16 * ln(nu) / (nu * p)) (vacuous when
delta >= 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, rng
from .graphs import Graph


@dataclass(frozen=True)
class MatchingFamily:
    """Edge-disjoint perfect matchings of a bipartite pair.

    Edges use pair-local coordinates: side A is {0..nu-1}, side B is
    {nu..2nu-1}.  ``matchings`` and ``residual`` partition the pair's edge
    set; each matching is sorted by its A endpoint.
    """

    nu: int
    matchings: tuple[tuple[tuple[int, int], ...], ...]
    residual: tuple[tuple[int, int], ...]

    @property
    def s(self) -> int:
        return len(self.matchings)


def _pair_sides(pair: Graph) -> tuple[int, np.ndarray, np.ndarray]:
    if pair.n % 2 != 0:
        raise ValueError(f"bipartite pair needs even vertex count, got n={pair.n}")
    nu = pair.n // 2
    e = pair.edge_array
    if e.size and (e[:, 0].max(initial=-1) >= nu or e[:, 1].min(initial=2 * nu) < nu):
        raise ValueError("pair has an edge not crossing sides {0..nu-1} and {nu..2nu-1}")
    return nu, e[:, 0].astype(np.int64), e[:, 1].astype(np.int64) - nu


def pack_matchings(pair: Graph, seed: int) -> MatchingFamily:
    """Greedily extract edge-disjoint perfect matchings from a bipartite pair.

    Each round relabels both sides with fresh random permutations from
    stream (seed, "matching-shuffle") before running the deterministic
    maximum-matching kernel, removes the matching if perfect, and stops
    otherwise.  Deterministic in (pair, seed).
    """
    nu, left, right = _pair_sides(pair)
    edge_index = {(int(a), int(b)): k for k, (a, b) in enumerate(zip(left, right))}
    alive = np.ones(left.size, dtype=bool)
    st = rng.stream(seed, "matching-shuffle")
    matchings = []
    while True:
        perm_a = st.permutation(nu)
        perm_b = st.permutation(nu)
        a2 = perm_a[left[alive]]
        b2 = perm_b[right[alive]]
        order = np.lexsort((b2, a2))
        indices = b2[order].astype(np.int32)
        indptr = np.searchsorted(a2[order], np.arange(nu + 1)).astype(np.int64)
        match = kernels.hopcroft_karp(nu, nu, indptr, indices)
        if match.size == 0 or np.any(match < 0):
            break
        inv_b = np.empty(nu, dtype=np.int64)
        inv_b[perm_b] = np.arange(nu)
        partner = inv_b[match[perm_a]]  # partner[a] in original labels
        for a in range(nu):
            alive[edge_index[(a, int(partner[a]))]] = False
        matchings.append(tuple((a, int(partner[a]) + nu) for a in range(nu)))
    live = np.flatnonzero(alive)
    residual = tuple((int(left[k]), int(right[k]) + nu) for k in live)
    return MatchingFamily(nu=nu, matchings=tuple(matchings), residual=residual)


def fk_pseudo_target(eta: float, d: float, nu: int) -> int:
    """Matching count promised for an (eta, d)-regular pair:
    floor((1 - eta^(1/3)) * d * nu).

    Negative values (eta >= 1) mean the bound promises nothing.  The side
    condition eta^(4/3) * d^2 * nu >> 1 is the caller's to report.
    """
    if eta <= 0:
        raise ValueError(f"eta must be positive, got {eta}")
    if nu <= 0:
        raise ValueError(f"nu must be positive, got {nu}")
    # the 1e-9 guard keeps cube-root rounding from pulling an exact integer
    # value (e.g. eta = 0.729, d = 1, nu = 10) below its floor
    return math.floor((1.0 - eta ** (1.0 / 3.0)) * d * nu + 1e-9)


@dataclass(frozen=True)
class RandomPairSlack:
    """The random-pair matching deficit delta; vacuous when >= 1."""

    value: float
    vacuous: bool


def fk_random_delta(nu: int, p: float) -> RandomPairSlack:
    """delta = sqrt(16 * ln(nu) / (nu * p)) for a random pair of side nu and
    edge probability p; at desk scale this is often >= 1 and flagged vacuous."""
    if nu < 2:
        raise ValueError(f"need nu >= 2, got {nu}")
    if p <= 0:
        raise ValueError(f"need p > 0, got {p}")
    value = math.sqrt(16.0 * math.log(nu) / (nu * p))
    return RandomPairSlack(value=value, vacuous=value >= 1.0)
