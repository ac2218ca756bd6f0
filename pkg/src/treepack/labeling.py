"""Random blow-up families with uniform edge labeling.

The generator draws r independent random layouts, builds the blow-up G_i
for each, and then labels every host edge that appears in at least one
blow-up with a uniformly random index among the blow-ups containing it.
The label-i edges form the hat graph of index i; hat graphs are pairwise
edge-disjoint by construction and their union is exactly the labeled edge
set.  Edges contained in no blow-up stay unlabeled (they are counted, not
redrawn).

The number of blow-ups r and the multiplicity target kappa use natural
logarithms and round up; a ``scale`` knob shrinks r below the theory-sized
value for desk-scale experiments (reports always carry both numbers).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rng
from .blowup import BlowupGraph, build_blowup, build_layout, crossing_probability
from .errors import DivisibilityError
from .graphs import Graph, check_epsilon
from .trees import TreeTemplate


def r_value(epsilon: float, t: int, n: int, scale: float = 1.0) -> int:
    """Number of blow-ups to draw: ceil(scale * 30/eps^2 * t^2/(t-1) * ln n)."""
    check_epsilon(epsilon)
    if t < 2:
        raise ValueError(f"need t >= 2, got t={t}")
    if n < 2:
        raise ValueError(f"need n >= 2, got n={n}")
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    exact = scale * (30.0 / epsilon**2) * (t * t / (t - 1.0)) * math.log(n)
    return math.ceil(exact)


def kappa_value(epsilon: float, n: int) -> float:
    """Expected number of blow-ups containing a fixed edge at full scale:
    60/eps^2 * ln n (equals 2(t-1)/t^2 times the unscaled r, up to the
    ceiling in r)."""
    check_epsilon(epsilon)
    if n < 2:
        raise ValueError(f"need n >= 2, got n={n}")
    return (60.0 / epsilon**2) * math.log(n)


@dataclass(frozen=True)
class LabeledFamily:
    """Output of the labeling procedure.

    ``labels`` maps host edge rank -> blow-up index (or -1 when the edge is
    in no blow-up); ``appearance_counts`` is the per-edge multiplicity
    |{i : e in G_i}|; ``hat_ranks[i]`` lists the ranks labeled i.
    """

    host: Graph
    template: TreeTemplate
    epsilon: float
    seed: int
    scale: float
    r: int
    kappa_target: float
    blowups: tuple[BlowupGraph, ...]
    labels: np.ndarray
    appearance_counts: np.ndarray
    hat_ranks: tuple[np.ndarray, ...]

    @property
    def labeled_count(self) -> int:
        return int((self.labels >= 0).sum())

    @property
    def unlabeled_count(self) -> int:
        return self.host.num_edges - self.labeled_count

    def hat_edges(self, i: int) -> np.ndarray:
        """Edges of hat graph i as an (k, 2) host-coordinate array."""
        return self.host.edge_array[self.hat_ranks[i]]


def build_labeled_family(
    g: Graph,
    template: TreeTemplate,
    epsilon: float,
    seed: int,
    r_override: int | None = None,
    scale: float = 1.0,
    layouts=None,
) -> LabeledFamily:
    """Draw r random layouts, build their blow-ups, and label every covered
    host edge with a uniform choice among the blow-ups containing it.

    Layout i is drawn by Fisher-Yates shuffle from stream (seed, "layout", i)
    and labels come from one variate per edge of stream (seed, "label"), so
    the result is independent of evaluation order.  ``layouts`` overrides
    the random layouts with explicit permutations (deterministic tests).
    """
    if g.n % template.t != 0:
        raise DivisibilityError(f"t={template.t} does not divide n={g.n}")
    if layouts is not None:
        perms = [np.asarray(sig) for sig in layouts]
        r = len(perms)
    else:
        if r_override is not None:
            if r_override < 0:
                raise ValueError(f"r_override must be non-negative, got {r_override}")
            r = r_override
        else:
            r = r_value(epsilon, template.t, g.n, scale)
        perms = None

    m = g.num_edges
    counts = np.zeros(m, dtype=np.int32)
    blowups = []
    memberships = []
    for i in range(r):
        sigma = perms[i] if perms is not None else rng.stream(seed, "layout", i).permutation(g.n)
        layout = build_layout(g.n, template.t, sigma)
        blow = build_blowup(g, layout, template, prime=False)
        blowups.append(blow)
        memberships.append(blow.kept_ranks)
        counts[blow.kept_ranks] += 1

    # per-edge membership lists in ascending blow-up index (CSR layout)
    indptr = np.zeros(m + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    data = np.zeros(indptr[-1], dtype=np.int32)
    cursor = np.zeros(m, dtype=np.int64)
    for i, ranks in enumerate(memberships):
        slots = indptr[ranks] + cursor[ranks]
        data[slots] = i
        cursor[ranks] += 1

    labels = np.full(m, -1, dtype=np.int32)
    if m and r:
        u = rng.stream(seed, "label").random(m)
        covered = np.flatnonzero(counts > 0)
        pick = np.minimum((u[covered] * counts[covered]).astype(np.int64), counts[covered] - 1)
        labels[covered] = data[indptr[covered] + pick]

    hat_ranks = tuple(np.flatnonzero(labels == i) for i in range(r))
    labels.flags.writeable = False
    counts.flags.writeable = False
    return LabeledFamily(
        host=g,
        template=template,
        epsilon=epsilon,
        seed=seed,
        scale=scale,
        r=r,
        kappa_target=kappa_value(epsilon, g.n) if g.n >= 2 else 0.0,
        blowups=tuple(blowups),
        labels=labels,
        appearance_counts=counts,
        hat_ranks=hat_ranks,
    )


@dataclass(frozen=True)
class KappaSummary:
    """Concentration summary for the per-edge blow-up multiplicities."""

    r: int
    kappa: float
    band: tuple[float, float]
    num_edges: int
    min_count: int
    max_count: int
    mean_count: float
    outside_band: int
    outside_fraction: float
    expected_mean: float  # r * q, the exact binomial mean at this r
    histogram: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "kappa": self.kappa,
            "band": list(self.band),
            "num_edges": self.num_edges,
            "min_count": self.min_count,
            "max_count": self.max_count,
            "mean_count": self.mean_count,
            "outside_band": self.outside_band,
            "outside_fraction": self.outside_fraction,
            "expected_mean": self.expected_mean,
            "histogram": list(self.histogram),
        }


def kappa_report(family: LabeledFamily, epsilon: float) -> KappaSummary:
    """Min/max/mean per-edge multiplicity and the fraction of edges outside
    the (1 +- eps) * kappa band.

    The band is anchored at the full-scale kappa target, so it is only
    meaningful for families built at scale 1; the summary also carries the
    exact binomial mean r*q for scaled runs.
    """
    check_epsilon(epsilon)
    counts = family.appearance_counts
    kappa = family.kappa_target
    lo = (1.0 - epsilon) * kappa
    hi = (1.0 + epsilon) * kappa
    m = counts.size
    if m:
        outside = int(((counts < lo) | (counts > hi)).sum())
        c_min, c_max, c_mean = int(counts.min()), int(counts.max()), float(counts.mean())
        hist = tuple(int(x) for x in np.bincount(counts))
    else:
        outside, c_min, c_max, c_mean, hist = 0, 0, 0, 0.0, ()
    q = crossing_probability(family.template.t, family.host.n) if family.template.t >= 2 else Fraction(0)
    return KappaSummary(
        r=family.r,
        kappa=kappa,
        band=(lo, hi),
        num_edges=m,
        min_count=c_min,
        max_count=c_max,
        mean_count=c_mean,
        outside_band=outside,
        outside_fraction=outside / m if m else 0.0,
        expected_mean=float(family.r * q),
        histogram=hist,
    )
