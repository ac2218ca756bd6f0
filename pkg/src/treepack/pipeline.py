"""The three packing pipelines plus feasibility checking and coverage
accounting.

* ``pack_pseudo``: label a family of random blow-ups, pack every super-edge
  of every hat graph with edge-disjoint perfect matchings, and zip the j-th
  matchings of each super-edge into full tree factors.
* ``pack_random``: identical flow, but reports the random-pair matching
  target instead of the regular-pair one.
* ``pack_bootstrap``: split the vertex set into tau equal parts, pack the
  complete quotient graph on tau part-vertices with tree factors, then pack
  every part pair used by an outer factor with perfect matchings and
  combine them into full factors.  Losses are accounted exactly in three
  buckets: edges inside a part, edges between pairs no outer factor uses,
  and edges of used pairs missed by the matchings.

Asymptotic side conditions ("A >> B") have no finite-n truth value; the
feasibility checker reports each ratio A/B against a configurable slack
and never hard-fails a run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DivisibilityError, VerificationError
from .graphs import Graph, check_epsilon
from .labeling import (
    KappaSummary,
    LabeledFamily,
    build_labeled_family,
    kappa_report,
    kappa_value,
)
from .matching import MatchingFamily, fk_pseudo_target, fk_random_delta, pack_matchings
from .rng import derive_seed
from .trees import TFactor, TreeTemplate, _assemble_copies, assemble_factor, verify_tfactor


# -- feasibility -----------------------------------------------------------------


@dataclass(frozen=True)
class ConditionCheck:
    lhs: float
    rhs: float
    ratio: float
    passed: bool

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "ratio": self.ratio, "passed": self.passed}


@dataclass(frozen=True)
class FeasibilityReport:
    """Ratios of the five asymptotic side conditions at finite (n, p, eps).

    pseudo_coverage:     eps^6 n p^4 vs ln^3 n   (regular-graph pipeline)
    random_coverage:     eps^4 n p   vs ln^2 n   (random-graph pipeline)
    gnp_regularity:      eps^2 n p^2 vs ln n     (G(n,p) is regular at all)
    blowup_regularity:   eps^2 n p^4 vs ln n     (random layouts stay regular)
    sparsified_codegree: eps^6 n p^2 vs ln^3 n   (co-degrees survive labeling)
    """

    slack: float
    conditions: dict[str, ConditionCheck]

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.conditions.values())

    def to_dict(self) -> dict:
        return {
            "slack": self.slack,
            "all_pass": self.all_pass,
            "conditions": {k: v.to_dict() for k, v in self.conditions.items()},
        }


def check_feasibility(n: int, p: float, epsilon: float, slack: float = 1.0) -> FeasibilityReport:
    """Evaluate every side condition as lhs/rhs >= slack (warnings only)."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    check_epsilon(epsilon)
    if slack <= 0:
        raise ValueError(f"slack must be positive, got {slack}")
    ln = math.log(n)
    table = {
        "pseudo_coverage": (epsilon**6 * n * p**4, ln**3),
        "random_coverage": (epsilon**4 * n * p, ln**2),
        "gnp_regularity": (epsilon**2 * n * p**2, ln),
        "blowup_regularity": (epsilon**2 * n * p**4, ln),
        "sparsified_codegree": (epsilon**6 * n * p**2, ln**3),
    }
    conditions = {}
    for name, (lhs, rhs) in table.items():
        ratio = lhs / rhs
        conditions[name] = ConditionCheck(lhs=lhs, rhs=rhs, ratio=ratio, passed=ratio >= slack)
    return FeasibilityReport(slack=slack, conditions=conditions)


# -- packing results ----------------------------------------------------------------


@dataclass(frozen=True)
class SuperEdgeStats:
    pair: tuple[int, int]
    edges: int
    matchings: int

    def to_dict(self) -> dict:
        return {"pair": list(self.pair), "edges": self.edges, "matchings": self.matchings}


@dataclass(frozen=True)
class PerBlowupStats:
    index: int
    super_edges: tuple[SuperEdgeStats, ...]
    factors: int

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "super_edges": [s.to_dict() for s in self.super_edges],
            "factors": self.factors,
        }


@dataclass(frozen=True)
class LossBreakdown:
    """Exact edge accounting for the bootstrap pipeline:
    covered + within_part + uncovered_pair + matching_shortfall = total."""

    covered: int
    within_part: int
    uncovered_pair: int
    matching_shortfall: int
    total: int

    def to_dict(self) -> dict:
        return {
            "covered": self.covered,
            "within_part": self.within_part,
            "uncovered_pair": self.uncovered_pair,
            "matching_shortfall": self.matching_shortfall,
            "total": self.total,
        }


@dataclass(frozen=True)
class PackingResult:
    """Edge-disjoint tree factors plus the audit trail that produced them."""

    mode: str
    template: TreeTemplate
    factors: tuple[TFactor, ...]
    covered_edges: int
    total_edges: int
    coverage: Fraction
    per_blowup: tuple[PerBlowupStats, ...]
    kappa: KappaSummary | None
    target: dict
    loss_breakdown: LossBreakdown | None = None
    diagnostics: tuple[str, ...] = ()

    @property
    def factors_count(self) -> int:
        return len(self.factors)


def coverage_of(result: PackingResult, g: Graph) -> Fraction:
    """Exact covered/total after re-verifying every factor against g.

    Raises VerificationError on the first invalid factor or on any host
    edge claimed by two factors.
    """
    covered: set[tuple[int, int]] = set()
    expected = 0
    for fi, factor in enumerate(result.factors):
        verdict = verify_tfactor(g, result.template, factor)
        if not verdict:
            raise VerificationError(f"factor {fi} invalid: {verdict.message}")
        edges = factor.edge_set()
        expected += len(edges)
        covered |= edges
    if len(covered) != expected:
        raise VerificationError("factors share a host edge")
    if g.num_edges == 0:
        return Fraction(0)
    return Fraction(len(covered), g.num_edges)


# -- labeled-family pipelines (regular and random hosts) -----------------------------


def _edge_density(g: Graph) -> float:
    pairs = g.n * (g.n - 1) // 2
    return g.num_edges / pairs if pairs else 0.0


def _pack_blowup(
    fam: LabeledFamily, index: int, seed: int
) -> tuple[list[TFactor], PerBlowupStats]:
    """Pack every super-edge of hat graph ``index`` and zip matchings into
    factors (the j-th matching of each super-edge family forms factor j)."""
    blow = fam.blowups[index]
    layout = blow.layout
    template = fam.template
    nu = layout.nu
    hat = fam.hat_ranks[index]
    host_edges = fam.host.edge_array

    families: list[list[tuple[tuple[int, int], ...]]] = []
    stats = []
    for k, (a, b) in enumerate(template.edges):
        in_pair = np.isin(hat, blow.pair_ranks[(a, b)], assume_unique=True)
        ranks = hat[in_pair]
        edges = host_edges[ranks]
        u_in_a = layout.part_of[edges[:, 0]] == a
        rows = np.where(u_in_a, layout.local_index[edges[:, 0]], layout.local_index[edges[:, 1]])
        cols = np.where(u_in_a, layout.local_index[edges[:, 1]], layout.local_index[edges[:, 0]])
        pair_graph = Graph(
            2 * nu, np.column_stack([rows, cols + nu]).astype(np.int32)
        )
        family = pack_matchings(pair_graph, derive_seed(seed, "pack", index, k))
        part_a = layout.parts[a]
        part_b = layout.parts[b]
        host_matchings = [
            tuple((int(part_a[x]), int(part_b[y - nu])) for x, y in matching)
            for matching in family.matchings
        ]
        families.append(host_matchings)
        stats.append(SuperEdgeStats(pair=(a, b), edges=int(ranks.size), matchings=family.s))

    s_min = min((len(f) for f in families), default=0)
    factors = [
        assemble_factor(layout, template, [families[k][j] for k in range(len(families))])
        for j in range(s_min)
    ]
    return factors, PerBlowupStats(index=index, super_edges=tuple(stats), factors=s_min)


def _pack_labeled(
    g: Graph,
    template: TreeTemplate,
    epsilon: float,
    seed: int,
    scale: float,
    r_override: int | None,
    layouts,
    mode: str,
) -> PackingResult:
    if template.t < 2:
        raise ValueError("packing needs a template with at least one edge (t >= 2)")
    fam = build_labeled_family(
        g, template, epsilon, derive_seed(seed, "labeling"), r_override=r_override,
        scale=scale, layouts=layouts,
    )
    factors: list[TFactor] = []
    per_blowup = []
    for i in range(fam.r):
        blown, stats = _pack_blowup(fam, i, seed)
        factors.extend(blown)
        per_blowup.append(stats)

    n, t = g.n, template.t
    covered = len(factors) * (n - n // t)
    total = g.num_edges
    coverage = Fraction(covered, total) if total else Fraction(0)

    nu = n // t
    kappa = fam.kappa_target
    density = _edge_density(g)
    if mode == "pseudo":
        eta = 7.0 * epsilon
        d_hat = density / kappa if kappa else 0.0
        target_value = fk_pseudo_target(eta, d_hat, nu) if nu else 0
        target = {
            "kind": "pseudo",
            "value": max(0, target_value),
            "raw_value": target_value,
            "eta": eta,
            "pair_density": d_hat,
            "kappa": kappa,
            "vacuous": target_value <= 0,
        }
    else:
        q_hat = density / ((1.0 + epsilon) * kappa) if kappa else 0.0
        if nu >= 2 and q_hat > 0:
            delta = fk_random_delta(nu, q_hat)
            target_value = math.floor((1.0 - delta.value) * q_hat * nu)
            target = {
                "kind": "random",
                "value": max(0, target_value),
                "raw_value": target_value,
                "delta": delta.value,
                "pair_density": q_hat,
                "kappa": kappa,
                "vacuous": delta.vacuous,
            }
        else:
            target = {
                "kind": "random",
                "value": 0,
                "raw_value": 0,
                "delta": None,
                "pair_density": q_hat,
                "kappa": kappa,
                "vacuous": True,
            }

    return PackingResult(
        mode=mode,
        template=template,
        factors=tuple(factors),
        covered_edges=covered,
        total_edges=total,
        coverage=coverage,
        per_blowup=tuple(per_blowup),
        kappa=kappa_report(fam, epsilon),
        target=target,
    )


def pack_pseudo(
    g: Graph,
    template: TreeTemplate,
    epsilon: float,
    seed: int,
    scale: float = 1.0,
    r_override: int | None = None,
    layouts=None,
) -> PackingResult:
    """Pack a (pseudo-)regular host graph with edge-disjoint tree factors
    via the labeled blow-up family."""
    check_epsilon(epsilon)
    return _pack_labeled(g, template, epsilon, seed, scale, r_override, layouts, "pseudo")


def pack_random(
    g: Graph,
    template: TreeTemplate,
    epsilon: float,
    seed: int,
    scale: float = 1.0,
    r_override: int | None = None,
    layouts=None,
) -> PackingResult:
    """Same flow as pack_pseudo; reports the random-pair matching target
    (1 - delta) * q * nu at the sparsified density q = p / ((1+eps) kappa)."""
    check_epsilon(epsilon)
    return _pack_labeled(g, template, epsilon, seed, scale, r_override, layouts, "random")


# -- bootstrap pipeline ----------------------------------------------------------------


@dataclass(frozen=True)
class BootstrapPlan:
    """Parameters of the quotient construction.

    ``tau`` parts of size ``ell`` = n/tau; the outer template packing runs
    on the complete graph over the tau parts at p = 1 with its own epsilon
    and scale knobs (theory-sized r leaves tiny quotients empty, so desk
    runs override r).  ``c_advisory``, ``tau0``, ``tau1`` are the theory's
    suggested constants, reported but never enforced.
    """

    tau: int
    ell: int
    outer_epsilon: float
    outer_scale: float = 1.0
    outer_r_override: int | None = None
    c_advisory: float = 0.0
    tau0: int | None = None
    tau1: int | None = None
    kplan: PackingResult | None = field(default=None, compare=False)


def smallest_feasible_tau(epsilon: float, slack: float = 1.0, limit: int = 10**15) -> int | None:
    """Smallest tau with eps^18 * tau >= slack * ln(tau)^3, i.e. the size at
    which the regular pipeline's side condition holds for a complete
    quotient certified at eps^3.  None if past ``limit`` (interpretation
    depends on slack; reported as advisory only)."""
    check_epsilon(epsilon)
    c = epsilon**18

    def ok(tau: int) -> bool:
        return c * tau >= slack * math.log(tau) ** 3

    lo, hi = 2, 2
    while not ok(hi):
        hi *= 2
        if hi > limit:
            return None
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def make_bootstrap_plan(
    n: int,
    template: TreeTemplate,
    tau: int,
    epsilon: float,
    outer_r_override: int | None = None,
    outer_scale: float = 1.0,
    outer_epsilon: float | None = None,
    slack: float = 1.0,
) -> BootstrapPlan:
    """Validate divisibility and fill in the advisory constants.

    The default outer epsilon is max(eps^3, 1/tau): the complete quotient
    graph is (delta, 1)-regular exactly for delta >= 1/tau, and the theory
    asks for eps^3 once tau is large enough.
    """
    check_epsilon(epsilon)
    t = template.t
    if tau % t != 0:
        raise DivisibilityError(f"t={t} does not divide tau={tau}")
    if n % tau != 0:
        raise DivisibilityError(f"tau={tau} does not divide n={n}")
    if outer_epsilon is None:
        outer_epsilon = max(epsilon**3, 1.0 / tau)
        outer_epsilon = min(outer_epsilon, 0.999999)
    tau1 = smallest_feasible_tau(epsilon, slack)
    tau0 = max(tau1, math.ceil(epsilon**-3)) if tau1 is not None else None
    return BootstrapPlan(
        tau=tau,
        ell=n // tau,
        outer_epsilon=outer_epsilon,
        outer_scale=outer_scale,
        outer_r_override=outer_r_override,
        c_advisory=tau * epsilon**-2,
        tau0=tau0,
        tau1=tau1,
    )


def _empty_bootstrap_result(
    g: Graph, template: TreeTemplate, outer: PackingResult, within: int, diagnostics: tuple
) -> PackingResult:
    total = g.num_edges
    loss = LossBreakdown(
        covered=0,
        within_part=within,
        uncovered_pair=total - within,
        matching_shortfall=0,
        total=total,
    )
    return PackingResult(
        mode="bootstrap",
        template=template,
        factors=(),
        covered_edges=0,
        total_edges=total,
        coverage=Fraction(0),
        per_blowup=(),
        kappa=outer.kappa,
        target={"kind": "bootstrap", "outer_coverage": str(outer.coverage)},
        loss_breakdown=loss,
        diagnostics=diagnostics,
    )


def pack_bootstrap(
    g: Graph,
    template: TreeTemplate,
    plan: BootstrapPlan,
    epsilon: float,
    seed: int,
) -> PackingResult:
    """Pack via the quotient construction described in the module docstring.

    Splits {0..n-1} into tau parts in index order (part i holds vertices
    i*ell .. (i+1)*ell - 1).  Factors inherit edge-disjointness from the
    outer factors being edge-disjoint on the quotient and the matchings
    being edge-disjoint within each part pair.
    """
    check_epsilon(epsilon)
    tau, ell = plan.tau, plan.ell
    t = template.t
    if tau % t != 0:
        raise DivisibilityError(f"t={t} does not divide tau={tau}")
    if g.n != tau * ell:
        raise DivisibilityError(f"plan tau*ell={tau * ell} does not match n={g.n}")

    edges = g.edge_array
    part_of = (edges // ell).astype(np.int64)
    lo = np.minimum(part_of[:, 0], part_of[:, 1])
    hi = np.maximum(part_of[:, 0], part_of[:, 1])
    within_count = int((lo == hi).sum())
    pair_key = lo * tau + hi

    outer = plan.kplan
    if outer is None:
        outer = pack_pseudo(
            Graph.complete(tau),
            template,
            plan.outer_epsilon,
            derive_seed(seed, "outer"),
            scale=plan.outer_scale,
            r_override=plan.outer_r_override,
        )
    if not outer.factors:
        return _empty_bootstrap_result(
            g,
            template,
            outer,
            within_count,
            ("outer packing of the complete quotient graph produced no factors; "
             "raise outer_scale or set outer_r_override",),
        )

    # pack every part pair used by some outer factor (each pair is used by
    # at most one outer factor since outer factors are edge-disjoint)
    used_pairs: list[tuple[int, int]] = []
    for factor in outer.factors:
        for _, copy_edges in factor.copies:
            for a, b in copy_edges:
                used_pairs.append((a, b) if a < b else (b, a))
    pair_families: dict[tuple[int, int], list[tuple[tuple[int, int], ...]]] = {}
    pair_edge_count: dict[tuple[int, int], int] = {}
    for pp, qq in used_pairs:
        ranks = np.flatnonzero(pair_key == pp * tau + qq)
        pair_edge_count[(pp, qq)] = int(ranks.size)
        sub = edges[ranks]
        rows = np.where(sub[:, 0] // ell == pp, sub[:, 0], sub[:, 1]) - pp * ell
        cols = np.where(sub[:, 0] // ell == pp, sub[:, 1], sub[:, 0]) - qq * ell
        pair_graph = Graph(2 * ell, np.column_stack([rows, cols + ell]).astype(np.int32))
        family = pack_matchings(pair_graph, derive_seed(seed, "pair", pp, qq))
        host = [
            tuple((int(x + pp * ell), int(y - ell + qq * ell)) for x, y in matching)
            for matching in family.matchings
        ]
        pair_families[(pp, qq)] = host

    factors: list[TFactor] = []
    per_outer = []
    for fi, factor in enumerate(outer.factors):
        f_pairs = []
        for _, copy_edges in factor.copies:
            for a, b in copy_edges:
                f_pairs.append((a, b) if a < b else (b, a))
        s_f = min(len(pair_families[pq]) for pq in f_pairs)
        for j in range(s_f):
            copies = []
            for copy_verts, copy_edges in factor.copies:
                part_vertices = [
                    list(range(pv * ell, (pv + 1) * ell)) for pv in copy_verts
                ]
                matchings = []
                for a, b in copy_edges:
                    key = (a, b) if a < b else (b, a)
                    matchings.append(pair_families[key][j])
                copies.extend(_assemble_copies(part_vertices, template, matchings))
            factors.append(TFactor(tuple(copies)))
        per_outer.append(
            PerBlowupStats(
                index=fi,
                super_edges=tuple(
                    SuperEdgeStats(
                        pair=pq,
                        edges=pair_edge_count[pq],
                        matchings=len(pair_families[pq]),
                    )
                    for pq in sorted(set(f_pairs))
                ),
                factors=s_f,
            )
        )

    n = g.n
    covered = len(factors) * (n - n // t)
    total = g.num_edges
    used_keys = np.array(sorted({pp * tau + qq for pp, qq in used_pairs}), dtype=np.int64)
    cross = lo != hi
    uncovered_pair = int((cross & ~np.isin(pair_key, used_keys)).sum())
    shortfall = total - within_count - uncovered_pair - covered
    loss = LossBreakdown(
        covered=covered,
        within_part=within_count,
        uncovered_pair=uncovered_pair,
        matching_shortfall=shortfall,
        total=total,
    )
    return PackingResult(
        mode="bootstrap",
        template=template,
        factors=tuple(factors),
        covered_edges=covered,
        total_edges=total,
        coverage=Fraction(covered, total) if total else Fraction(0),
        per_blowup=tuple(per_outer),
        kappa=outer.kappa,
        target={
            "kind": "bootstrap",
            "outer_coverage": str(outer.coverage),
            "outer_factors": outer.factors_count,
            "tau": tau,
            "ell": ell,
            "c_advisory": plan.c_advisory,
            "tau0": plan.tau0,
            "tau1": plan.tau1,
        },
        loss_breakdown=loss,
    )
