from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from helpers import random_tree

from treepack import (
    DivisibilityError,
    Graph,
    TreeTemplate,
    build_blowup,
    build_layout,
    certify_blowup,
    crossing_probability,
    generate_gnp,
)


class TestBuildLayout:
    def test_identity(self):
        layout = build_layout(4, 2, np.arange(4))
        assert layout.part_set(0) == {0, 1} and layout.part_set(1) == {2, 3}

    def test_reversed(self):
        layout = build_layout(4, 2, [3, 2, 1, 0])
        assert layout.part_set(0) == {2, 3} and layout.part_set(1) == {0, 1}

    def test_three_parts(self):
        layout = build_layout(6, 3, np.arange(6))
        assert [layout.part_set(i) for i in range(3)] == [{0, 1}, {2, 3}, {4, 5}]

    def test_parts_partition(self):
        layout = build_layout(24, 4, np.random.default_rng(0).permutation(24))
        union = set()
        for i in range(4):
            part = layout.part_set(i)
            assert len(part) == 6
            assert not (union & part)
            union |= part
        assert union == set(range(24))
        for v in range(24):
            assert v in layout.part_set(int(layout.part_of[v]))

    def test_divisibility_error(self):
        with pytest.raises(DivisibilityError):
            build_layout(5, 2, np.arange(5))

    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            build_layout(4, 2, [0, 0, 1, 2])


class TestBuildBlowup:
    def test_single_edge_template_on_k4(self):
        blow = build_blowup(Graph.complete(4), build_layout(4, 2, np.arange(4)), TreeTemplate.path(2))
        kept = {tuple(e) for e in blow.kept_edges().tolist()}
        assert kept == {(0, 2), (0, 3), (1, 2), (1, 3)}

    def test_path_template_on_k6(self):
        layout = build_layout(6, 3, np.arange(6))
        blow = build_blowup(Graph.complete(6), layout, TreeTemplate.path(3))
        kept = {tuple(e) for e in blow.kept_edges().tolist()}
        # parts {0,1},{2,3},{4,5}; super-edges (0,1) and (1,2): 8 edges kept
        assert len(kept) == 8
        assert kept == {
            (0, 2), (0, 3), (1, 2), (1, 3),
            (2, 4), (2, 5), (3, 4), (3, 5),
        }

    def test_prime_keeps_all_cross(self):
        layout = build_layout(6, 3, np.arange(6))
        blow = build_blowup(Graph.complete(6), layout, TreeTemplate.path(3), prime=True)
        assert blow.num_kept == 12  # all cross-part pairs, within-part dropped

    @pytest.mark.parametrize("seed", range(8))
    def test_invariants(self, seed):
        rng = np.random.default_rng(seed)
        t = int(rng.integers(2, 5))
        n = t * int(rng.integers(2, 8))
        g = generate_gnp(n, 0.6, seed)
        tree = random_tree(t, seed)
        layout = build_layout(n, t, rng.permutation(n))
        plain = build_blowup(g, layout, tree, prime=False)
        prime = build_blowup(g, layout, tree, prime=True)
        host = {tuple(e) for e in g.edge_array.tolist()}
        kept = {tuple(e) for e in plain.kept_edges().tolist()}
        kept_prime = {tuple(e) for e in prime.kept_edges().tolist()}
        assert kept <= kept_prime <= host
        for u, v in kept_prime:
            assert layout.part_of[u] != layout.part_of[v]
        super_pairs = {tuple(sorted(e)) for e in tree.edges}
        for u, v in kept:
            pair = tuple(sorted((int(layout.part_of[u]), int(layout.part_of[v]))))
            assert pair in super_pairs


class TestCertifyBlowup:
    def test_complete_pair_certifies(self):
        blow = build_blowup(Graph.complete(6), build_layout(6, 2, np.arange(6)), TreeTemplate.path(2))
        (report,) = certify_blowup(blow, epsilon=0.5, p=1.0)
        # complete pair: cross degrees nu, co-degrees nu
        assert report.ok and report.min_cross_degree == 3 and report.max_within_codegree == 3

    def test_isolated_vertex_fails(self):
        g = Graph(4, [(0, 2), (0, 3), (1, 2)])
        blow = build_blowup(g, build_layout(4, 2, np.arange(4)), TreeTemplate.path(2))
        g2 = Graph(4, [(0, 2), (0, 3)])  # vertex 1 isolated
        blow2 = build_blowup(g2, build_layout(4, 2, np.arange(4)), TreeTemplate.path(2))
        (rep,) = certify_blowup(blow2, epsilon=0.9, p=0.5)
        assert not rep.ok and rep.min_cross_degree == 0
        assert rep.worst_degree_vertex == 1
        (rep_ok,) = certify_blowup(blow, epsilon=0.9, p=1.0)
        assert rep_ok.ok

    def test_prime_agrees_on_super_edges(self):
        g = generate_gnp(60, 0.5, 3)
        layout = build_layout(60, 3, np.random.default_rng(1).permutation(60))
        tree = TreeTemplate.path(3)
        plain = certify_blowup(build_blowup(g, layout, tree, prime=False), 0.4, 0.5)
        prime = certify_blowup(build_blowup(g, layout, tree, prime=True), 0.4, 0.5)
        assert [r.to_dict() for r in plain] == [r.to_dict() for r in prime]

    def test_strict_checks_all_pairs(self):
        g = generate_gnp(30, 0.8, 5)
        layout = build_layout(30, 3, np.arange(30))
        tree = TreeTemplate.path(3)
        reports = certify_blowup(build_blowup(g, layout, tree, prime=True), 0.5, 0.8, strict=True)
        assert [r.pair for r in reports] == [(0, 1), (0, 2), (1, 2)]

    def test_matches_brute_force(self):
        g = generate_gnp(24, 0.7, 9)
        layout = build_layout(24, 2, np.random.default_rng(4).permutation(24))
        blow = build_blowup(g, layout, TreeTemplate.path(2))
        (rep,) = certify_blowup(blow, 0.5, 0.7)
        part_a, part_b = layout.part_set(0), layout.part_set(1)
        kept = {tuple(e) for e in blow.kept_edges().tolist()}

        def cross_deg(v, target):
            return sum(1 for w in target if tuple(sorted((v, w))) in kept)

        brute_min = min(
            min(cross_deg(v, part_b) for v in part_a),
            min(cross_deg(w, part_a) for w in part_b),
        )
        brute_cd = 0
        for side, other in ((part_a, part_b), (part_b, part_a)):
            for v in side:
                for w in side:
                    if v < w:
                        cd = sum(
                            1
                            for x in other
                            if tuple(sorted((v, x))) in kept and tuple(sorted((w, x))) in kept
                        )
                        brute_cd = max(brute_cd, cd)
        assert rep.min_cross_degree == brute_min
        assert rep.max_within_codegree == brute_cd


class TestCrossingProbability:
    def test_known_values(self):
        assert crossing_probability(2, 4) == Fraction(2, 3)
        assert crossing_probability(3, 6) == Fraction(8, 15)

    def test_divisibility_error(self):
        with pytest.raises(DivisibilityError):
            crossing_probability(3, 8)

    @pytest.mark.parametrize("t,n", [(2, 4), (2, 6), (3, 6), (4, 4)])
    def test_exhaustive_enumeration_small(self, t, n):
        """Counting layouts where edge (0, 1) crosses a super-edge over all
        n! permutations reproduces the closed form exactly."""
        tree = TreeTemplate.path(t)
        super_pairs = {e for e in tree.edges}
        nu = n // t
        hits = 0
        total = 0
        for sigma in permutations(range(n)):
            part_of = [0] * n
            for pos, v in enumerate(sigma):
                part_of[v] = pos // nu
            a, b = part_of[0], part_of[1]
            if a > b:
                a, b = b, a
            if (a, b) in super_pairs:
                hits += 1
            total += 1
        assert Fraction(hits, total) == crossing_probability(t, n)
