import itertools

import numpy as np
import pytest

from treepack import (
    Graph,
    fk_pseudo_target,
    fk_random_delta,
    generate_bipartite,
    generate_regular_bipartite,
    pack_matchings,
)
from treepack.kernels import available_backends, hopcroft_karp


def validate_family(pair: Graph, family) -> None:
    nu = family.nu
    pair_edges = {tuple(e) for e in pair.edge_array.tolist()}
    claimed = set()
    for matching in family.matchings:
        lefts = {a for a, _ in matching}
        rights = {b for _, b in matching}
        assert lefts == set(range(nu))
        assert rights == set(range(nu, 2 * nu))
        for edge in matching:
            assert edge in pair_edges
            assert edge not in claimed
            claimed.add(edge)
    assert claimed | set(family.residual) == pair_edges
    assert not (claimed & set(family.residual))


class TestPackMatchings:
    def test_complete_pair_decomposes_fully(self):
        pair = generate_bipartite(3, 1.0, 0)
        family = pack_matchings(pair, seed=1)
        assert family.s == 3 and family.residual == ()
        validate_family(pair, family)

    def test_six_cycle_two_matchings(self):
        # cycle a1-b1-a2-b2-a3-b3-a1 drawn bipartite
        pair = Graph(6, [(0, 3), (1, 3), (1, 4), (2, 4), (2, 5), (0, 5)])
        family = pack_matchings(pair, seed=0)
        assert family.s == 2 and family.residual == ()
        validate_family(pair, family)

    def test_three_edge_path(self):
        # a1-b1, b1-a2, a2-b2 with nu=2: unique perfect matching, then stop
        pair = Graph(4, [(0, 2), (1, 2), (1, 3)])
        family = pack_matchings(pair, seed=5)
        assert family.matchings == (((0, 2), (1, 3)),)
        assert family.residual == ((1, 2),)

    def test_exhaustive_path_oracle(self):
        # brute force confirms the unique perfect matching of the 3-edge path
        edges = [(0, 2), (1, 2), (1, 3)]
        perfect = []
        for subset in itertools.combinations(edges, 2):
            lefts = [e[0] for e in subset]
            rights = [e[1] for e in subset]
            if sorted(lefts) == [0, 1] and sorted(rights) == [2, 3]:
                perfect.append(set(subset))
        assert perfect == [{(0, 2), (1, 3)}]

    def test_empty_pair(self):
        pair = Graph(4, [])
        family = pack_matchings(pair, seed=0)
        assert family.s == 0 and family.residual == ()

    def test_rejects_odd_vertex_count(self):
        with pytest.raises(ValueError, match="even"):
            pack_matchings(Graph(3, [(0, 2)]), seed=0)

    def test_rejects_within_side_edge(self):
        with pytest.raises(ValueError, match="crossing"):
            pack_matchings(Graph(4, [(0, 1)]), seed=0)

    def test_deterministic(self):
        pair = generate_bipartite(20, 0.4, 3)
        a = pack_matchings(pair, seed=11)
        b = pack_matchings(pair, seed=11)
        assert a == b

    @pytest.mark.parametrize("nu", [1, 2, 5, 16, 33, 64])
    def test_complete_pairs_give_nu_matchings(self, nu):
        family = pack_matchings(generate_bipartite(nu, 1.0, 0), seed=nu)
        assert family.s == nu and family.residual == ()

    @pytest.mark.parametrize("nu,d", [(2, 1), (5, 3), (8, 8), (16, 5), (32, 17), (64, 9)])
    def test_regular_pairs_decompose_exactly(self, nu, d):
        pair = generate_regular_bipartite(nu, d, seed=nu + d)
        family = pack_matchings(pair, seed=d)
        assert family.s == d and family.residual == ()
        validate_family(pair, family)

    @pytest.mark.parametrize("seed", range(10))
    def test_random_pairs_invariants(self, seed):
        rng = np.random.default_rng(seed)
        nu = int(rng.integers(2, 24))
        pair = generate_bipartite(nu, float(rng.uniform(0.2, 0.9)), seed)
        family = pack_matchings(pair, seed=seed)
        validate_family(pair, family)

    @pytest.mark.parametrize("seed", range(6))
    def test_residual_has_no_perfect_matching(self, seed):
        """The stop rule is maximal: once extraction halts, what remains has
        no perfect matching (checked with a fresh matching run)."""
        rng = np.random.default_rng(seed + 100)
        nu = int(rng.integers(2, 20))
        pair = generate_bipartite(nu, float(rng.uniform(0.3, 0.8)), seed)
        family = pack_matchings(pair, seed=seed)
        if not family.residual:
            return
        residual = Graph(2 * nu, sorted(family.residual))
        again = pack_matchings(residual, seed=seed + 1)
        assert again.s == 0

    @pytest.mark.skipif(len(available_backends()) < 2, reason="extension not built")
    @pytest.mark.parametrize("seed", range(5))
    def test_backends_agree_end_to_end(self, seed, monkeypatch):
        rng = np.random.default_rng(seed)
        nu = int(rng.integers(2, 30))
        p = float(rng.uniform(0.2, 0.9))
        # craft one CSR instance and compare kernels directly
        mat = rng.random((nu, nu)) < p
        indptr = np.zeros(nu + 1, dtype=np.int64)
        idx = []
        for a in range(nu):
            row = np.flatnonzero(mat[a])
            indptr[a + 1] = indptr[a] + row.size
            idx.extend(row.tolist())
        indices = np.array(idx, dtype=np.int32)
        got_c = hopcroft_karp(nu, nu, indptr, indices, compiled=True)
        got_p = hopcroft_karp(nu, nu, indptr, indices, compiled=False)
        assert np.array_equal(got_c, got_p)


class TestTargets:
    def test_pseudo_target_values(self):
        assert fk_pseudo_target(0.001, 0.5, 1000) == 450
        assert fk_pseudo_target(0.729, 1.0, 10) == 1
        assert fk_pseudo_target(1e-6, 1.0, 100) == 99

    def test_pseudo_target_rejects(self):
        with pytest.raises(ValueError):
            fk_pseudo_target(0.0, 0.5, 10)
        with pytest.raises(ValueError):
            fk_pseudo_target(0.1, 0.5, 0)

    def test_random_delta_values(self):
        d = fk_random_delta(100, 0.5)
        assert d.value == pytest.approx(1.2139, abs=1e-4)
        assert d.vacuous
        d2 = fk_random_delta(10**6, 0.5)
        assert d2.value == pytest.approx(0.021026, abs=1e-5)
        assert not d2.vacuous

    def test_random_delta_boundary(self):
        import math

        # p chosen so 16 ln(nu) / (nu p) is exactly 1: the bound turns vacuous
        d = fk_random_delta(100, 16 * math.log(100) / 100)
        assert d.value == pytest.approx(1.0, abs=1e-12)
        assert d.vacuous

    def test_random_delta_monotone(self):
        assert fk_random_delta(100, 0.1).value > fk_random_delta(100, 0.9).value
        assert fk_random_delta(10**4, 0.5).value < fk_random_delta(100, 0.5).value
