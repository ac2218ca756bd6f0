import numpy as np
import pytest
from helpers import random_tree

from treepack import (
    DivisibilityError,
    Graph,
    TreeTemplate,
    build_labeled_family,
    crossing_probability,
    generate_gnp,
    kappa_report,
    kappa_value,
    r_value,
)


class TestRValue:
    def test_reference_value(self):
        assert r_value(0.5, 2, 100, 1.0) == 2211

    def test_near_one_epsilon(self):
        assert r_value(0.99, 2, 3, 1.0) == 135

    def test_scale(self):
        assert r_value(0.5, 2, 100, 0.001) == 3  # ceil(2.21...)

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            r_value(1.0, 2, 100)
        with pytest.raises(ValueError):
            r_value(0.5, 1, 100)
        with pytest.raises(ValueError):
            r_value(0.5, 2, 100, 0.0)

    @pytest.mark.parametrize("t,n,eps", [(2, 100, 0.5), (3, 99, 0.3), (5, 1000, 0.7)])
    def test_kappa_consistency(self, t, n, eps):
        # kappa equals 2(t-1)/t^2 times the unscaled r, up to the ceiling in r
        factor = 2 * (t - 1) / t**2
        assert abs(kappa_value(eps, n) - factor * r_value(eps, t, n, 1.0)) <= factor


class TestBuildLabeledFamily:
    def test_single_identity_blowup_on_k4(self):
        fam = build_labeled_family(
            Graph.complete(4), TreeTemplate.path(2), 0.5, seed=0, layouts=[np.arange(4)]
        )
        assert fam.r == 1
        hat = {tuple(e) for e in fam.hat_edges(0).tolist()}
        assert hat == {(0, 2), (0, 3), (1, 2), (1, 3)}
        assert fam.unlabeled_count == 2  # (0,1) and (2,3) in no blow-up
        labels = dict(zip(map(tuple, fam.host.edge_array.tolist()), fam.labels.tolist()))
        assert labels[(0, 1)] == -1 and labels[(2, 3)] == -1

    def test_r_zero_degenerate(self):
        g = generate_gnp(12, 0.5, 1)
        fam = build_labeled_family(g, TreeTemplate.path(2), 0.5, seed=0, r_override=0)
        assert fam.r == 0
        assert fam.labeled_count == 0
        assert (fam.appearance_counts == 0).all()

    def test_divisibility(self):
        with pytest.raises(DivisibilityError):
            build_labeled_family(Graph.complete(5), TreeTemplate.path(2), 0.5, seed=0)

    def test_deterministic(self):
        g = generate_gnp(30, 0.5, 9)
        tree = TreeTemplate.path(3)
        a = build_labeled_family(g, tree, 0.5, seed=77, r_override=12)
        b = build_labeled_family(g, tree, 0.5, seed=77, r_override=12)
        assert np.array_equal(a.labels, b.labels)
        assert np.array_equal(a.appearance_counts, b.appearance_counts)
        c = build_labeled_family(g, tree, 0.5, seed=78, r_override=12)
        assert not np.array_equal(a.labels, c.labels)

    @pytest.mark.parametrize("seed", range(8))
    def test_partition_invariants(self, seed):
        rng = np.random.default_rng(seed)
        t = int(rng.integers(2, 5))
        n = t * int(rng.integers(2, 10))
        g = generate_gnp(n, 0.7, seed + 20)
        tree = random_tree(t, seed)
        fam = build_labeled_family(g, tree, 0.4, seed=seed, r_override=int(rng.integers(1, 9)))
        seen = set()
        for i in range(fam.r):
            ranks = set(fam.hat_ranks[i].tolist())
            # hat graphs are edge-disjoint and contained in their blow-up
            assert not (seen & ranks)
            seen |= ranks
            assert ranks <= set(fam.blowups[i].kept_ranks.tolist())
            assert (fam.labels[fam.hat_ranks[i]] == i).all()
        labeled = set(np.flatnonzero(fam.labels >= 0).tolist())
        assert seen == labeled
        # an edge is unlabeled exactly when it appears in no blow-up
        assert set(np.flatnonzero(fam.appearance_counts == 0).tolist()) == (
            set(range(g.num_edges)) - labeled
        )
        assert sum(len(fam.hat_ranks[i]) for i in range(fam.r)) == fam.labeled_count

    def test_prefix_stability_in_r(self):
        """Per-index layout streams make a larger family extend a smaller
        one, so labeled edges never decrease with r."""
        g = generate_gnp(40, 0.5, 3)
        tree = TreeTemplate.path(2)
        small = build_labeled_family(g, tree, 0.5, seed=5, r_override=4)
        large = build_labeled_family(g, tree, 0.5, seed=5, r_override=9)
        for i in range(small.r):
            assert np.array_equal(small.blowups[i].kept_ranks, large.blowups[i].kept_ranks)
        assert small.labeled_count <= large.labeled_count

    def test_mean_multiplicity_matches_binomial(self):
        g = generate_gnp(200, 0.5, 42)
        fam = build_labeled_family(g, TreeTemplate.path(2), 0.5, seed=42, r_override=200)
        rq = 200 * float(crossing_probability(2, 200))
        mean = fam.appearance_counts.mean()
        assert abs(mean - rq) <= 0.05 * rq


class TestKappaReport:
    def test_r_zero(self):
        g = generate_gnp(12, 0.5, 1)
        fam = build_labeled_family(g, TreeTemplate.path(2), 0.5, seed=0, r_override=0)
        summary = kappa_report(fam, 0.5)
        assert summary.min_count == summary.max_count == 0
        assert summary.mean_count == 0.0

    def test_r_one_counts_binary(self):
        g = generate_gnp(12, 0.9, 1)
        fam = build_labeled_family(g, TreeTemplate.path(2), 0.5, seed=0, r_override=1)
        summary = kappa_report(fam, 0.5)
        assert summary.min_count in (0, 1) and summary.max_count in (0, 1)
        assert set(np.unique(fam.appearance_counts)) <= {0, 1}

    def test_full_scale_run_stays_in_band(self):
        g = generate_gnp(100, 0.5, 42)
        fam = build_labeled_family(g, TreeTemplate.path(2), 0.5, seed=42)  # r = 2211
        summary = kappa_report(fam, 0.5)
        assert summary.r == 2211
        assert summary.outside_band == 0
        assert summary.outside_fraction == 0.0

    def test_histogram_sums_to_edges(self):
        g = generate_gnp(60, 0.5, 8)
        fam = build_labeled_family(g, TreeTemplate.path(3), 0.5, seed=8, r_override=20)
        summary = kappa_report(fam, 0.5)
        assert sum(summary.histogram) == g.num_edges
        assert summary.expected_mean == pytest.approx(20 * float(crossing_probability(3, 60)))
