import math

import numpy as np
import pytest

from conftest import random_directed_graph, random_symmetric_graph
from graphspace import (
    Graph,
    MatchConfig,
    brute_force_match,
    geodesic,
    graph_distance,
    match_faq,
    match_umeyama,
    pad_pair,
    permute,
)


class TestMatchConfig:
    def test_defaults(self):
        cfg = MatchConfig()
        assert cfg.solver == "faq" and cfg.padding == "two_way"
        assert cfg.max_iter == 100 and cfg.tol == 1e-8

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"lam": -0.1},
            {"padding": "both"},
            {"solver": "magic"},
            {"faq_init": "zeros"},
            {"max_iter": 0},
            {"tol": 0.0},
            {"restarts": -1},
        ],
    )
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            MatchConfig(**kwargs)


class TestUmeyama:
    def test_isomorphic_pairs_recovered(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            n = int(rng.integers(3, 10))
            g = random_symmetric_graph(n, rng)
            g2 = permute(g, rng.permutation(n))
            res = match_umeyama(
                g, g2, MatchConfig(solver="umeyama", padding="none", refinement=True)
            )
            assert res.objective == 0.0 and res.d_g == 0.0

    def test_self_match(self):
        rng = np.random.default_rng(1)
        g = random_symmetric_graph(6, rng)
        res = match_umeyama(g, g, MatchConfig(solver="umeyama", padding="none"))
        assert res.objective == 0.0

    def test_directed_rejected(self):
        rng = np.random.default_rng(2)
        g = random_directed_graph(4, rng)
        with pytest.raises(ValueError, match="faq"):
            match_umeyama(g, g, MatchConfig(solver="umeyama"))

    def test_never_beats_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            g1 = random_symmetric_graph(6, rng)
            g2 = random_symmetric_graph(6, rng)
            cfg = MatchConfig(solver="umeyama", padding="none", refinement=True)
            res = match_umeyama(g1, g2, cfg)
            oracle = brute_force_match(g1, g2)
            assert res.objective >= oracle.objective - 1e-9


class TestFaq:
    def test_heavy_tailed_planted_recovery(self):
        rng = np.random.default_rng(4)
        hits = 0
        for _ in range(30):
            n = int(rng.integers(5, 11))
            w = np.triu(rng.standard_t(1, size=(n, n)), 1)
            g = Graph(w + w.T)
            p = rng.permutation(n)
            res = match_faq(g, permute(g, p), MatchConfig())
            if np.array_equal(res.p.perm[:n], p):
                hits += 1
        assert hits >= 29

    def test_binomial_small_reaches_oracle(self):
        rng = np.random.default_rng(5)
        cfg = MatchConfig(padding="none", refinement=True, restarts=30)
        for _ in range(15):
            n = int(rng.integers(5, 9))
            upper = np.triu((rng.random((n, n)) < 0.5).astype(float), 1)
            g = Graph(upper + upper.T)
            g2 = permute(g, rng.permutation(n))
            g1p, g2p = pad_pair(g, g2, "two_way")
            res = match_faq(g1p, g2p, cfg)
            assert res.objective == 0.0

    def test_oracle_lower_bound_with_refinement(self):
        rng = np.random.default_rng(6)
        equal = 0
        for _ in range(30):
            n1, n2 = (int(v) for v in rng.integers(2, 5, size=2))
            g1 = random_symmetric_graph(n1, rng)
            g2 = random_symmetric_graph(n2, rng)
            p1, p2 = pad_pair(g1, g2, "two_way")
            cfg = MatchConfig(padding="none", refinement=True, restarts=5)
            res = match_faq(p1, p2, cfg)
            oracle = brute_force_match(p1, p2)
            gap = res.objective - oracle.objective
            assert gap >= -1e-9
            if gap <= 1e-9 * (1.0 + oracle.objective):
                equal += 1
        assert equal >= 27

    def test_lambda_positive_respects_oracle_bound(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            n = 4
            w1 = np.triu((rng.random((n, n)) < 0.6).astype(float), 1)
            w2 = np.triu((rng.random((n, n)) < 0.6).astype(float), 1)
            g1 = Graph(w1 + w1.T, node_attrs=rng.normal(size=(n, 2)))
            g2 = Graph(w2 + w2.T, node_attrs=rng.normal(size=(n, 2)))
            cfg = MatchConfig(lam=0.5, refinement=True, restarts=3)
            res = match_faq(g1, g2, cfg)
            p1, p2 = pad_pair(g1, g2, "two_way")
            oracle = brute_force_match(p1, p2, lam=0.5)
            assert res.objective >= oracle.objective - 1e-9

    def test_monotone_descent_trace(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            n = int(rng.integers(4, 9))
            g1 = random_symmetric_graph(n, rng)
            g2 = random_symmetric_graph(n, rng)
            res = match_faq(g1, g2, MatchConfig())
            objs = res.solver_trace.objectives
            assert len(objs) == res.solver_trace.iterations + 1
            for a, b in zip(objs, objs[1:]):
                assert b <= a + 1e-9 * (1.0 + abs(a))
            for eta in res.solver_trace.step_sizes:
                assert 0.0 < eta <= 1.0

    def test_non_convergence_flagged(self):
        rng = np.random.default_rng(9)
        g1 = random_symmetric_graph(8, rng)
        g2 = random_symmetric_graph(8, rng)
        res = match_faq(g1, g2, MatchConfig(max_iter=1, tol=1e-300))
        assert not res.solver_trace.converged

    def test_directed_graphs_supported(self):
        rng = np.random.default_rng(10)
        for _ in range(10):
            n = int(rng.integers(4, 8))
            g = random_directed_graph(n, rng)
            p = rng.permutation(n)
            res = match_faq(g, permute(g, p), MatchConfig(refinement=True, restarts=3))
            assert res.objective <= 1e-18

    def test_objective_recompute_invariant(self):
        rng = np.random.default_rng(11)
        w1 = np.triu(rng.random((5, 5)), 1)
        w2 = np.triu(rng.random((4, 4)), 1)
        g1 = Graph(w1 + w1.T, node_attrs=rng.normal(size=(5, 2)))
        g2 = Graph(w2 + w2.T, node_attrs=rng.normal(size=(4, 2)))
        res = match_faq(g1, g2, MatchConfig(lam=0.7))
        a1 = res.g1_registered
        a2 = res.g2_padded
        inv = res.p.inverse().perm
        naive = 0.0
        n = a1.n
        for i in range(n):
            for j in range(n):
                naive += (a1.adjacency[i, j] - a2.adjacency[i, j]) ** 2
        for i in range(n):
            # node i of the padded source sits at slot res.p.perm[i]
            src = inv[i]
            if not a1.null_mask[i] and not a2.null_mask[i]:
                naive += 0.7 * float(
                    ((a1.node_attrs[i] - a2.node_attrs[i]) ** 2).sum()
                )
        assert abs(naive - res.objective) <= 1e-9 * (1.0 + abs(res.objective))
        assert sorted(res.p.perm.tolist()) == list(range(n))


class TestGraphDistance:
    def test_self_distance_zero(self):
        rng = np.random.default_rng(12)
        g = random_symmetric_graph(6, rng)
        res = graph_distance(g, g, MatchConfig())
        assert res.d_g == 0.0

    def test_orbit_membership_gives_zero(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            n = int(rng.integers(4, 9))
            g = random_symmetric_graph(n, rng)
            res = graph_distance(g, permute(g, rng.permutation(n)), MatchConfig())
            assert res.d_g == 0.0

    def test_two_node_exact_value(self):
        g1 = Graph([[0.0, 1.0], [1.0, 0.0]])
        g2 = Graph([[0.0, 3.0], [3.0, 0.0]])
        res = graph_distance(g1, g2, MatchConfig(solver="brute", padding="none"))
        assert res.d_g == math.sqrt(8.0)

    def test_padding_none_requires_equal_sizes(self):
        with pytest.raises(ValueError, match="equal sizes"):
            graph_distance(
                Graph(np.zeros((2, 2))),
                Graph(np.zeros((3, 3))),
                MatchConfig(padding="none"),
            )

    def test_lambda_requires_attributes(self):
        g = Graph(np.zeros((2, 2)))
        with pytest.raises(ValueError, match="attributes"):
            graph_distance(g, g, MatchConfig(lam=1.0))

    def test_brute_metric_axioms_small(self):
        rng = np.random.default_rng(14)
        cfg = MatchConfig(solver="brute", padding="none")
        for _ in range(25):
            n = int(rng.integers(2, 6))
            a = random_symmetric_graph(n, rng)
            b = random_symmetric_graph(n, rng)
            c = random_symmetric_graph(n, rng)
            dab = graph_distance(a, b, cfg).d_g
            dba = graph_distance(b, a, cfg).d_g
            dac = graph_distance(a, c, cfg).d_g
            dcb = graph_distance(c, b, cfg).d_g
            assert dab == dba
            assert dab <= dac + dcb + 1e-9


class TestGeodesic:
    def _registered_pair(self, rng, n=5):
        g1 = random_symmetric_graph(n, rng)
        g2 = random_symmetric_graph(n, rng)
        return graph_distance(g1, g2, MatchConfig(solver="brute", padding="none"))

    def test_endpoints_exact(self):
        rng = np.random.default_rng(15)
        m = self._registered_pair(rng)
        assert geodesic(m, 0.0) is m.g1_registered
        assert geodesic(m, 1.0) is m.g2_padded

    def test_midpoint_weight(self):
        g1 = Graph([[0.0, 1.0], [1.0, 0.0]])
        g2 = Graph([[0.0, 3.0], [3.0, 0.0]])
        m = graph_distance(g1, g2, MatchConfig(solver="brute", padding="none"))
        mid = geodesic(m, 0.5)
        assert mid.adjacency[0, 1] == 2.0

    def test_linearity_of_path(self):
        from graphspace import ambient_distance

        rng = np.random.default_rng(16)
        for _ in range(10):
            m = self._registered_pair(rng)
            total = ambient_distance(m.g1_registered, m.g2_padded)
            for t in (0.25, 0.5, 0.75):
                d = ambient_distance(m.g1_registered, geodesic(m, t))
                assert abs(d - t * total) <= 1e-9 * (1.0 + total)

    def test_attribute_interpolation_with_nulls(self):
        g1 = Graph(np.zeros((1, 1)), node_attrs=[[0.0, 0.0]])
        g2 = Graph(np.zeros((2, 2)), node_attrs=[[4.0, 0.0], [0.0, 4.0]])
        m = graph_distance(g1, g2, MatchConfig(solver="brute", padding="one_way", lam=1.0))
        mid = geodesic(m, 0.5)
        # the null slot of g1 starts at its partner's position: no sliding
        null_slot = int(np.flatnonzero(m.g1_registered.null_mask)[0])
        assert np.array_equal(mid.node_attrs[null_slot], m.g2_padded.node_attrs[null_slot])

    def test_t_out_of_range(self):
        rng = np.random.default_rng(17)
        m = self._registered_pair(rng)
        with pytest.raises(ValueError, match="0, 1"):
            geodesic(m, 1.5)
