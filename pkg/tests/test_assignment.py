import itertools
import math

import numpy as np
import pytest

from conftest import random_symmetric_graph
from graphspace import (
    Graph,
    brute_force_match,
    objective_value,
    pad_pair,
    permute,
    solve_lap,
)


def enumerate_lap(cost, sense="min"):
    """Exhaustive assignment oracle (fsum totals, lexicographic scan order)."""
    n = len(cost)
    best_perm, best = None, None
    better = (lambda a, b: a < b) if sense == "min" else (lambda a, b: a > b)
    for p in itertools.permutations(range(n)):
        total = math.fsum(cost[i][p[i]] for i in range(n))
        if best is None or better(total, best):
            best, best_perm = total, p
    return best_perm, best


class TestSolveLap:
    def test_two_by_two_min(self):
        res = solve_lap([[1.0, 2.0], [2.0, 1.0]])
        assert res.assignment.perm.tolist() == [0, 1]
        assert res.cost == 2.0

    def test_identity_max(self):
        res = solve_lap(np.eye(4), sense="max")
        assert res.assignment.perm.tolist() == [0, 1, 2, 3]
        assert res.cost == 4.0

    def test_matches_enumeration_exactly(self):
        rng = np.random.default_rng(0)
        for _ in range(60):
            n = int(rng.integers(1, 8))
            c = rng.normal(size=(n, n))
            res = solve_lap(c)
            _, best = enumerate_lap(c)
            assert res.cost == best

    def test_max_matches_enumeration(self):
        rng = np.random.default_rng(1)
        for _ in range(30):
            n = int(rng.integers(1, 7))
            c = rng.normal(size=(n, n))
            res = solve_lap(c, sense="max")
            _, best = enumerate_lap(c, sense="max")
            assert res.cost == best

    def test_duality(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            n = int(rng.integers(1, 8))
            c = rng.normal(size=(n, n))
            assert solve_lap(c, "min").cost == -solve_lap(-c, "max").cost

    def test_lexicographic_on_full_tie(self):
        res = solve_lap(np.ones((5, 5)))
        assert res.assignment.perm.tolist() == [0, 1, 2, 3, 4]

    def test_lexicographic_on_structured_tie(self):
        # optimal zero-cost assignments avoid the (0,2)/(2,0) corners; the
        # lexicographically smallest optimum is [1, 2, 0]
        c = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        res = solve_lap(c)
        assert res.cost == 0.0
        assert res.assignment.perm.tolist() == [1, 2, 0]

    def test_lexicographic_among_equal_rows(self):
        c = np.array([[5.0, 5.0, 1.0], [2.0, 2.0, 9.0], [3.0, 3.0, 9.0]])
        res = solve_lap(c)
        perm, best = enumerate_lap(c)
        assert res.cost == best
        assert res.assignment.perm.tolist() == list(perm)

    def test_lexicographic_stress_with_heavy_ties(self):
        # small-integer and 0/1 matrices are exactly representable, so both
        # the optimum and the lexicographic choice must match enumeration
        rng = np.random.default_rng(9)
        for trial in range(300):
            n = int(rng.integers(1, 7))
            top = 2 if trial % 2 else 3
            c = rng.integers(0, top, size=(n, n)).astype(float)
            sense = "min" if trial % 3 else "max"
            res = solve_lap(c, sense)
            perm, best = enumerate_lap(c, sense)
            assert res.cost == best
            assert res.assignment.perm.tolist() == list(perm)

    def test_reported_cost_is_selected_sum(self):
        rng = np.random.default_rng(3)
        c = rng.normal(size=(6, 6))
        res = solve_lap(c)
        recomputed = math.fsum(c[i, j] for i, j in enumerate(res.assignment.perm))
        assert res.cost == recomputed

    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            solve_lap(np.zeros((2, 3)))

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError, match="finite"):
            solve_lap([[np.nan, 0.0], [0.0, 1.0]])


class TestObjectiveValue:
    def test_matches_naive_recomputation(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            n = int(rng.integers(2, 7))
            a1 = rng.normal(size=(n, n))
            a2 = rng.normal(size=(n, n))
            d = rng.random((n, n))
            lam = float(rng.random())
            p = rng.permutation(n)
            naive = 0.0
            for i in range(n):
                for j in range(n):
                    naive += (a1[i, j] - a2[p[i], p[j]]) ** 2
                naive += lam * d[i, p[i]]
            got = objective_value(a1, a2, d, lam, p)
            assert abs(got - naive) <= 1e-9 * (1.0 + abs(naive))


class TestBruteForceMatch:
    def test_self_match_identity(self):
        rng = np.random.default_rng(5)
        g = random_symmetric_graph(5, rng)
        res = brute_force_match(g, g)
        assert res.objective == 0.0
        assert res.p.perm.tolist() == [0, 1, 2, 3, 4]
        assert res.n_co_optimal == 1

    def test_recovers_planted_permutation(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            n = int(rng.integers(3, 7))
            g = random_symmetric_graph(n, rng)
            p = rng.permutation(n)
            res = brute_force_match(g, permute(g, p))
            assert res.objective == 0.0
            assert np.array_equal(res.p.perm, p)

    def test_two_node_tie_reported(self):
        g1 = Graph([[0.0, 1.0], [1.0, 0.0]])
        g2 = Graph([[0.0, 3.0], [3.0, 0.0]])
        res = brute_force_match(g1, g2)
        assert res.objective == 8.0
        assert res.n_co_optimal == 2
        assert sorted(t.perm.tolist() for t in res.co_optimal) == [[0, 1], [1, 0]]

    def test_cost_symmetric_in_arguments(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            n = int(rng.integers(2, 6))
            g1 = random_symmetric_graph(n, rng)
            g2 = random_symmetric_graph(n, rng)
            assert brute_force_match(g1, g2).objective == brute_force_match(g2, g1).objective

    def test_with_node_attributes(self):
        # edge-free graphs: the optimum is the assignment oracle on attr costs
        attrs1 = [[0.0], [1.0], [5.0]]
        attrs2 = [[1.1], [4.8], [0.2]]
        g1 = Graph(np.zeros((3, 3)), node_attrs=attrs1)
        g2 = Graph(np.zeros((3, 3)), node_attrs=attrs2)
        lam = 2.0
        res = brute_force_match(g1, g2, lam=lam)
        cost = np.array([[(a[0] - b[0]) ** 2 for b in attrs2] for a in attrs1])
        perm, best = None, None
        for p in itertools.permutations(range(3)):
            tot = sum(cost[i][p[i]] for i in range(3))
            if best is None or tot < best:
                best, perm = tot, p
        assert abs(res.objective - lam * best) <= 1e-12
        assert res.p.perm.tolist() == list(perm)

    def test_all_zero_graphs_tie_over_everything(self):
        g = Graph(np.zeros((3, 3)))
        res = brute_force_match(g, g)
        assert res.n_co_optimal == 6

    def test_size_guard(self):
        g = Graph(np.zeros((11, 11)))
        with pytest.raises(ValueError, match="refuses"):
            brute_force_match(g, g)

    def test_unequal_sizes_rejected(self):
        with pytest.raises(ValueError, match="equal sizes"):
            brute_force_match(Graph(np.zeros((2, 2))), Graph(np.zeros((3, 3))))

    def test_padded_pair_tie_includes_null_swaps(self):
        rng = np.random.default_rng(8)
        g = random_symmetric_graph(2, rng)
        p1, p2 = pad_pair(g, g, "two_way")
        res = brute_force_match(p1, p2)
        assert res.objective == 0.0
        # the two null nodes of each side permute freely: at least 2!*... ties
        assert res.n_co_optimal >= 2
