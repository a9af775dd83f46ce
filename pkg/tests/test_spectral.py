from __future__ import annotations

import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diam4.errors import ConvergenceFailure, InvalidParameters
from diam4.graph import Graph, enumerate_graphs, is_connected, make_snk, make_snk_plus
from diam4.spectral import (
    CharPolyParams,
    Verdict,
    b_column_sums,
    eq1_identity_check,
    eq2_bound_check,
    exact_radius_snk,
    exact_radius_snk_plus,
    lemma21_check,
    link_form,
    snk_plus_cubic,
    spectral_radius,
)

from .conftest import graphs

# Frozen from numpy.linalg.eigvalsh on the full adjacency matrices.
MU_S_6_2 = 3.3722813232690143
MU_S_10_2 = 4.531128874149274
MU_SPLUS = {(4, 2): 3.0, (7, 2): 3.9095159661559533, (8, 2): 4.175544387350498, (10, 3): 5.821253936536076}


def eig_max(g: Graph) -> float:
    return float(np.linalg.eigvalsh(g.adjacency_matrix().astype(float))[-1]) if g.n else 0.0


class TestClosedForms:
    @pytest.mark.parametrize("n", [2, 5, 17, 100])
    def test_star(self, n):
        assert exact_radius_snk(n, 1) == pytest.approx(math.sqrt(n - 1), rel=1e-15)

    def test_frozen(self):
        assert exact_radius_snk(6, 2) == pytest.approx((1 + math.sqrt(33)) / 2, rel=1e-15)
        assert abs(exact_radius_snk(6, 2) - MU_S_6_2) < 1e-12
        assert abs(exact_radius_snk(10, 2) - MU_S_10_2) < 1e-12

    @pytest.mark.parametrize("n,k", [(3, 3), (0, 0), (5, 0)])
    def test_invalid(self, n, k):
        with pytest.raises(InvalidParameters):
            exact_radius_snk(n, k)

    @pytest.mark.parametrize("n", [10, 100, 1000])
    @pytest.mark.parametrize("k", range(1, 6))
    def test_root_of_f(self, n, k):
        mu = exact_radius_snk(n, k)
        f = CharPolyParams.for_snk(n, k)
        assert abs(f(mu)) <= 1e-12 * mu * mu

    @pytest.mark.parametrize("nk,expected", sorted(MU_SPLUS.items()))
    def test_snk_plus_frozen(self, nk, expected):
        assert abs(exact_radius_snk_plus(*nk) - expected) < 1e-10

    def test_snk_plus_k4(self):
        assert exact_radius_snk_plus(4, 2) == pytest.approx(3.0, abs=1e-12)

    @pytest.mark.parametrize("n,k", [(n, k) for n in range(3, 30, 3) for k in range(1, n - 1)])
    def test_snk_plus_cubic_root_and_quotient(self, n, k):
        mu = exact_radius_snk_plus(n, k)
        c = snk_plus_cubic(n, k)
        assert abs(np.polyval(c, mu)) <= 1e-9 * mu**3
        q = np.array([[k - 1, 2, n - k - 2], [k, 1, 0], [k, 0, 0]], dtype=float)
        assert mu == pytest.approx(max(np.linalg.eigvals(q).real), rel=1e-12)
        assert mu > exact_radius_snk(n, k)

    def test_snk_plus_invalid(self):
        with pytest.raises(InvalidParameters):
            exact_radius_snk_plus(3, 2)


class TestPowerIteration:
    def test_empty(self):
        assert spectral_radius(Graph.empty(7)).radius == 0.0

    @pytest.mark.parametrize("n", [1, 2, 5, 12])
    def test_complete(self, n):
        assert spectral_radius(Graph.complete(n)).radius == pytest.approx(n - 1, abs=1e-9)

    def test_s62(self):
        assert abs(spectral_radius(make_snk(6, 2)).radius - exact_radius_snk(6, 2)) < 1e-8

    @pytest.mark.parametrize("n", [10, 100, 1000])
    @pytest.mark.parametrize("k", range(1, 6))
    def test_snk_grid(self, n, k):
        res = spectral_radius(make_snk(n, k))
        assert abs(res.radius - exact_radius_snk(n, k)) <= 1e-8
        assert res.residual <= 1e-12 * max(1.0, res.radius)

    @pytest.mark.parametrize("n,k", [(8, 2), (7, 2), (10, 3), (300, 4)])
    def test_snk_plus_matches_quotient(self, n, k):
        assert abs(spectral_radius(make_snk_plus(n, k)).radius - exact_radius_snk_plus(n, k)) <= 1e-8

    @pytest.mark.parametrize("g", [Graph.path(2), Graph.cycle(6), Graph.path(9), Graph.from_edges(5, [(0, 1), (2, 3), (3, 4)])])
    def test_bipartite_and_disconnected(self, g):
        assert spectral_radius(g).radius == pytest.approx(eig_max(g), abs=1e-9)

    def test_disconnected_takes_max_component(self):
        g = Graph.from_edges(7, [(0, 1), (2, 3), (3, 4), (4, 2), (4, 5), (5, 6)])
        assert spectral_radius(g).radius == pytest.approx(eig_max(g), abs=1e-9)

    @settings(max_examples=80)
    @given(graphs(max_n=14))
    def test_matches_eigvalsh(self, g):
        assert spectral_radius(g).radius == pytest.approx(eig_max(g), abs=1e-8)

    @settings(max_examples=60)
    @given(graphs(min_n=2, max_n=12, connected=True), st.data())
    def test_adding_edge_never_decreases(self, g, data):
        missing = [(i, j) for i, j in itertools.combinations(range(g.n), 2) if not g.has_edge(i, j)]
        if not missing:
            return
        e = data.draw(st.sampled_from(missing))
        assert spectral_radius(g.with_edges([e])).radius >= spectral_radius(g).radius - 1e-9

    def test_convergence_failure_carries_estimate(self):
        with pytest.raises(ConvergenceFailure) as info:
            spectral_radius(Graph.path(40), max_iter=3)
        assert info.value.estimate > 0


class TestColumnSums:
    def test_s62_all_zero(self):
        assert b_column_sums(make_snk(6, 2), 1, 8).sums == (0,) * 6

    @pytest.mark.parametrize("n,b", [(1, 1), (4, 3), (9, 10)])
    def test_empty(self, n, b):
        assert b_column_sums(Graph.empty(n), 2, b).sums == (-b,) * n

    def test_k4(self):
        assert b_column_sums(Graph.complete(4), 1, 8).sums == (-2,) * 4

    @settings(max_examples=60)
    @given(graphs(max_n=9), st.integers(0, 6), st.integers(0, 20))
    def test_matches_matrix(self, g, a, b):
        A = g.adjacency_matrix().astype(np.int64)
        B = A @ A - a * A - b * np.eye(g.n, dtype=np.int64)
        assert b_column_sums(g, a, b).sums == tuple(int(x) for x in B.sum(axis=0))

    def test_eq1_examples(self):
        assert eq1_identity_check(Graph.empty(3), 1)
        assert eq1_identity_check(Graph.cycle(5), 2)
        assert [link_form(Graph.empty(3), 1, v) for v in range(3)] == [-2, -2, -2]

    @pytest.mark.parametrize("n", range(1, 8))
    def test_eq1_and_eq2_exhaustive(self, n):
        for g in enumerate_graphs(n):
            for k in range(1, 5):
                assert eq1_identity_check(g, k)
                assert eq2_bound_check(g, k)


class TestComparisonCriterion:
    def test_s62_equality(self):
        r = lemma21_check(make_snk(6, 2), 1, 8)
        assert r.verdict is Verdict.EQUALITY_CASE
        assert abs(r.margin) < 1e-9

    def test_k4_bound_holds(self):
        r = lemma21_check(Graph.complete(4), 1, 8)
        assert r.verdict is Verdict.BOUND_HOLDS
        assert r.mu == pytest.approx(3.0, abs=1e-9)
        assert r.mu_prime == pytest.approx((1 + math.sqrt(33)) / 2)

    def test_positive_column_sum(self):
        r = lemma21_check(Graph.complete(6), 1, 1)
        assert r.verdict is Verdict.HYPOTHESIS_NOT_MET
        assert r.witness is not None

    def test_disconnected(self):
        assert lemma21_check(Graph.empty(3), 1, 1).verdict is Verdict.HYPOTHESIS_NOT_MET

    def test_bad_params(self):
        with pytest.raises(InvalidParameters):
            lemma21_check(Graph.complete(3), 1, 0)
        with pytest.raises(InvalidParameters):
            lemma21_check(Graph.complete(3), -1, 1)

    @pytest.mark.parametrize("n", [10, 25, 40])
    @pytest.mark.parametrize("k", [1, 2, 3, 5])
    def test_snk_equality(self, n, k):
        r = lemma21_check(make_snk(n, k), k - 1, k * (n - k))
        assert r.verdict is Verdict.EQUALITY_CASE
        assert abs(r.margin) <= 1e-8

    def test_randomized_suite(self):
        rnd = random.Random(20240601)
        verdicts = {v: 0 for v in Verdict}
        done = 0
        while done < 240:
            n = rnd.randint(2, 30)
            p = rnd.uniform(0.05, 0.9)
            edges = [(i, j) for i, j in itertools.combinations(range(n), 2) if rnd.random() < p]
            g = Graph.from_edges(n, edges)
            if not is_connected(g):
                continue
            done += 1
            r = lemma21_check(g, rnd.randint(1, 10), rnd.randint(1, 10))
            verdicts[r.verdict] += 1
            assert r.verdict is not Verdict.VIOLATION, r
        assert verdicts[Verdict.BOUND_HOLDS] > 0
