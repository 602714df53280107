import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import PENTAGON
from homent.errors import DomainError
from homent.graph import Graph, generate_gnk, permute
from homent.infogeo import (A1_GRAPH, A2_GRAPH, analytic_det_g1, analytic_det_g2,
                            analytic_metric_g1, analytic_metric_g2, domain_a1, domain_a2,
                            evaluate_batch, evaluate_one, fisher_metric, in_domain, psi)

positive = st.floats(0.05, 20.0)


def finite_difference_metric(theta, g, h=1e-4):
    """-1/2 Hessian of log det psi by central differences."""
    n = len(theta)

    def f(t):
        return np.linalg.slogdet(psi(t, g))[1]

    H = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            e_i, e_j = np.eye(n)[i] * h, np.eye(n)[j] * h
            H[i, j] = (f(theta + e_i + e_j) - f(theta + e_i - e_j)
                       - f(theta - e_i + e_j) + f(theta - e_i - e_j)) / (4 * h * h)
    return -0.5 * H


class TestPsi:
    def test_single_edge(self):
        M = psi([2, 3, 4, 5, 6], A1_GRAPH)
        expected = np.diag([2.0, 3, 4, 5, 6])
        expected[0, 1] = expected[1, 0] = 1
        np.testing.assert_array_equal(M, expected)

    def test_empty_graph_is_diagonal(self):
        np.testing.assert_array_equal(psi([1, 2, 3], Graph(3)), np.diag([1.0, 2, 3]))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            psi([1, 2], A1_GRAPH)


class TestDomain:
    def test_single_edge_examples(self):
        assert not in_domain([1, 1, 1, 1, 1], A1_GRAPH)
        assert in_domain([2, 2, 1, 1, 1], A1_GRAPH)

    def test_triangle_boundary_excluded(self):
        assert not in_domain([2, 2, 2 / 3, 1, 1], A2_GRAPH)
        assert in_domain([2, 2, 2 / 3 + 1e-6, 1, 1], A2_GRAPH)

    def test_nonpositive_excluded(self):
        assert not in_domain([0, 1, 1, 1, 1], Graph(5))

    @given(st.lists(positive, min_size=5, max_size=5))
    @settings(max_examples=300)
    def test_closed_form_domains(self, theta):
        t = np.array(theta)
        a = in_domain(t, A1_GRAPH)
        if a != domain_a1(t):
            assume(abs(t[0] * t[1] - 1) > 1e-9)
            assert a == domain_a1(t)
        b = in_domain(t, A2_GRAPH)
        if b != domain_a2(t):
            d = t[0] * (t[1] * t[2] - 1) - t[1] - t[2] + 2
            assume(abs(d) > 1e-9 * max(t[:3]) ** 3)
            assert b == domain_a2(t)

    @given(st.lists(positive, min_size=5, max_size=5))
    def test_matches_eigenvalue_test(self, theta):
        M = psi(theta, PENTAGON)
        lam = np.linalg.eigvalsh(M)
        assume(abs(lam[0]) > 1e-9 * lam[-1])
        assert in_domain(theta, PENTAGON) == (lam[0] > 0)


class TestMetric:
    def test_single_edge_values(self):
        m = fisher_metric([2, 2, 1, 1, 1], A1_GRAPH)
        assert m.det_g == pytest.approx(5 / 864, rel=1e-12)
        assert m.g_tilde[0, 0] == pytest.approx(4 / 18, rel=1e-12)
        assert m.g_tilde[2, 2] == pytest.approx(0.5, rel=1e-12)
        assert m.psi_det == pytest.approx(3.0, rel=1e-12)
        assert not m.overflow_flag

    def test_empty_graph_closed_form(self):
        theta = np.array([0.5, 2.0, 3.0])
        m = fisher_metric(theta, Graph(3))
        np.testing.assert_allclose(m.g_tilde, np.diag(1 / (2 * theta**2)), rtol=1e-14)

    def test_outside_domain(self):
        with pytest.raises(DomainError, match="theta outside Theta-tilde"):
            fisher_metric([1, 1, 1, 1, 1], PENTAGON)

    def test_symmetric_positive_definite(self):
        g = generate_gnk(8, 10, seed=1)
        m = fisher_metric(np.full(8, 8.0), g)
        np.testing.assert_array_equal(m.g_tilde, m.g_tilde.T)
        assert np.linalg.eigvalsh(m.g_tilde).min() > 0

    @pytest.mark.parametrize("graph", [A1_GRAPH, A2_GRAPH, PENTAGON])
    def test_matches_hessian_of_log_det(self, graph):
        theta = np.array([2.5, 3.0, 1.7, 2.2, 4.0])
        m = fisher_metric(theta, graph)
        np.testing.assert_allclose(m.g_tilde, finite_difference_metric(theta, graph),
                                   rtol=1e-5, atol=1e-7)

    def test_closed_forms_at_reference_point(self):
        theta = np.array([2.0, 3.0, 1.5, 1.2, 0.7])
        m1, m2 = fisher_metric(theta, A1_GRAPH), fisher_metric(theta, A2_GRAPH)
        np.testing.assert_allclose(m1.g_tilde, analytic_metric_g1(theta), rtol=1e-12)
        np.testing.assert_allclose(m2.g_tilde, analytic_metric_g2(theta), rtol=1e-12)
        assert m1.det_g == pytest.approx(analytic_det_g1(theta), rel=1e-12)
        assert m2.det_g == pytest.approx(analytic_det_g2(theta), rel=1e-12)
        assert m2.det_g == pytest.approx(0.00613, rel=1e-3)

    def test_diverges_toward_boundary(self):
        vals = [fisher_metric([2, 2, 2 / 3 + eps, 1, 1], A2_GRAPH).log_det_g
                for eps in (1e-1, 1e-3, 1e-5)]
        assert vals[0] < vals[1] < vals[2]

    def test_overflow_flag(self):
        theta = [2, 2, 1, 1, 1]
        assert fisher_metric(theta, A1_GRAPH, overflow_cap=1e-3).overflow_flag
        assert not fisher_metric(theta, A1_GRAPH).overflow_flag

    def test_extreme_determinant_in_log_space(self):
        theta = np.full(200, 1e-3)
        m = fisher_metric(theta, Graph(200))
        assert m.log_det_g == pytest.approx(200 * math.log(1 / (2 * 1e-6)), rel=1e-12)
        assert m.det_g == math.inf and m.overflow_flag

    def test_json(self):
        d = fisher_metric([2, 2, 1, 1, 1], A1_GRAPH).to_dict()
        assert set(d) == {"g_tilde", "log_det_g", "det_g", "sqrt_det", "psi_det",
                          "overflow_flag"}

    @given(st.permutations(range(5)), st.lists(st.floats(1.5, 9.0), min_size=5, max_size=5))
    @settings(max_examples=60)
    def test_permutation_equivariance(self, pi, theta):
        g = A2_GRAPH
        theta = np.array(theta)
        pi = np.array(pi)
        mapped = np.empty(5)
        mapped[pi] = theta
        a = fisher_metric(theta, g)
        b = fisher_metric(mapped, permute(g, pi))
        assert b.log_det_g == pytest.approx(a.log_det_g, rel=1e-12, abs=1e-12)
        np.testing.assert_allclose(b.g_tilde[np.ix_(pi, pi)], a.g_tilde, rtol=1e-12)


class TestBatch:
    def test_batch_matches_single(self):
        g = generate_gnk(10, 15, seed=2)
        A = g.adjacency()
        rng = np.random.default_rng(0)
        thetas = rng.uniform(0.5, 8, size=(200, 10))
        ev = evaluate_batch(thetas, A)
        for t, ok, ld in zip(thetas, ev.in_domain, ev.log_det_g):
            one = evaluate_one(t, A)
            assert one[0] == ok
            if ok:
                assert one[3] == pytest.approx(ld, rel=1e-10)
                assert fisher_metric(t, g).log_det_g == pytest.approx(ld, rel=1e-10)

    def test_relabel_bitwise(self):
        g = generate_gnk(10, 15, seed=2)
        pi = np.random.default_rng(3).permutation(10)
        thetas = np.random.default_rng(4).uniform(1, 8, size=(50, 10))
        mapped = np.empty_like(thetas)
        mapped[:, pi] = thetas
        a = evaluate_batch(thetas, g.adjacency())
        b = evaluate_batch(mapped, permute(g, pi).adjacency())
        np.testing.assert_array_equal(a.in_domain, b.in_domain)
        np.testing.assert_array_equal(a.log_det_g, b.log_det_g)
