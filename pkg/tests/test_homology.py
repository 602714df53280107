import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import PENTAGON, REFERENCE_NETWORKS, REFERENCE_BETTI, TWIN_NETWORKS, TWIN_BETTI
from homent.complex import clique_complex
from homent.errors import TruncationError
from homent.graph import Graph, complete_graph, cycle_graph, generate_gnk
from homent.homology import (MERSENNE_31, betti_numbers, boundary_matrix,
                             connected_components, cycle_rank, rank_exact, rank_mod_p)


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, frozenset(chosen))


def bfs_components(g):
    nbrs, seen, count = g.neighbors(), set(), 0
    for v in range(g.n):
        if v in seen:
            continue
        count += 1
        stack = [v]
        while stack:
            u = stack.pop()
            if u not in seen:
                seen.add(u)
                stack.extend(nbrs[u])
    return count


def triangle_free(g):
    nbrs = g.neighbors()
    return not any(nbrs[a] & nbrs[b] for a, b in g.edges)


class TestBoundary:
    def test_triangle_matrix(self):
        s = clique_complex(Graph(3, frozenset({(0, 1), (1, 2), (0, 2)})), 2)
        # rows (0,1), (0,2), (1,2); d[0,1,2] = (1,2) - (0,2) + (0,1)
        np.testing.assert_array_equal(boundary_matrix(s, 2).to_dense(), [[1], [-1], [1]])
        d1 = boundary_matrix(s, 1).to_dense()
        np.testing.assert_array_equal(d1, [[-1, -1, 0], [1, 0, -1], [0, 1, 1]])

    def test_sparse_matches_dense(self):
        s = clique_complex(complete_graph(5), 4)
        B = boundary_matrix(s, 2)
        np.testing.assert_array_equal(B.to_sparse().toarray(), B.to_dense())

    def test_out_of_range(self):
        s = clique_complex(PENTAGON, 1)
        with pytest.raises(TruncationError):
            boundary_matrix(s, 2)

    @given(graphs(), st.integers(1, 3))
    @settings(max_examples=80, deadline=None)
    def test_boundary_of_boundary_vanishes(self, g, p):
        s = clique_complex(g, p + 1)
        prod = boundary_matrix(s, p).to_dense() @ boundary_matrix(s, p + 1).to_dense()
        assert not prod.any()


class TestRank:
    @given(st.integers(1, 6), st.integers(1, 6), st.data())
    @settings(max_examples=80, deadline=None)
    def test_modp_and_exact_match_float_rank(self, r, c, data):
        entries = data.draw(st.lists(st.integers(-3, 3), min_size=r * c, max_size=r * c))
        M = np.array(entries, dtype=np.int64).reshape(r, c)
        expected = np.linalg.matrix_rank(M.astype(float))
        assert rank_exact(M) == expected
        assert rank_mod_p(M) == expected

    def test_small_prime_sees_torsion(self):
        M = np.array([[2, 0], [0, 1]])
        assert rank_mod_p(M, 2) == 1 and rank_exact(M) == 2

    def test_empty(self):
        assert rank_mod_p(np.zeros((0, 3), dtype=np.int64)) == 0
        assert rank_exact(np.zeros((3, 0), dtype=np.int64)) == 0


class TestBetti:
    @pytest.mark.parametrize("g, beta", list(zip(REFERENCE_NETWORKS + TWIN_NETWORKS, REFERENCE_BETTI + TWIN_BETTI)))
    def test_reference_networks(self, g, beta):
        assert betti_numbers(clique_complex(g, 2), 1).beta == beta
        assert betti_numbers(clique_complex(g, 2), 1, exact=True).beta == beta

    def test_field_characteristic(self):
        s = clique_complex(PENTAGON, 2)
        assert betti_numbers(s, 1).field_char == MERSENNE_31
        assert betti_numbers(s, 1, exact=True).field_char == 0

    def test_simplex_is_acyclic(self):
        assert betti_numbers(clique_complex(complete_graph(5), 4), 3).beta == (1, 0, 0, 0)

    def test_octahedron_has_two_sphere(self):
        # complete tripartite K(2,2,2): clique complex is the boundary of an octahedron
        pairs = {(0, 1), (2, 3), (4, 5)}
        g = Graph(6, frozenset(e for e in itertools.combinations(range(6), 2) if e not in pairs))
        assert betti_numbers(clique_complex(g, 3), 2).beta == (1, 0, 1)

    def test_empty_graph(self):
        assert betti_numbers(clique_complex(Graph(4), 2), 1).beta == (4, 0)

    def test_truncation_rejected(self):
        s = clique_complex(complete_graph(6), 1)
        with pytest.raises(TruncationError):
            betti_numbers(s, 1)

    def test_complete_complex_needs_no_extra_level(self):
        s = clique_complex(PENTAGON, 1)
        assert s.complete and betti_numbers(s, 1).beta == (1, 1)

    @given(graphs())
    @settings(max_examples=80, deadline=None)
    def test_euler_identity(self, g):
        s = clique_complex(g, g.n)
        beta = betti_numbers(s, g.n - 1).beta
        assert sum((-1) ** p * b for p, b in enumerate(beta)) == \
            sum((-1) ** p * v for p, v in enumerate(s.nu))

    @given(graphs())
    @settings(max_examples=80, deadline=None)
    def test_beta0_is_component_count(self, g):
        assert betti_numbers(clique_complex(g, 1), 0).beta[0] == bfs_components(g)

    @given(graphs())
    @settings(max_examples=80, deadline=None)
    def test_beta1_on_triangle_free(self, g):
        if triangle_free(g):
            beta1 = betti_numbers(clique_complex(g, 2), 1).beta[1]
            assert beta1 == g.num_edges - g.n + bfs_components(g)

    @given(graphs())
    @settings(max_examples=40, deadline=None)
    def test_exact_agrees_with_modp(self, g):
        s = clique_complex(g, 3)
        assert betti_numbers(s, 2).beta == betti_numbers(s, 2, exact=True).beta

    def test_cycles(self):
        for n in range(4, 9):
            assert betti_numbers(clique_complex(cycle_graph(n), 2), 1).beta == (1, 1)


class TestGraphOracles:
    def test_components_and_cycle_rank(self):
        assert connected_components(PENTAGON) == 1 and cycle_rank(PENTAGON) == 1
        g = generate_gnk(30, 20, seed=4)
        assert connected_components(g) == bfs_components(g)
        assert cycle_rank(g) == g.num_edges - g.n + bfs_components(g)
