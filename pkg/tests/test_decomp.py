from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import (
    chromatic_index_brute,
    gamma_brute,
    is_star_forest_by_definition,
    max_star_forest_brute,
    star_arboricity_brute,
)
from strategies import small_graphs

from incicolor import graphs
from incicolor.decomp import (
    StarForestDecomposition,
    chromatic_index_exact,
    domination_number_exact,
    edge_coloring_vizing,
    greedy_star_forests,
    is_dominating,
    is_proper_edge_coloring,
    is_star_forest,
    max_star_forest_edges,
    star_arboricity_exact,
    witness_json,
)
from incicolor.incidence import InstanceTooLarge, max_independent_arc_set


class TestIsStarForest:
    def test_star(self):
        G = graphs.star(3)
        assert is_star_forest(G, G.edges())

    def test_p4(self):
        G = graphs.path(4)
        assert not is_star_forest(G, G.edges())

    def test_triangle(self):
        G = graphs.cycle(3)
        assert not is_star_forest(G, G.edges())

    def test_empty_part(self):
        assert is_star_forest(graphs.cycle(3), [])

    @given(small_graphs(max_n=7), st.data())
    def test_matches_definition(self, G, data):
        edges = list(G.edges())
        part = data.draw(st.lists(st.sampled_from(edges), unique=True)) if edges else []
        assert is_star_forest(G, part) == is_star_forest_by_definition(part)


class TestStarArboricity:
    @pytest.mark.parametrize("k", [1, 2, 4])
    def test_star(self, k):
        assert star_arboricity_exact(graphs.star(k))[0] == 1

    def test_c5(self):
        st_, sfd = star_arboricity_exact(graphs.cycle(5))
        assert st_ == 2 and len(sfd) == 2

    def test_k4(self):
        assert star_arboricity_exact(graphs.complete(4))[0] == 3

    def test_frozen_values_reproduced_by_oracle(self):
        assert star_arboricity_brute(list(graphs.cycle(5).edges())) == 2
        assert star_arboricity_brute(list(graphs.complete(4).edges())) == 3

    @pytest.mark.parametrize("n, expected", [(4, 3), (5, 4), (6, 4), (7, 5), (8, 5)])
    def test_complete_graphs(self, n, expected):
        # known closed form ceil(n/2) + 1 for n >= 4
        assert star_arboricity_exact(graphs.complete(n))[0] == expected

    def test_lone_edge_centered_at_larger_endpoint(self):
        sfd = StarForestDecomposition.from_parts([[(2, 5)], [(0, 1), (0, 3)]])
        assert sfd.centers == ((5,), (0,))
        assert sfd.center_of(0, (2, 5)) == 5

    def test_witness_partition(self, corpus_graph):
        st_, sfd = star_arboricity_exact(corpus_graph)
        assert len(sfd) == st_
        assert sfd.is_valid_for(corpus_graph)
        assert sorted(e for p in sfd.parts for e in p) == list(corpus_graph.edges())
        gamma = domination_number_exact(corpus_graph)[0]
        if corpus_graph.edge_count:
            assert st_ >= -(-corpus_graph.edge_count // (corpus_graph.n - gamma))

    @given(small_graphs(max_n=5))
    def test_matches_brute_force(self, G):
        if G.edge_count <= 8:
            assert star_arboricity_exact(G)[0] == star_arboricity_brute(list(G.edges()))

    @given(small_graphs(max_n=8))
    def test_greedy_is_valid_upper_bound(self, G):
        sfd = greedy_star_forests(G)
        assert sfd.is_valid_for(G)
        assert len(sfd) >= star_arboricity_exact(G)[0]

    def test_json(self):
        sfd = star_arboricity_exact(graphs.cycle(4))[1]
        rows = sfd.to_json()
        assert len(rows) == 4
        assert all(r["center"] in (r["u"], r["v"]) for r in rows)
        assert witness_json(sfd).startswith("[")


class TestVizing:
    def test_c6(self):
        ec = edge_coloring_vizing(graphs.cycle(6))
        assert ec.is_proper_for(graphs.cycle(6)) and ec.palette_size <= 3

    def test_k4(self):
        ec = edge_coloring_vizing(graphs.complete(4))
        assert ec.is_proper_for(graphs.complete(4)) and ec.palette_size <= 4

    def test_star_exactly_delta(self):
        ec = edge_coloring_vizing(graphs.star(5))
        assert ec.is_proper_for(graphs.star(5))
        assert len(set(ec.colors.values())) == 5 == ec.palette_size

    def test_corpus(self, corpus_graph):
        ec = edge_coloring_vizing(corpus_graph)
        assert ec.is_proper_for(corpus_graph)
        assert ec.palette_size <= corpus_graph.max_degree + 1

    @given(small_graphs(max_n=12))
    def test_random(self, G):
        ec = edge_coloring_vizing(G)
        assert is_proper_edge_coloring(G, ec.colors)
        assert ec.palette_size <= G.max_degree + 1

    @pytest.mark.parametrize("seed", range(40))
    def test_dense_random(self, seed):
        G = graphs.random_gnp(16, 0.6, seed)
        ec = edge_coloring_vizing(G)
        assert ec.is_proper_for(G) and ec.palette_size <= G.max_degree + 1


class TestChromaticIndex:
    def test_c5(self):
        assert chromatic_index_exact(graphs.cycle(5))[0] == 3

    def test_k33(self):
        chi, ec = chromatic_index_exact(graphs.complete_bipartite(3, 3))
        assert chi == 3 and ec.is_proper_for(graphs.complete_bipartite(3, 3))

    def test_petersen(self):
        chi, ec = chromatic_index_exact(graphs.petersen())
        assert chi == 4 and ec.is_proper_for(graphs.petersen())

    def test_frozen_values_reproduced_by_oracle(self):
        assert chromatic_index_brute(5, list(graphs.cycle(5).edges())) == 3
        assert chromatic_index_brute(4, list(graphs.complete(4).edges())) == 3

    def test_vizing_envelope(self, corpus_graph):
        chi, ec = chromatic_index_exact(corpus_graph)
        delta = corpus_graph.max_degree
        assert chi in ({0} if delta == 0 else {delta, delta + 1})
        assert ec.is_proper_for(corpus_graph)
        assert len(set(ec.colors.values())) <= chi

    @given(small_graphs(max_n=6))
    def test_matches_brute_force(self, G):
        if G.edge_count <= 7:
            assert chromatic_index_exact(G)[0] == chromatic_index_brute(G.n, list(G.edges()))


class TestDomination:
    @pytest.mark.parametrize("n", range(1, 7))
    def test_complete(self, n):
        assert domination_number_exact(graphs.complete(n))[0] == 1

    def test_c5(self):
        g, D = domination_number_exact(graphs.cycle(5))
        assert g == 2 and D.dominates(graphs.cycle(5))
        assert not any(is_dominating(graphs.cycle(5), [v]) for v in range(5))

    def test_petersen(self):
        g, D = domination_number_exact(graphs.petersen())
        assert g == 3 and D.dominates(graphs.petersen())
        assert not any(is_dominating(graphs.petersen(), S) for S in combinations(range(10), 2))

    def test_corpus(self, corpus_graph):
        g, D = domination_number_exact(corpus_graph)
        assert len(D) == g and D.dominates(corpus_graph)
        assert g >= -(-corpus_graph.n // (corpus_graph.max_degree + 1))

    @given(small_graphs(max_n=8))
    def test_matches_brute_force(self, G):
        assert domination_number_exact(G)[0] == gamma_brute(G.n, list(G.edges()))

    def test_matches_networkx_min_dominating_count(self):
        # networkx has no exact solver; compare against its dominating-set checker
        G = graphs.grid(3, 4)
        g, D = domination_number_exact(G)
        H = nx.grid_2d_graph(3, 4)
        assert nx.is_dominating_set(H, {divmod(v, 4) for v in D.vertices})
        assert g == gamma_brute(G.n, list(G.edges()))

    def test_guard(self):
        with pytest.raises(InstanceTooLarge):
            domination_number_exact(graphs.complete(20))


class TestMaxStarForest:
    def test_c4(self):
        count, witness = max_star_forest_edges(graphs.cycle(4))
        assert count == 2 == max_star_forest_brute(list(graphs.cycle(4).edges()))
        assert is_star_forest(graphs.cycle(4), witness)

    def test_k4(self):
        count, witness = max_star_forest_edges(graphs.complete(4))
        assert count == 3 and len(witness) == 3
        assert len({v for e in witness for v in e}) == 4

    @pytest.mark.parametrize("k", [1, 3, 6])
    def test_star(self, k):
        assert max_star_forest_edges(graphs.star(k))[0] == k

    @given(small_graphs(max_n=6))
    def test_identity_against_brute_force(self, G):
        count, witness = max_star_forest_edges(G)
        assert len(witness) == count
        assert is_star_forest(G, witness)
        if G.edge_count <= 10:
            assert count == max_star_forest_brute(list(G.edges()))

    def test_cross_module_identity(self, corpus_graph):
        count, _ = max_star_forest_edges(corpus_graph)
        assert count == len(max_independent_arc_set(corpus_graph))
