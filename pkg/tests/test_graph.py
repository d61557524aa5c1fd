import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chromatlas.canon import canonical_form, canonical_graph6, is_isomorphic
from chromatlas.graph import (
    Graph,
    Graph6Error,
    block_decomposition,
    clique_number,
    complete_graph,
    contract_edge,
    count_cycles_of_length,
    cycle_graph,
    degree_sequence,
    delete_edge,
    from_graph6,
    girth,
    is_connected,
    path_graph,
    star_graph,
    subgraph_census,
)
from chromatlas.extremal import turan

from conftest import paw


@st.composite
def graphs(draw, min_n=1, max_n=16):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, k in zip(pairs, keep) if k])


class TestGraph6:
    @pytest.mark.parametrize("text, n, m", [("A_", 2, 1), ("Bw", 3, 3), ("A?", 2, 0), ("@", 1, 0)])
    def test_decode(self, text, n, m):
        g = from_graph6(text)
        assert (g.n, g.m) == (n, m)

    def test_encode(self):
        assert complete_graph(2).to_graph6() == "A_"
        assert complete_graph(3).to_graph6() == "Bw"
        assert Graph.empty(1).to_graph6() == "@"

    @pytest.mark.parametrize("bad, offset", [("A", 1), ("A_x", 1), ("R" + "?" * 30, 0), ("A\x07", 1), ("B~", 1)])
    def test_malformed_reports_offset(self, bad, offset):
        with pytest.raises(Graph6Error) as err:
            from_graph6(bad)
        assert err.value.offset == offset

    @given(graphs())
    @settings(max_examples=300, deadline=None)
    def test_round_trip(self, g):
        assert from_graph6(g.to_graph6()) == g


class TestBasics:
    def test_degree_sequences(self):
        assert degree_sequence(complete_graph(4)) == [3, 3, 3, 3]
        assert degree_sequence(path_graph(4)) == [1, 2, 2, 1]
        assert degree_sequence(star_graph(3)) == [3, 1, 1, 1]

    def test_connectivity(self):
        assert is_connected(complete_graph(5))
        assert not is_connected(Graph.from_edges(4, [(0, 1), (2, 3)]))
        assert is_connected(Graph.empty(1))

    def test_girth(self):
        assert girth(cycle_graph(5)) == 5
        assert girth(path_graph(6)) is None
        assert girth(star_graph(4)) is None
        assert girth(paw()) == 3

    def test_cycle_counts(self):
        assert count_cycles_of_length(cycle_graph(10), 10) == 1
        assert count_cycles_of_length(complete_graph(4), 3) == 4
        assert all(count_cycles_of_length(path_graph(6), k) == 0 for k in range(3, 7))

    def test_census(self):
        assert subgraph_census(complete_graph(4)) == (4, 0, 1)
        assert subgraph_census(cycle_graph(4)) == (0, 1, 0)
        assert subgraph_census(cycle_graph(5)) == (0, 0, 0)

    def test_clique_number(self):
        assert clique_number(complete_graph(5)) == 5
        assert clique_number(cycle_graph(5)) == 2
        assert clique_number(turan(6, 3)) == 3

    @given(graphs(max_n=9))
    @settings(max_examples=150, deadline=None)
    def test_handshake_and_clique_bruteforce(self, g):
        assert sum(degree_sequence(g)) == 2 * g.m
        best = max(
            (k for k in range(1, g.n + 1) for c in itertools.combinations(range(g.n), k)
             if all(g.has_edge(a, b) for a, b in itertools.combinations(c, 2))),
            default=0,
        )
        assert clique_number(g) == best


class TestBlocks:
    def test_paw(self):
        bd = block_decomposition(paw())
        assert sorted(map(sorted, bd.blocks)) == [[0, 1, 2], [2, 3]]
        assert bd.bridges == [(2, 3)]
        assert bd.cut_vertices == {2}

    def test_complete_and_path(self):
        assert len(block_decomposition(complete_graph(4)).blocks) == 1
        bd = block_decomposition(path_graph(4))
        assert len(bd.blocks) == 3 and len(bd.bridges) == 3

    def test_disconnected_rejected(self):
        with pytest.raises(ValueError):
            block_decomposition(Graph.from_edges(4, [(0, 1), (2, 3)]))

    @given(graphs(min_n=2, max_n=10))
    @settings(max_examples=150, deadline=None)
    def test_edges_partitioned(self, g):
        if not is_connected(g):
            return
        bd = block_decomposition(g)
        owners = [sum(1 for b in bd.blocks if u in b and v in b) for u, v in g.edges()]
        assert owners == [1] * g.m
        bridges = {tuple(sorted(e)) for e in bd.bridges}
        for u, v in g.edges():
            # a bridge disconnects the graph when removed
            assert ((u, v) in bridges) == (not is_connected(delete_edge(g, u, v)))


class TestCanonical:
    def test_p3_labelings(self):
        a = Graph.from_edges(3, [(0, 1), (1, 2)])
        b = Graph.from_edges(3, [(0, 2), (2, 1)])
        assert canonical_form(a) == canonical_form(b)
        assert canonical_form(a) != canonical_form(complete_graph(3))

    def test_paw_all_labelings(self):
        forms = {canonical_graph6(paw().relabel(list(p))) for p in itertools.permutations(range(4))}
        assert len(forms) == 1

    @given(graphs(max_n=11), st.randoms(use_true_random=False))
    @settings(max_examples=200, deadline=None)
    def test_invariant_under_relabeling(self, g, rnd):
        perm = list(range(g.n))
        rnd.shuffle(perm)
        h = g.relabel(perm)
        assert canonical_graph6(g) == canonical_graph6(h)
        assert is_isomorphic(g, h)

    def test_separates_classes(self):
        # brute-force certificate over all labeled 5-vertex graphs
        pairs = list(itertools.combinations(range(5), 2))
        perms = list(itertools.permutations(range(5)))
        rng = random.Random(7)
        masks = rng.sample(range(1 << len(pairs)), 300)
        gs = [Graph.from_edges(5, [p for i, p in enumerate(pairs) if m >> i & 1]) for m in masks]
        cert = [min(g.relabel(list(p)).adj for p in perms) for g in gs]
        canon = [canonical_graph6(g) for g in gs]
        for i in range(len(gs)):
            for j in range(i):
                assert (cert[i] == cert[j]) == (canon[i] == canon[j])

    def test_dense_and_symmetric_graphs(self):
        for n in (8, 12, 16):
            k = complete_graph(n)
            assert canonical_form(k) == k
        c = cycle_graph(12)
        assert canonical_graph6(c) == canonical_graph6(c.relabel([(5 * i) % 12 for i in range(12)]))


class TestEdgeOps:
    def test_contract_triangle(self):
        assert contract_edge(complete_graph(3), 0, 1) == complete_graph(2)

    def test_delete_from_cycle(self):
        assert is_isomorphic(delete_edge(cycle_graph(4), 0, 1), path_graph(4))

    def test_contract_square(self):
        # the two remaining vertices of C4 are adjacent, so the merge yields a triangle
        assert is_isomorphic(contract_edge(cycle_graph(4), 0, 1), complete_graph(3))

    def test_non_edge_rejected(self):
        with pytest.raises(ValueError):
            delete_edge(cycle_graph(4), 0, 2)
        with pytest.raises(ValueError):
            contract_edge(cycle_graph(4), 0, 2)
