"""Graph core: constructors, decorated graphs, embedding counts, cliques."""

from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cliquefactor.graphs import (
    DecoratedGraph,
    Embedding,
    Graph,
    blow_up,
    complement,
    complement_within_kminus,
    complete,
    complete_multipartite,
    count_labelled_embeddings,
    empty,
    enumerate_cliques,
    graph_from_text,
    graph_to_text,
    kminus,
    union,
)

from .oracles import count_embeddings_brute


@st.composite
def graphs(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    edges = draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    return Graph(n, edges)


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    return Graph(10, [tuple(sorted(e)) for e in outer + inner + spokes])


class TestConstructors:
    def test_complete(self):
        g = complete(5)
        assert g.n == 5
        assert g.edge_count == 10
        assert g.min_degree() == 4

    def test_empty(self):
        g = empty(4)
        assert g.edge_count == 0
        assert g.min_degree() == 0

    def test_complete_multipartite_layout(self):
        # Parts are consecutive: first part 0..3, second part 4..6.
        g = complete_multipartite([4, 3])
        assert g.n == 7
        assert g.edge_count == 12
        assert not g.has_edge(0, 1)
        assert g.has_edge(0, 4)
        assert not g.has_edge(4, 5)

    def test_single_part_is_edgeless(self):
        assert complete_multipartite([5]) == empty(5)

    def test_blow_up_matches_multipartite(self):
        assert blow_up(complete(2), [2, 3]) == complete_multipartite([2, 3])
        assert blow_up(complete(3), [1, 1, 1]) == complete(3)

    def test_blow_up_keeps_non_edges(self):
        path = Graph(3, [(0, 1), (1, 2)])
        g = blow_up(path, [2, 1, 2])
        assert g.has_edge(0, 2) and g.has_edge(2, 3)
        assert not g.has_edge(0, 3)
        assert not g.has_edge(0, 1)

    def test_union_overlay(self):
        g = union(Graph(4, [(0, 1)]), Graph(4, [(1, 2), (0, 1)]))
        assert g.edge_count == 2
        assert g.has_edge(0, 1) and g.has_edge(1, 2)

    def test_union_size_mismatch(self):
        with pytest.raises(ValueError):
            union(complete(3), complete(4))

    def test_induced(self):
        g = complete(5).induced([0, 2, 4])
        assert g == complete(3)

    def test_edges_lexicographic(self):
        g = Graph(4, [(2, 3), (0, 3), (0, 1)])
        assert list(g.edges()) == [(0, 1), (0, 3), (2, 3)]

    def test_rejects_bad_edges(self):
        with pytest.raises(ValueError):
            Graph(3, [(0, 3)])
        with pytest.raises(ValueError):
            Graph(3, [(1, 1)])

    @given(graphs())
    def test_complement_involution(self, g):
        assert complement(complement(g)) == g

    @given(graphs())
    def test_complement_edge_count(self, g):
        assert g.edge_count + complement(g).edge_count == g.n * (g.n - 1) // 2


class TestDecorated:
    def test_kminus_shape(self):
        f = kminus(4)
        assert f.graph.n == 5
        assert f.graph.edge_count == 9
        assert f.distinguished == (0, 4)
        assert not f.distinguished_adjacent
        assert f.is_kminus_carrier()

    def test_kminus_custom_pair(self):
        f = kminus(3, (1, 2))
        assert not f.graph.has_edge(1, 2)
        assert f.graph.edge_count == 5

    def test_distinguished_must_differ(self):
        with pytest.raises(ValueError):
            DecoratedGraph(complete(3), (1, 1))
        with pytest.raises(ValueError):
            DecoratedGraph(complete(3), (0, 3))

    def test_complement_rejects_adjacent_pair(self):
        with pytest.raises(ValueError):
            complement_within_kminus(DecoratedGraph(complete(3), (0, 1)))

    @given(st.data())
    def test_complement_involution_within_carrier(self, data):
        r = data.draw(st.integers(2, 5))
        full = kminus(r)
        keep = data.draw(st.sets(st.sampled_from(list(full.graph.edges()))))
        f = DecoratedGraph(Graph(r + 1, keep), (0, r))
        twice = complement_within_kminus(complement_within_kminus(f))
        assert twice.graph == f.graph
        assert twice.distinguished == f.distinguished

    def test_complement_partitions_carrier_edges(self):
        f = DecoratedGraph(Graph(4, [(0, 1), (1, 2)]), (0, 3))
        comp = complement_within_kminus(f)
        total = set(f.graph.edges()) | set(comp.graph.edges())
        assert total == set(kminus(3).graph.edges())
        assert not set(f.graph.edges()) & set(comp.graph.edges())


class TestCliques:
    def test_complete_graph_cliques(self):
        cliques = enumerate_cliques(complete(5), 3)
        assert len(cliques) == 10
        assert cliques == sorted(cliques)

    def test_petersen_triangle_free(self):
        assert enumerate_cliques(petersen(), 3) == []

    def test_r_larger_than_n(self):
        assert enumerate_cliques(complete(3), 4) == []

    def test_r_zero_rejected(self):
        with pytest.raises(ValueError):
            enumerate_cliques(complete(3), 0)

    @given(graphs(max_n=6), st.integers(2, 4))
    def test_cliques_are_cliques(self, g, r):
        for vs in enumerate_cliques(g, r):
            assert g.is_clique(vs)

    @given(graphs(max_n=6), st.integers(2, 4))
    def test_clique_enumeration_complete(self, g, r):
        found = set(enumerate_cliques(g, r))
        for combo in itertools.combinations(range(g.n), r):
            if all(g.has_edge(u, v) for u, v in itertools.combinations(combo, 2)):
                assert combo in found


class TestEmbeddingCounts:
    def test_triangle_into_k4(self):
        result = count_labelled_embeddings(complete(3), complete(4))
        assert result.count == 24
        assert not result.truncated

    def test_kminus_into_k10(self):
        result = count_labelled_embeddings(kminus(3).graph, complete(10))
        assert result.count == 5040

    def test_anchored_kminus_into_k10(self):
        # Both distinguished endpoints pinned: the two middle vertices range
        # over ordered pairs of the remaining eight host vertices.
        result = count_labelled_embeddings(
            kminus(3).graph, complete(10), anchors={0: 0, 3: 1}
        )
        assert result.count == 56

    def test_anchored_edge_violation_is_zero(self):
        host = Graph(4, [(0, 1), (1, 2), (2, 3)])
        result = count_labelled_embeddings(complete(2), host, anchors={0: 0, 1: 2})
        assert result.count == 0
        assert not result.truncated

    def test_budget_truncation(self):
        result = count_labelled_embeddings(complete(2), complete(5), budget=7)
        assert result.count == 7
        assert result.truncated

    def test_exact_when_budget_not_reached(self):
        result = count_labelled_embeddings(complete(2), complete(5), budget=100)
        assert result.count == 20
        assert not result.truncated

    def test_isolated_tail(self):
        pattern = Graph(4, [(0, 1)])
        result = count_labelled_embeddings(pattern, complete(5))
        assert result.count == count_embeddings_brute(pattern, complete(5)) == 120

    def test_pattern_larger_than_host(self):
        assert count_labelled_embeddings(complete(4), complete(3)).count == 0

    def test_anchor_validation(self):
        with pytest.raises(ValueError):
            count_labelled_embeddings(complete(2), complete(3), anchors={0: 0, 1: 0})
        with pytest.raises(ValueError):
            count_labelled_embeddings(complete(2), complete(3), anchors={5: 0})

    @settings(deadline=None, max_examples=60)
    @given(st.data())
    def test_matches_permutation_oracle(self, data):
        host = data.draw(graphs(max_n=6))
        pattern = data.draw(graphs(max_n=4))
        anchors = {}
        if data.draw(st.booleans()) and pattern.n >= 1:
            pv = data.draw(st.integers(0, pattern.n - 1))
            hv = data.draw(st.integers(0, host.n - 1))
            anchors = {pv: hv}
        got = count_labelled_embeddings(pattern, host, anchors=anchors or None)
        want = count_embeddings_brute(pattern, host, anchors)
        assert got.count == want
        assert not got.truncated


class TestEmbeddingType:
    def test_validate(self):
        emb = Embedding(complete(3), (0, 1, 2))
        assert emb.validate(complete(4))
        assert not emb.validate(Graph(4, [(0, 1)]))

    def test_injective_required(self):
        with pytest.raises(ValueError):
            Embedding(complete(3), (0, 1, 1))

    def test_length_checked(self):
        with pytest.raises(ValueError):
            Embedding(complete(3), (0, 1))


class TestTextFormat:
    def test_roundtrip_example(self):
        g = Graph(4, [(0, 1), (2, 3)])
        assert graph_from_text(graph_to_text(g)) == g

    def test_comments_ignored(self):
        text = "# a comment\n3\n0 1\n# another\n1 2\n"
        g = graph_from_text(text)
        assert g == Graph(3, [(0, 1), (1, 2)])

    @given(graphs(max_n=8))
    def test_roundtrip(self, g):
        assert graph_from_text(graph_to_text(g, comments=["meta"])) == g
