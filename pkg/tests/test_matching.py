"""Bipartite matching against a single-path augmentation oracle."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliquefactor.matching import has_perfect_matching, maximum_bipartite_matching

from .oracles import max_matching_brute


@st.composite
def bipartite(draw, max_side=6):
    n_left = draw(st.integers(0, max_side))
    n_right = draw(st.integers(0, max_side))
    adj = []
    for _ in range(n_left):
        if n_right:
            row = sorted(draw(st.sets(st.integers(0, n_right - 1))))
        else:
            row = []
        adj.append(row)
    return n_left, n_right, adj


def test_complete_bipartite():
    result = maximum_bipartite_matching(3, 3, [[0, 1, 2]] * 3)
    assert result.size == 3
    assert sorted(result.pair_left) == [0, 1, 2]


def test_shared_single_right():
    result = maximum_bipartite_matching(3, 1, [[0], [0], [0]])
    assert result.size == 1


def test_empty_sides():
    assert maximum_bipartite_matching(0, 0, []).size == 0


def test_adjacency_row_count_checked():
    with pytest.raises(ValueError):
        maximum_bipartite_matching(2, 2, [[0]])


def test_has_perfect_matching():
    assert has_perfect_matching(2, 2, [[0, 1], [0]])
    assert not has_perfect_matching(2, 2, [[0], [0]])
    assert not has_perfect_matching(3, 2, [[0, 1], [0, 1], [0, 1]])


@given(bipartite())
def test_size_matches_oracle(bip):
    n_left, n_right, adj = bip
    got = maximum_bipartite_matching(n_left, n_right, adj)
    assert got.size == max_matching_brute(n_left, n_right, adj)


@given(bipartite())
def test_returned_matching_is_consistent(bip):
    n_left, n_right, adj = bip
    result = maximum_bipartite_matching(n_left, n_right, adj)
    seen = 0
    for u, v in enumerate(result.pair_left):
        if v == -1:
            continue
        assert v in adj[u]
        assert result.pair_right[v] == u
        seen += 1
    assert seen == result.size
    for v, u in enumerate(result.pair_right):
        if u != -1:
            assert result.pair_left[u] == v


@given(bipartite())
def test_determinism(bip):
    n_left, n_right, adj = bip
    first = maximum_bipartite_matching(n_left, n_right, adj)
    second = maximum_bipartite_matching(n_left, n_right, adj)
    assert first == second
