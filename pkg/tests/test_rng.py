"""Seed mixing and random graph generation."""

from __future__ import annotations

import math

import pytest

from cliquefactor.graphs import Graph, complete
from cliquefactor.rng import boost_min_degree, gnp, mix, stream


class TestMix:
    def test_64_bit_range(self):
        for args in [(0,), (1, 2, 3), (-5,), (2**80, 7)]:
            out = mix(*args)
            assert 0 <= out < 2**64

    def test_order_sensitive(self):
        assert mix(1, 2) != mix(2, 1)

    def test_reproducible(self):
        assert mix(42, 3, 17) == mix(42, 3, 17)

    def test_distinct_trials_distinct_seeds(self):
        seeds = {mix(7, 0, t) for t in range(1000)}
        assert len(seeds) == 1000

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            mix()


class TestStream:
    def test_same_seed_same_draws(self):
        a = stream(123).random(10)
        b = stream(123).random(10)
        assert (a == b).all()

    def test_different_seed_differs(self):
        assert (stream(1).random(10) != stream(2).random(10)).any()


class TestGnp:
    def test_p_zero_edgeless(self):
        g = gnp(50, 0.0, seed=1)
        assert g.edge_count == 0
        assert g.n == 50

    def test_p_one_complete(self):
        assert gnp(12, 1.0, seed=1) == complete(12)

    def test_seed_determinism(self):
        assert gnp(40, 0.3, seed=5) == gnp(40, 0.3, seed=5)
        assert gnp(40, 0.3, seed=5) != gnp(40, 0.3, seed=6)

    def test_probability_validated(self):
        with pytest.raises(ValueError):
            gnp(10, 1.5, seed=0)
        with pytest.raises(ValueError):
            gnp(10, -0.1, seed=0)

    def test_tiny_graphs(self):
        assert gnp(0, 0.5, seed=0).n == 0
        assert gnp(1, 0.5, seed=0).edge_count == 0

    def test_edge_count_concentration(self):
        # Binomial(C(100,2), 1/2) stays within 3 standard deviations of
        # its mean in the vast majority of draws.
        pairs = math.comb(100, 2)
        window = 3.0 * math.sqrt(pairs / 4.0)
        hits = sum(
            abs(gnp(100, 0.5, seed=s).edge_count - pairs / 2.0) <= window
            for s in range(1000)
        )
        assert hits >= 990


class TestBoostMinDegree:
    def test_reaches_target(self):
        g = gnp(12, 0.2, seed=3)
        boosted = boost_min_degree(g, 8, seed=3)
        assert boosted.min_degree() >= 8

    def test_preserves_existing_edges(self):
        g = gnp(12, 0.2, seed=3)
        boosted = boost_min_degree(g, 8, seed=3)
        for u, v in g.edges():
            assert boosted.has_edge(u, v)

    def test_already_satisfied_returns_same(self):
        g = complete(6)
        assert boost_min_degree(g, 3, seed=0) is g

    def test_deterministic(self):
        g = gnp(15, 0.1, seed=7)
        assert boost_min_degree(g, 9, seed=1) == boost_min_degree(g, 9, seed=1)

    def test_impossible_target_rejected(self):
        with pytest.raises(ValueError):
            boost_min_degree(Graph(5, []), 5, seed=0)
