"""Chain-embedding reachability counts and the vertex-set partition."""

from __future__ import annotations

from itertools import combinations

import pytest

from cliquefactor.constructions import HVector, h_vectors, lower_bound_graph
from cliquefactor.graphs import Graph, complete, kminus
from cliquefactor.reachability import reachability_count, reachability_partition

from .oracles import count_embeddings_brute


def disjoint_cliques(sizes: list[int]) -> Graph:
    edges: list[tuple[int, int]] = []
    offset = 0
    for s in sizes:
        edges.extend((offset + a, offset + b) for a, b in combinations(range(s), 2))
        offset += s
    return Graph(offset, sorted(edges))


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, sorted(tuple(sorted(e)) for e in outer + spokes + inner))


class TestExactCount:
    def test_single_segment_on_complete_host(self):
        # One 4-vertex carrier segment with endpoints pinned in a complete
        # host: 8 * 7 free placements per orientation.
        v = HVector((kminus(3),))
        rc = reachability_count(complete(10), 0, 1, v)
        assert rc.value == 112.0
        assert rc.exact
        assert rc.normalizer == pytest.approx(10.0 ** (3 * 1 - 1))

    def test_disconnected_host_is_zero(self):
        v = HVector((kminus(3),))
        rc = reachability_count(disjoint_cliques([5, 5]), 0, 7, v)
        assert rc.value == 0.0

    def test_matches_brute_force_with_anchors(self):
        v = HVector((kminus(2),))
        host = petersen()
        from cliquefactor.paths import build_h_path

        path = build_h_path(v)
        a, b = path.endpoints
        for x, y in [(0, 7), (0, 2), (1, 4)]:
            rc = reachability_count(host, x, y, v)
            brute = count_embeddings_brute(
                path.graph, host, {a: x, b: y}
            ) + count_embeddings_brute(path.graph, host, {a: y, b: x})
            assert rc.value == brute

    def test_two_segment_chain_count(self):
        # Two glued 3-vertex segments form a 5-path; its endpoint-pinned
        # embeddings in a complete host are falling factorials.
        v = HVector((kminus(2), kminus(2)))
        rc = reachability_count(complete(8), 0, 1, v)
        assert rc.value == 2 * 6 * 5 * 4

    def test_endpoint_validation(self):
        v = HVector((kminus(2),))
        with pytest.raises(ValueError, match="distinct"):
            reachability_count(complete(5), 2, 2, v)
        with pytest.raises(ValueError, match="range"):
            reachability_count(complete(5), 0, 5, v)

    def test_exact_cap_refusal(self):
        big = next(iter(h_vectors(6, 4)))
        with pytest.raises(ValueError, match="sample"):
            reachability_count(complete(30), 0, 1, big)


class TestSampledCount:
    def test_unbiased_on_small_host(self):
        v = HVector((kminus(3),))
        host = Graph(
            9,
            sorted(
                set(combinations(range(9), 2))
                - {(0, 3), (1, 4), (2, 5), (3, 6), (4, 7)}
            ),
        )
        exact = reachability_count(host, 0, 1, v).value
        est = reachability_count(host, 0, 1, v, mode="sample", trials=4000, seed=7)
        assert not est.exact
        assert est.stderr is not None
        tolerance = max(6 * est.stderr, 0.02 * exact)
        assert abs(est.value - exact) <= tolerance

    def test_zero_variance_when_forced(self):
        # Pinned 3-path in the Petersen graph has a unique middle choice,
        # so every trial returns the same weight.
        v = HVector((kminus(2),))
        est = reachability_count(
            petersen(), 0, 7, v, mode="sample", trials=50, seed=1
        )
        assert est.value == 2.0
        assert est.stderr == 0.0

    def test_deterministic_under_seed(self):
        v = next(iter(h_vectors(3, 2)))
        host = lower_bound_graph(30, 3, 2, 0.1).graph
        a = reachability_count(host, 0, 29, v, mode="sample", trials=100, seed=5)
        b = reachability_count(host, 0, 29, v, mode="sample", trials=100, seed=5)
        assert a.value == b.value
        assert a.stderr == b.stderr

    def test_positive_through_lower_bound_host(self):
        v = next(iter(h_vectors(3, 2)))
        host = lower_bound_graph(30, 3, 2, 0.1).graph
        est = reachability_count(host, 0, 29, v, mode="sample", trials=300, seed=5)
        assert est.value > 0

    def test_mode_and_trials_validation(self):
        v = HVector((kminus(2),))
        with pytest.raises(ValueError, match="mode"):
            reachability_count(complete(5), 0, 1, v, mode="guess")
        with pytest.raises(ValueError, match="trial"):
            reachability_count(complete(5), 0, 1, v, mode="sample", trials=0)


class TestPartition:
    def test_complete_host_single_part(self):
        part = reachability_partition(complete(30), 3, 2, seed=1)
        assert len(part.parts) == 1
        assert part.parts[0] == tuple(range(30))
        assert part.leftover == ()
        assert not part.heuristic

    def test_disjoint_cliques_two_parts(self):
        part = reachability_partition(disjoint_cliques([15, 15]), 3, 2, seed=1)
        assert len(part.parts) == 2
        assert part.parts[0] == tuple(range(15))
        assert part.parts[1] == tuple(range(15, 30))
        assert not part.heuristic

    def test_lower_bound_host_single_part(self):
        host = lower_bound_graph(60, 6, 4, 0.1).graph
        part = reachability_partition(host, 6, 4, seed=2)
        assert len(part.parts) == 1
        assert part.leftover == ()

    def test_case_restriction(self):
        with pytest.raises(ValueError, match="case"):
            reachability_partition(complete(12), 4, 2, seed=0)

    def test_cap_enforced(self):
        with pytest.raises(ValueError, match="cap"):
            reachability_partition(complete(30), 3, 2, cap=20)

    def test_budget_exhaustion_flags_heuristic(self):
        part = reachability_partition(
            complete(30), 3, 2, seed=1, sample_budget=300
        )
        assert part.heuristic
        assert part.leftover
        assert any("budget" in note for note in part.notes)

    def test_isolated_vertices_fall_to_leftover(self):
        # A clique plus isolated vertices: the isolates fail the internal
        # degree floor everywhere.
        g = disjoint_cliques([20])
        g = Graph(24, list(g.edges()))
        part = reachability_partition(g, 3, 2, seed=3)
        covered = set()
        for p in part.parts:
            covered |= set(p)
        assert set(range(20)) <= covered
        assert set(range(20, 24)) <= set(part.leftover)
