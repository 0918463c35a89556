"""Staged perturbed-tiling pipeline: successes, failure stages, layers."""

from __future__ import annotations

import math

import pytest

from cliquefactor.constructions import lower_bound_graph
from cliquefactor.graphs import Graph, complete, union
from cliquefactor.pipeline import (
    PipelineParams,
    perturbed_pipeline,
    planned_structure_size,
)
from cliquefactor.rng import gnp, mix

STAGE_IDS = {
    "partition",
    "repair",
    "flexible-set",
    "absorber",
    "almost-tiling",
    "completion",
    "peel",
    "absorb",
}

PARAMS = PipelineParams(eta=0.05)


def two_cliques(a: int, b: int, cross=()) -> Graph:
    edges = [(u, v) for u in range(a) for v in range(u + 1, a)]
    edges += [(a + u, a + v) for u in range(b) for v in range(u + 1, b)]
    edges += list(cross)
    return Graph(a + b, edges)


def check_perfect(result) -> None:
    assert result.status == "tiled"
    tiling = result.tiling
    tiling.validate()
    assert tiling.covered == tuple(range(tiling.host.n))


class TestValidation:
    def test_divisibility_required(self):
        with pytest.raises(ValueError, match="divide"):
            perturbed_pipeline(complete(10), 0.5, 3, 3)

    def test_probability_range(self):
        with pytest.raises(ValueError, match="probability"):
            perturbed_pipeline(complete(9), 1.5, 3, 3)

    def test_parameter_order(self):
        with pytest.raises(ValueError):
            perturbed_pipeline(complete(9), 0.5, 3, 7)


class TestPlannedSize:
    def test_frozen_values(self):
        assert planned_structure_size(3, 3, 3) == 192
        assert planned_structure_size(4, 3, 3) == 292
        assert planned_structure_size(3, 3, 2) == 516

    def test_size_is_m_mod_r(self):
        for r, k in [(3, 3), (3, 2), (4, 2), (4, 4)]:
            for m in range(1, 8):
                assert planned_structure_size(m, r, k) % r == m % r


class TestCompleteHost:
    def test_no_random_edges_needed(self):
        result = perturbed_pipeline(complete(210), 0.0, 3, 3, seed=1, params=PARAMS)
        check_perfect(result)
        assert result.leftover == 0
        assert result.structures == (192,)

    def test_with_random_edges(self):
        result = perturbed_pipeline(complete(210), 0.5, 3, 3, seed=2, params=PARAMS)
        check_perfect(result)

    def test_default_params_clamp_flexible_set(self):
        # The default eta is tiny, so the flexible set is grown to the
        # smallest viable size instead of being sampled.
        result = perturbed_pipeline(complete(210), 0.0, 3, 3, seed=3)
        check_perfect(result)

    def test_stage_sequence_on_success(self):
        result = perturbed_pipeline(complete(210), 0.0, 3, 3, seed=1, params=PARAMS)
        stages = [entry["stage"] for entry in result.report]
        assert stages == [
            "layers",
            "flexible-set",
            "absorber",
            "almost-tiling",
            "completion",
            "peel",
            "absorb",
            "validate",
        ]
        assert all(entry["ok"] for entry in result.report)

    def test_deterministic(self):
        a = perturbed_pipeline(complete(210), 0.3, 3, 3, seed=5, params=PARAMS)
        b = perturbed_pipeline(complete(210), 0.3, 3, 3, seed=5, params=PARAMS)
        assert a.status == b.status
        assert a.tiling.parts == b.tiling.parts


class TestFailureStages:
    def test_extremal_host_fails_honestly(self):
        # The extremal graph cannot be perfectly tiled without random
        # edges, so some stage must give out.
        lb = lower_bound_graph(210, 3, 3, 0.05)
        result = perturbed_pipeline(
            lb.graph,
            0.0,
            3,
            3,
            seed=4,
            params=PipelineParams(eta=0.05, assembly_restarts=1, assembly_budget=20_000),
        )
        assert result.status == "failed"
        assert result.stage == "absorber"
        assert result.tiling is None

    def test_small_host_fails_at_flexible_set(self):
        det = gnp(90, 0.5, seed=7)
        result = perturbed_pipeline(det, 0.1, 3, 2, seed=5, params=PARAMS)
        assert result.status == "failed"
        assert result.stage == "flexible-set"
        layer_entry = result.report[0]
        assert layer_entry["stage"] == "layers"
        assert layer_entry["count"] == 10

    def test_failure_stage_always_known(self):
        for s in range(3):
            det = gnp(210, 0.55, seed=40 + s)
            result = perturbed_pipeline(det, 0.05, 3, 3, seed=s, params=PARAMS)
            if result.status == "failed":
                assert result.stage in STAGE_IDS


class TestCaseThreePaths:
    def test_partition_splits_disjoint_cliques(self):
        result = perturbed_pipeline(
            two_cliques(105, 105), 0.3, 3, 2, seed=1, params=PARAMS
        )
        assert result.status == "failed"
        assert result.stage == "flexible-set"
        by_stage = {entry["stage"]: entry for entry in result.report}
        assert by_stage["partition"]["parts"] == 2
        assert by_stage["repair"]["cliques"] == 0

    def test_repair_straddles_imbalanced_parts(self):
        # One crossing edge cannot carry any chain segment, so the parts
        # stay separate, and it is exactly enough for one straddle clique
        # fixing the 104 = 2 (mod 3) imbalance.
        host = two_cliques(104, 106, [(0, 104)])
        result = perturbed_pipeline(host, 0.5, 3, 2, seed=2, params=PARAMS)
        assert result.status == "failed"
        by_stage = {entry["stage"]: entry for entry in result.report}
        assert by_stage["partition"]["parts"] == 2
        assert by_stage["repair"]["ok"]
        assert by_stage["repair"]["cliques"] == 1

    def test_repair_fails_without_crossing_edges(self):
        result = perturbed_pipeline(
            two_cliques(104, 106), 0.5, 3, 2, seed=2, params=PARAMS
        )
        assert result.status == "failed"
        assert result.stage == "repair"

    def test_case3_success_above_partition_cap(self):
        det = gnp(540, 0.9, seed=301)
        result = perturbed_pipeline(det, 0.3, 3, 2, seed=1, params=PARAMS)
        check_perfect(result)
        assert result.structures == (516,)


class TestSmokeMix:
    def test_seeded_run_mixes_outcomes(self):
        outcomes = {}
        for s in range(6):
            det = gnp(210, 0.9, seed=900 + s)
            result = perturbed_pipeline(det, 0.08, 3, 3, seed=s, params=PARAMS)
            outcomes[s] = result
        statuses = {s: r.status for s, r in outcomes.items()}
        assert statuses == {
            0: "failed",
            1: "tiled",
            2: "failed",
            3: "tiled",
            4: "failed",
            5: "tiled",
        }
        for result in outcomes.values():
            if result.status == "tiled":
                check_perfect(result)
            else:
                assert result.stage in STAGE_IDS


class TestLayeredRandomness:
    def test_union_of_layers_matches_target_probability(self):
        # Union of the four layer draws should be indistinguishable from a
        # single draw at p for any fixed pair.
        n, p, runs = 10, 0.3, 10_000
        p_layer = 1.0 - (1.0 - p) ** 0.25
        pairs = [(a, b) for a in range(n) for b in range(a + 1, n)][:20]
        hits = {pair: 0 for pair in pairs}
        for seed in range(runs):
            layers = [gnp(n, p_layer, mix(seed, 101, i)) for i in range(4)]
            g = union(union(layers[0], layers[1]), union(layers[2], layers[3]))
            for pair in pairs:
                if g.has_edge(*pair):
                    hits[pair] += 1
        sigma = math.sqrt(p * (1 - p) / runs)
        for pair, count in hits.items():
            assert abs(count / runs - p) <= 3 * sigma, (pair, count / runs)