"""Flexibility template generation, verification, and avoiding matchings."""

from __future__ import annotations

import math
from itertools import combinations

import pytest

from cliquefactor import templates
from cliquefactor.templates import Template, generate_template, matching_avoiding


class TestLeanProfile:
    @pytest.mark.parametrize("m", range(1, 7))
    def test_shape_and_verification(self, m):
        t = generate_template(m)
        assert t.verification == "exhaustive"
        assert t.subsets_checked == math.comb(2 * m, m)
        assert len(t.adjacency) == 3 * m
        assert t.edge_count == m * m + 3 * m
        assert t.max_degree == m + 1
        assert t.max_degree <= 40

    def test_deterministic_across_seeds(self):
        assert generate_template(4, seed=0) == generate_template(4, seed=99)

    def test_hub_and_single_structure(self):
        t = generate_template(3)
        for left in range(3):
            assert t.adjacency[left] == tuple(sorted({0, 1, 2} | {3 + left}))
        for offset in range(6):
            assert t.adjacency[3 + offset] == (6 + offset,)

    def test_blocks(self):
        t = generate_template(2)
        assert t.deletable == (0, 1, 2, 3)
        assert t.protected == (4, 5, 6, 7)

    def test_rejects_bad_m(self):
        with pytest.raises(ValueError, match="positive"):
            generate_template(0)


class TestUniformProfile:
    def test_small_m_is_complete(self):
        t = generate_template(1, seed=5, profile="uniform")
        assert all(row == (0, 1, 2, 3) for row in t.adjacency)
        assert t.profile == "uniform"

    def test_verifies_and_caps_degree(self):
        t = generate_template(3, seed=11, profile="uniform")
        assert t.verification == "exhaustive"
        assert t.max_degree <= 40

    def test_seed_determinism(self):
        a = generate_template(2, seed=7, profile="uniform")
        b = generate_template(2, seed=7, profile="uniform")
        assert a == b

    def test_unknown_profile(self):
        with pytest.raises(ValueError, match="profile"):
            generate_template(2, profile="dense")


class TestSampledVerification:
    def test_large_m_switches_to_sampling(self, monkeypatch):
        monkeypatch.setattr(templates, "_SAMPLE_CAP", 50)
        t = generate_template(9, seed=3)
        assert t.verification == "sampled"
        assert t.subsets_checked == 50

    def test_sample_count_tracks_subset_count(self, monkeypatch):
        monkeypatch.setattr(templates, "_EXHAUSTIVE_LIMIT", 1)
        t = generate_template(2, seed=3)
        assert t.verification == "sampled"
        assert t.subsets_checked == 10 * math.comb(4, 2)

    def test_forced_sampling_mode(self):
        t = generate_template(2, seed=3, verify="sampled")
        assert t.verification == "sampled"
        assert t.subsets_checked == 10 * math.comb(4, 2)

    def test_forced_exhaustive_mode(self):
        t = generate_template(2, seed=3, verify="exhaustive")
        assert t.verification == "exhaustive"
        assert t.subsets_checked == math.comb(4, 2)

    def test_unknown_verify_mode(self):
        with pytest.raises(ValueError, match="verification mode"):
            generate_template(2, verify="thorough")


class TestMatchingAvoiding:
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_every_deletion_has_matching(self, m):
        t = generate_template(m)
        right_sets = [set(row) for row in t.adjacency]
        for removed in combinations(range(2 * m), m):
            pairs = matching_avoiding(t, set(removed))
            assert len(pairs) == 3 * m
            lefts = [i for i, _ in pairs]
            rights = [j for _, j in pairs]
            assert sorted(lefts) == list(range(3 * m))
            assert len(set(rights)) == 3 * m
            assert not (set(rights) & set(removed))
            for i, j in pairs:
                assert j in right_sets[i]

    def test_worst_case_deletion_uses_private_rights(self):
        t = generate_template(4)
        pairs = dict(matching_avoiding(t, set(range(4))))
        for hub in range(4):
            assert pairs[hub] == 4 + hub

    def test_validates_removed_set(self):
        t = generate_template(2)
        with pytest.raises(ValueError, match="m=2"):
            matching_avoiding(t, {0})
        with pytest.raises(ValueError, match="deletable"):
            matching_avoiding(t, {0, 7})

    def test_verification_gap_reported(self):
        broken = Template(
            m=1,
            adjacency=((0,), (2,), (3,)),
            profile="lean",
            verification="sampled",
            subsets_checked=0,
        )
        with pytest.raises(RuntimeError, match="verification gap"):
            matching_avoiding(broken, {0})
