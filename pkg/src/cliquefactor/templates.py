"""Flexibility templates: bipartite graphs on 3m lefts and 4m rights whose
defining property is that deleting any m rights from the first block still
leaves a perfect matching on the lefts.

Rights 0..2m-1 form the deletable block, rights 2m..4m-1 the protected
block. The lean profile is deterministic: lefts 0..m-1 are hubs adjacent to
all of rights 0..m-1 plus one private right m+l each, and the remaining 2m
lefts pair off with the protected block. A Hall argument gives the deletion
property outright, and verification confirms it. The uniform profile draws
neighborhoods at random and keeps resampling until verification passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .matching import maximum_bipartite_matching

__all__ = ["Template", "generate_template", "matching_avoiding"]

_UNIFORM_DEGREE = 20
_RIGHT_DEGREE_CAP = 40
_RETRY_CAP = 1000
_EXHAUSTIVE_LIMIT = 8
_SAMPLE_CAP = 100_000


@dataclass(frozen=True)
class Template:
    """Verified flexibility template.

    adjacency[i] lists left i's rights in increasing order. verification
    records how the deletion property was checked ("exhaustive" covers
    every m-subset of the deletable block, "sampled" a random sample) and
    subsets_checked how many subsets that was.
    """

    m: int
    adjacency: tuple[tuple[int, ...], ...]
    profile: str
    verification: str
    subsets_checked: int

    @property
    def n_left(self) -> int:
        return 3 * self.m

    @property
    def n_right(self) -> int:
        return 4 * self.m

    @property
    def deletable(self) -> tuple[int, ...]:
        """Rights that the deletion property quantifies over."""
        return tuple(range(2 * self.m))

    @property
    def protected(self) -> tuple[int, ...]:
        return tuple(range(2 * self.m, 4 * self.m))

    @property
    def edge_count(self) -> int:
        return sum(len(row) for row in self.adjacency)

    @property
    def max_degree(self) -> int:
        right_deg = [0] * self.n_right
        for row in self.adjacency:
            for j in row:
                right_deg[j] += 1
        left_max = max(len(row) for row in self.adjacency)
        return max(left_max, max(right_deg))


def _lean_adjacency(m: int) -> tuple[tuple[int, ...], ...]:
    rows: list[tuple[int, ...]] = []
    for left in range(m):
        rows.append(tuple(sorted(set(range(m)) | {m + left})))
    for t in range(2 * m):
        rows.append((2 * m + t,))
    return tuple(rows)


def _uniform_adjacency(m: int, rng: np.random.Generator) -> tuple[tuple[int, ...], ...] | None:
    n_right = 4 * m
    degree = min(_UNIFORM_DEGREE, n_right)
    rows = tuple(
        tuple(sorted(int(j) for j in rng.choice(n_right, size=degree, replace=False)))
        for _ in range(3 * m)
    )
    right_deg = [0] * n_right
    for row in rows:
        for j in row:
            right_deg[j] += 1
    if max(right_deg) > _RIGHT_DEGREE_CAP:
        return None
    return rows


def _deletion_survives(
    adjacency: tuple[tuple[int, ...], ...], m: int, removed: frozenset[int]
) -> bool:
    adj = [[j for j in row if j not in removed] for row in adjacency]
    result = maximum_bipartite_matching(3 * m, 4 * m, adj)
    return result.size == 3 * m


def _verify(
    adjacency: tuple[tuple[int, ...], ...],
    m: int,
    rng: np.random.Generator,
    verify: str = "auto",
) -> tuple[bool, str, int]:
    total = math.comb(2 * m, m)
    if verify not in ("auto", "exhaustive", "sampled"):
        raise ValueError(f"unknown verification mode {verify!r}")
    if verify == "auto":
        verify = "exhaustive" if m <= _EXHAUSTIVE_LIMIT else "sampled"
    if verify == "exhaustive":
        checked = 0
        for combo in combinations(range(2 * m), m):
            checked += 1
            if not _deletion_survives(adjacency, m, frozenset(combo)):
                return False, "exhaustive", checked
        return True, "exhaustive", checked
    samples = min(10 * total, _SAMPLE_CAP)
    for i in range(samples):
        combo = rng.choice(2 * m, size=m, replace=False)
        if not _deletion_survives(adjacency, m, frozenset(int(j) for j in combo)):
            return False, "sampled", i + 1
    return True, "sampled", samples


def generate_template(
    m: int, seed: int = 0, profile: str = "lean", verify: str = "auto"
) -> Template:
    """Build and verify a flexibility template on 3m lefts and 4m rights.

    The lean profile is deterministic and always verifies. The uniform
    profile resamples random neighborhoods until one verifies, up to a
    retry cap, and raises with attempt diagnostics when the cap is hit.
    verify picks the checking mode: auto runs the full subset sweep up to
    m = 8 and samples beyond, the other values force one or the other.
    """
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    rng = np.random.default_rng(seed)
    if profile == "lean":
        adjacency = _lean_adjacency(m)
        ok, mode, checked = _verify(adjacency, m, rng, verify)
        if not ok:
            raise AssertionError("deterministic profile failed verification")
        return Template(m, adjacency, "lean", mode, checked)
    if profile != "uniform":
        raise ValueError(f"unknown profile {profile!r}")
    degree_rejects = 0
    verify_rejects = 0
    for _ in range(_RETRY_CAP):
        adjacency = _uniform_adjacency(m, rng)
        if adjacency is None:
            degree_rejects += 1
            continue
        ok, mode, checked = _verify(adjacency, m, rng, verify)
        if ok:
            return Template(m, adjacency, "uniform", mode, checked)
        verify_rejects += 1
    raise RuntimeError(
        f"no uniform template for m={m} in {_RETRY_CAP} attempts "
        f"({degree_rejects} degree rejections, {verify_rejects} verification failures)"
    )


def matching_avoiding(
    template: Template, removed: frozenset[int] | set[int]
) -> tuple[tuple[int, int], ...]:
    """Perfect matching on the lefts that avoids the removed rights.

    removed must be an m-subset of the deletable block. For a verified
    template a matching always exists; a missing one means the sampled
    verification missed this subset, reported as a verification gap.
    """
    removed = frozenset(removed)
    if len(removed) != template.m:
        raise ValueError(
            f"need exactly m={template.m} removed rights, got {len(removed)}"
        )
    if not removed <= set(template.deletable):
        raise ValueError("removed rights must lie in the deletable block")
    adj = [[j for j in row if j not in removed] for row in template.adjacency]
    result = maximum_bipartite_matching(template.n_left, template.n_right, adj)
    if result.size != template.n_left:
        raise RuntimeError(
            f"verification gap: no matching avoiding {sorted(removed)}"
        )
    return tuple(
        (left, right)
        for left, right in enumerate(result.pair_left)
        if right != -1
    )
