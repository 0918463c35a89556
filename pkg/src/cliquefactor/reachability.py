"""Reachability between vertices through segment-chain embeddings.

Two vertices count as connected here when labelled embeddings of a fixed
segment chain exist with its endpoints pinned to them. Exact counts come
from the backtracking counter; at larger sizes a sequential importance
sampler gives an unbiased estimate (pick uniformly among feasible host
vertices at each step, multiply the choice counts; the product's mean over
trials estimates the embedding count).

The partition routine runs the two-stage procedure used for the split-host
case: a greedy pass builds a family of pairwise-unreachable representatives
and attaches every other vertex to the first representative it can reach,
then parts joined by many crossing edges are merged and vertices with too
few neighbors inside their own part get reassigned or dropped to the
leftover set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constructions import HVector, case_tag, h_vectors
from .graphs import Graph, _static_order
from .paths import build_h_path

__all__ = [
    "ReachabilityCount",
    "reachability_count",
    "ReachabilityPartition",
    "reachability_partition",
]

_EXACT_PATTERN_CAP = 12


@dataclass(frozen=True)
class ReachabilityCount:
    """Count (or estimate) of endpoint-pinned chain embeddings, both
    orientations summed, plus the n^(tr-1) normalizer callers divide by."""

    value: float
    stderr: float | None
    normalizer: float
    exact: bool


def _sample_weights(
    pattern: Graph, host: Graph, anchors: dict[int, int], trials: int, rng
) -> np.ndarray:
    """Importance-sampling weights, one per trial; each weight is the
    product of candidate-set sizes along one random greedy embedding, or 0
    at a dead end. The mean is an unbiased estimate of the embedding count."""
    order = _static_order(pattern, sorted(anchors))
    positions = {pv: i for i, pv in enumerate(order)}
    back_masks = []
    for idx, pv in enumerate(order):
        before = 0
        for prev in order[:idx]:
            before |= 1 << prev
        back_masks.append(pattern.adj[pv] & before)
    host_full = (1 << host.n) - 1
    weights = np.zeros(trials, dtype=float)
    for t in range(trials):
        used = 0
        image = [0] * len(order)
        weight = 1.0
        for idx, pv in enumerate(order):
            if pv in anchors:
                hv = anchors[pv]
                if used >> hv & 1:
                    weight = 0.0
                    break
                mask = 1 << hv
            else:
                mask = host_full
            bm = back_masks[idx]
            while bm:
                low = bm & -bm
                mask &= host.adj[image[positions[(low).bit_length() - 1]]]
                bm ^= low
            mask &= ~used
            count = mask.bit_count()
            if count == 0:
                weight = 0.0
                break
            if pv in anchors:
                hv = anchors[pv]
            else:
                pick = int(rng.integers(count))
                for _ in range(pick):
                    mask &= mask - 1
                hv = (mask & -mask).bit_length() - 1
                weight *= count
            image[idx] = hv
            used |= 1 << hv
        weights[t] = weight
    return weights


def reachability_count(
    g: Graph,
    x: int,
    y: int,
    v: HVector,
    mode: str = "exact",
    trials: int = 200,
    seed: int = 0,
) -> ReachabilityCount:
    """Embeddings of the chain of v with endpoints on {x, y}, both
    orientations summed. Exact mode backtracks and is refused above 12
    pattern vertices; sample mode reports an estimate with standard error."""
    if x == y:
        raise ValueError("endpoints must be distinct")
    for z in (x, y):
        if not 0 <= z < g.n:
            raise ValueError(f"vertex {z} out of range")
    path = build_h_path(v)
    a, b = path.endpoints
    t = len(path.segments)
    r = v.r
    normalizer = float(g.n) ** (t * r - 1)
    if mode == "exact":
        if path.graph.n > _EXACT_PATTERN_CAP:
            raise ValueError(
                f"exact mode refused for {path.graph.n} pattern vertices "
                f"(cap {_EXACT_PATTERN_CAP}); use sample mode"
            )
        from .graphs import count_labelled_embeddings

        forward = count_labelled_embeddings(path.graph, g, anchors={a: x, b: y})
        backward = count_labelled_embeddings(path.graph, g, anchors={a: y, b: x})
        return ReachabilityCount(
            float(forward.count + backward.count), None, normalizer, True
        )
    if mode != "sample":
        raise ValueError(f"unknown mode {mode!r}")
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.default_rng(seed)
    w_fwd = _sample_weights(path.graph, g, {a: x, b: y}, trials, rng)
    w_bwd = _sample_weights(path.graph, g, {a: y, b: x}, trials, rng)
    estimate = float(w_fwd.mean() + w_bwd.mean())
    var = float(w_fwd.var(ddof=1) + w_bwd.var(ddof=1)) if trials > 1 else 0.0
    stderr = math.sqrt(var / trials)
    return ReachabilityCount(estimate, stderr, normalizer, False)


@dataclass(frozen=True)
class ReachabilityPartition:
    """Parts plus the leftover set, with a flag for budget-exhausted or
    otherwise off-script outcomes and human-readable notes."""

    parts: tuple[tuple[int, ...], ...]
    leftover: tuple[int, ...]
    heuristic: bool
    notes: tuple[str, ...]


def reachability_partition(
    g: Graph,
    r: int,
    k: int,
    sample_budget: int = 200_000,
    seed: int = 0,
    mu_hat: float = 0.01,
    count_floor: float = 1.0,
    trials_per_pair: int = 64,
    cap: int = 400,
    internal_degree_floor: float | None = None,
) -> ReachabilityPartition:
    """Two-stage split of V(g) for the unbalanced-remainder case.

    Stage 1 greedily collects pairwise-unreachable representatives under
    sampled chain counts (estimate >= count_floor means reachable) and
    attaches every vertex to its first reachable representative. Stage 2
    merges parts joined by at least mu_hat * n^2 crossing edges, then
    reassigns vertices with internal degree below the floor (default
    mu_hat * n) to their strongest part, or to the leftover set when no
    part wants them.
    """
    tag = case_tag(r, k)
    if tag.case != 3:
        raise ValueError("the partition is defined for case-3 parameters only")
    if g.n > cap:
        raise ValueError(f"host has {g.n} vertices, above the cap of {cap}")
    if g.n == 0:
        return ReachabilityPartition((), (), False, ("empty host",))
    vector = next(iter(h_vectors(r, k)))
    rng = np.random.default_rng(seed)
    path = build_h_path(vector)
    a, b = path.endpoints
    notes: list[str] = [f"chain length {len(vector)}, pattern {path.graph.n} vertices"]
    heuristic = False

    walks_left = sample_budget

    def reachable(x: int, y: int) -> bool | None:
        nonlocal walks_left
        if walks_left < 2 * trials_per_pair:
            return None
        walks_left -= 2 * trials_per_pair
        w1 = _sample_weights(path.graph, g, {a: x, b: y}, trials_per_pair, rng)
        w2 = _sample_weights(path.graph, g, {a: y, b: x}, trials_per_pair, rng)
        return float(w1.mean() + w2.mean()) >= count_floor

    reps: list[int] = []
    assignment: dict[int, int] = {}
    unprocessed: list[int] = []
    for v in range(g.n):
        placed = False
        exhausted = False
        for idx, rep in enumerate(reps):
            verdict = reachable(v, rep)
            if verdict is None:
                exhausted = True
                break
            if verdict:
                assignment[v] = idx
                placed = True
                break
        if exhausted:
            unprocessed.append(v)
            heuristic = True
            continue
        if not placed:
            assignment[v] = len(reps)
            reps.append(v)
    if unprocessed:
        notes.append(
            f"sample budget exhausted; {len(unprocessed)} vertices unassigned"
        )

    # Stage 2a: merge parts with many crossing edges via components of the
    # part graph.
    part_count = len(reps)
    members: list[list[int]] = [[] for _ in range(part_count)]
    for v, idx in assignment.items():
        members[idx].append(v)
    threshold = mu_hat * g.n * g.n
    parent = list(range(part_count))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(part_count):
        for j in range(i + 1, part_count):
            crossing = sum(
                1 for u in members[i] for w in members[j] if g.has_edge(u, w)
            )
            if crossing >= threshold:
                parent[find(j)] = find(i)
    merged: dict[int, list[int]] = {}
    for idx in range(part_count):
        merged.setdefault(find(idx), []).extend(members[idx])
    groups = [sorted(vs) for _, vs in sorted(merged.items())]
    if part_count and len(groups) < part_count:
        notes.append(f"merged {part_count} raw parts into {len(groups)}")

    # Stage 2b: degree cleanup against the pre-cleanup membership.
    floor = mu_hat * g.n if internal_degree_floor is None else internal_degree_floor
    group_of = {}
    for gi, vs in enumerate(groups):
        for v in vs:
            group_of[v] = gi
    final: list[list[int]] = [[] for _ in groups]
    leftover: list[int] = list(unprocessed)
    for v in range(g.n):
        if v not in group_of:
            continue
        degrees = [
            sum(1 for u in vs if u != v and g.has_edge(v, u)) for vs in groups
        ]
        own = degrees[group_of[v]]
        if own >= floor:
            final[group_of[v]].append(v)
        else:
            best = max(range(len(groups)), key=lambda gi: (degrees[gi], -gi))
            if degrees[best] >= floor:
                final[best].append(v)
                notes.append(f"vertex {v} reassigned by degree")
            else:
                leftover.append(v)
    parts = tuple(tuple(sorted(vs)) for vs in final if vs)
    limit = tag.c - 1 if tag.c is not None else None
    if limit is not None and len(parts) > limit:
        heuristic = True
        notes.append(f"{len(parts)} parts exceed the c-1 = {limit} bound")
    return ReachabilityPartition(parts, tuple(sorted(leftover)), heuristic, tuple(notes))
