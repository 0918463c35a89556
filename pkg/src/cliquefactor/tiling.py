"""Clique tilings: the exact perfect/maximum solver, the greedy two-host
almost-tiling, and deterministic oracles built on them.

The exact solver is an exact-cover search over the host's r-clique list,
branching on the uncovered vertex contained in the fewest live cliques. Two
cuts do the pruning work: a vertex with no live clique kills the branch,
and a greedily grown set of uncovered vertices no two of which share a
clique bounds how many tiles can still fit (each clique meets such a set
at most once). Cutoffs come in two kinds: a deterministic node budget for
reproducible experiment runs, and a wall-clock timeout for interactive use.
Hitting either yields the distinct "timeout" status, never "untiled".

The two-host searches place one vertex set so that one edge set is present
in the first host and a second edge set in the second host; the greedy
almost-tiling and the crossing-clique completion are thin loops over that
primitive.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .constructions import h_det
from .graphs import Graph, _static_order, enumerate_cliques, union

__all__ = [
    "Tiling",
    "SolveResult",
    "MaxTilingResult",
    "perfect_tiling",
    "max_tiling",
    "JointSearch",
    "find_joint_embedding",
    "AlmostTiling",
    "greedy_almost_tiling",
    "HSReport",
    "hajnal_szemeredi_check",
    "CompletionResult",
    "crossing_clique_completion",
]

_CLOCK_CHECK_INTERVAL = 512


@dataclass(frozen=True)
class Tiling:
    """Vertex-disjoint cliques of a host graph."""

    parts: tuple[tuple[int, ...], ...]
    host: Graph

    @property
    def size(self) -> int:
        return len(self.parts)

    @property
    def covered(self) -> tuple[int, ...]:
        return tuple(sorted(v for part in self.parts for v in part))

    @property
    def is_perfect(self) -> bool:
        return self.covered == tuple(range(self.host.n))

    def validate(self) -> None:
        """Raise unless the parts are pairwise-disjoint cliques in host."""
        seen: set[int] = set()
        for part in self.parts:
            for v in part:
                if not 0 <= v < self.host.n:
                    raise ValueError(f"vertex {v} outside host")
                if v in seen:
                    raise ValueError(f"vertex {v} covered twice")
                seen.add(v)
            for a in range(len(part)):
                for b in range(a + 1, len(part)):
                    if not self.host.has_edge(part[a], part[b]):
                        raise ValueError(
                            f"part {part} misses edge ({part[a]}, {part[b]})"
                        )


@dataclass(frozen=True)
class SolveResult:
    """Perfect-tiling decision. status is tiled, untiled, or timeout;
    untiled is definitive, timeout is not."""

    status: str
    tiling: Tiling | None
    nodes: int
    reason: str | None = None


@dataclass(frozen=True)
class MaxTilingResult:
    """Largest tiling found, optimal only when the search ran to
    completion."""

    tiling: Tiling
    optimal: bool
    nodes: int


class _Cutoff(Exception):
    pass


class _Searcher:
    """Shared machinery for the exact-cover searches."""

    def __init__(
        self,
        g: Graph,
        r: int,
        timeout_ms: float | None,
        node_budget: int | None,
    ) -> None:
        self.g = g
        self.r = r
        self.cliques = enumerate_cliques(g, r)
        self.masks = [self._mask(c) for c in self.cliques]
        self.vertex_cliques: list[list[int]] = [[] for _ in range(g.n)]
        for idx, clique in enumerate(self.cliques):
            for v in clique:
                self.vertex_cliques[v].append(idx)
        self.nodes = 0
        self.node_budget = node_budget
        self.deadline = (
            time.monotonic() + timeout_ms / 1000.0 if timeout_ms is not None else None
        )

    @staticmethod
    def _mask(clique: tuple[int, ...]) -> int:
        m = 0
        for v in clique:
            m |= 1 << v
        return m

    def tick(self) -> None:
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise _Cutoff
        if (
            self.deadline is not None
            and self.nodes % _CLOCK_CHECK_INTERVAL == 0
            and time.monotonic() > self.deadline
        ):
            raise _Cutoff

    def live(self, v: int, used: int) -> list[int]:
        return [ci for ci in self.vertex_cliques[v] if not self.masks[ci] & used]

    def scattered_bound(self, candidates: Sequence[tuple[int, list[int]]]) -> int:
        """Upper bound on how many more tiles fit: grow a set of uncovered
        vertices pairwise not sharing any live clique (scanning in order of
        ascending live-clique count); each tile meets it at most once, so
        the non-members pay r-1 vertices per tile."""
        alive = len(candidates)
        blocked = 0
        scattered = 0
        for v, live in sorted(candidates, key=lambda item: (len(item[1]), item[0])):
            if blocked >> v & 1:
                continue
            scattered += 1
            for ci in live:
                blocked |= self.masks[ci]
        return min(alive // self.r, (alive - scattered) // (self.r - 1))


def _collect_candidates(
    s: _Searcher, used: int, skipped: int
) -> tuple[list[tuple[int, list[int]]], bool]:
    """Live-clique lists for every vertex still in play; the flag reports a
    vertex with no live clique (fatal for perfect tilings)."""
    out: list[tuple[int, list[int]]] = []
    dead = False
    for v in range(s.g.n):
        if (used | skipped) >> v & 1:
            continue
        live = s.live(v, used)
        if not live:
            dead = True
        out.append((v, live))
    return out, dead


def _perfect_search(s: _Searcher, used: int, chosen: list[int]) -> bool:
    s.tick()
    full = (1 << s.g.n) - 1
    if used == full:
        return True
    candidates, dead = _collect_candidates(s, used, 0)
    if dead:
        return False
    remaining = len(candidates)
    if s.scattered_bound(candidates) < remaining // s.r:
        return False
    v, live = min(candidates, key=lambda item: (len(item[1]), item[0]))
    for ci in live:
        chosen.append(ci)
        if _perfect_search(s, used | s.masks[ci], chosen):
            return True
        chosen.pop()
    return False


def perfect_tiling(
    g: Graph,
    r: int,
    timeout_ms: float | None = None,
    node_budget: int | None = None,
) -> SolveResult:
    """Decide whether g has a perfect clique tiling with parts of size r."""
    if r < 2:
        raise ValueError(f"r must be at least 2, got {r}")
    if g.n % r != 0:
        return SolveResult("untiled", None, 0, reason="divisibility")
    if g.n == 0:
        return SolveResult("tiled", Tiling((), g), 0)
    s = _Searcher(g, r, timeout_ms, node_budget)
    chosen: list[int] = []
    try:
        found = _perfect_search(s, 0, chosen)
    except _Cutoff:
        return SolveResult("timeout", None, s.nodes)
    if not found:
        return SolveResult("untiled", None, s.nodes)
    tiling = Tiling(tuple(s.cliques[ci] for ci in chosen), g)
    return SolveResult("tiled", tiling, s.nodes)


def _max_search(
    s: _Searcher, used: int, skipped: int, chosen: list[int], best: list[int]
) -> None:
    s.tick()
    candidates, _ = _collect_candidates(s, used, skipped)
    candidates = [(v, live) for v, live in candidates if live]
    if len(chosen) + s.scattered_bound(candidates) <= len(best):
        return
    if not candidates:
        if len(chosen) > len(best):
            best[:] = chosen
        return
    v, live = min(candidates, key=lambda item: (len(item[1]), item[0]))
    for ci in live:
        chosen.append(ci)
        _max_search(s, used | s.masks[ci], skipped, chosen, best)
        chosen.pop()
    _max_search(s, used, skipped | 1 << v, chosen, best)
    if len(chosen) > len(best):
        best[:] = chosen


def max_tiling(
    g: Graph,
    r: int,
    timeout_ms: float | None = None,
    node_budget: int | None = None,
) -> MaxTilingResult:
    """Largest clique tiling found by branch and bound; the optimal flag is
    set only when the search space was exhausted."""
    if r < 2:
        raise ValueError(f"r must be at least 2, got {r}")
    s = _Searcher(g, r, timeout_ms, node_budget)
    best: list[int] = []
    optimal = True
    try:
        _max_search(s, 0, 0, [], best)
    except _Cutoff:
        optimal = False
    tiling = Tiling(tuple(s.cliques[ci] for ci in best), g)
    return MaxTilingResult(tiling, optimal, s.nodes)


class JointSearch(NamedTuple):
    """Outcome of a two-host embedding search. complete means the space
    was exhausted, so a missing image is a definitive no."""

    image: tuple[int, ...] | None
    nodes: int
    complete: bool


def find_joint_embedding(
    pattern_det: Graph,
    pattern_rand: Graph,
    host_det: Graph,
    host_rand: Graph,
    anchors: Mapping[int, int] | None = None,
    allowed: int | None = None,
    order: Sequence[int] | None = None,
    candidate_order: Sequence[int] | None = None,
    node_budget: int = 100_000,
) -> JointSearch:
    """One injective placement of a doubly-labelled pattern: edges of
    pattern_det must land in host_det, edges of pattern_rand in host_rand.

    Both patterns share a vertex set. anchors pins pattern vertices to host
    vertices; free vertices draw from the allowed bitmask (everything by
    default) in candidate_order. order fixes the placement sequence, which
    defaults to anchors first and then by combined degree.
    """
    if pattern_det.n != pattern_rand.n:
        raise ValueError("patterns must share a vertex set")
    if host_det.n != host_rand.n:
        raise ValueError("hosts must share a vertex set")
    anchors = dict(anchors or {})
    hn = host_det.n
    pn = pattern_det.n
    for pv, hv in anchors.items():
        if not 0 <= pv < pn:
            raise ValueError(f"anchor pattern vertex {pv} out of range")
        if not 0 <= hv < hn:
            raise ValueError(f"anchor host vertex {hv} out of range")
    if pn > hn:
        return JointSearch(None, 0, True)
    allowed_mask = (1 << hn) - 1 if allowed is None else allowed
    combined = union(pattern_det, pattern_rand)
    if order is None:
        order = _static_order(combined, sorted(anchors))
    else:
        order = list(order)
        if sorted(order) != list(range(pn)):
            raise ValueError("order must enumerate every pattern vertex once")
    hosts_order = (
        list(range(hn)) if candidate_order is None else list(candidate_order)
    )
    position = {pv: i for i, pv in enumerate(order)}
    back_det: list[list[int]] = []
    back_rand: list[list[int]] = []
    for idx, pv in enumerate(order):
        earlier = set(order[:idx])
        back_det.append(
            [position[u] for u in range(pn) if pattern_det.has_edge(pv, u) and u in earlier]
        )
        back_rand.append(
            [position[u] for u in range(pn) if pattern_rand.has_edge(pv, u) and u in earlier]
        )

    image = [-1] * pn
    nodes = 0
    budget_hit = False

    def feasible_mask(idx: int, used: int) -> int:
        pv = order[idx]
        if pv in anchors:
            mask = 1 << anchors[pv]
        else:
            mask = allowed_mask
        for pos in back_det[idx]:
            mask &= host_det.adj[image[order[pos]]]
        for pos in back_rand[idx]:
            mask &= host_rand.adj[image[order[pos]]]
        return mask & ~used

    def step(idx: int, used: int) -> bool:
        nonlocal nodes, budget_hit
        if idx == pn:
            return True
        mask = feasible_mask(idx, used)
        pv = order[idx]
        for hv in hosts_order:
            if not mask >> hv & 1:
                continue
            nodes += 1
            if nodes > node_budget:
                budget_hit = True
                return False
            image[pv] = hv
            if step(idx + 1, used | 1 << hv):
                return True
            if budget_hit:
                image[pv] = -1
                return False
            image[pv] = -1
        return False

    found = step(0, 0)
    if found:
        return JointSearch(tuple(image), nodes, True)
    return JointSearch(None, nodes, not budget_hit)


@dataclass(frozen=True)
class AlmostTiling:
    """Greedy tiling plus the vertices it never covered."""

    tiling: Tiling
    leftover: tuple[int, ...]


def _pattern_pair(r: int, k: int) -> tuple[Graph, Graph]:
    """Deterministic-pattern clique split: the multipartite pattern and its
    complement within the complete graph."""
    det = h_det(r, k)
    rand_edges = [
        (a, b)
        for a in range(r)
        for b in range(a + 1, r)
        if not det.has_edge(a, b)
    ]
    return det, Graph(r, rand_edges)


def greedy_almost_tiling(
    g_det: Graph,
    g_rand: Graph,
    r: int,
    k: int,
    leftover_cap: float = 0.0,
    seed: int = 0,
    restarts: int = 4,
    attempt_budget: int = 20_000,
    allowed: int | None = None,
) -> AlmostTiling:
    """Greedily tile the shared vertex set: each tile places the
    deterministic pattern in g_det and its complement in g_rand on the same
    r vertices. Stops once the leftover is within leftover_cap of the
    tiled region or a restart budget passes without progress. allowed
    restricts the tiled region to a vertex bitmask."""
    if g_det.n != g_rand.n:
        raise ValueError("hosts must share a vertex set")
    det_pat, rand_pat = _pattern_pair(r, k)
    rng = np.random.default_rng(seed)
    n = g_det.n
    uncovered = (1 << n) - 1 if allowed is None else allowed
    region = uncovered.bit_count()
    tiles: list[tuple[int, ...]] = []
    failures = 0
    while uncovered.bit_count() >= r and failures <= restarts:
        if uncovered.bit_count() <= leftover_cap * region:
            break
        perm = [int(v) for v in rng.permutation(n)]
        result = find_joint_embedding(
            det_pat,
            rand_pat,
            g_det,
            g_rand,
            allowed=uncovered,
            candidate_order=perm,
            node_budget=attempt_budget,
        )
        if result.image is None:
            failures += 1
            continue
        failures = 0
        tiles.append(tuple(sorted(result.image)))
        for hv in result.image:
            uncovered &= ~(1 << hv)
    host = union(g_det, g_rand)
    leftover = tuple(v for v in range(n) if uncovered >> v & 1)
    return AlmostTiling(Tiling(tuple(tiles), host), leftover)


@dataclass(frozen=True)
class HSReport:
    """Outcome of the minimum-degree tiling check. violation is the
    never-expected case: preconditions held yet no tiling exists."""

    applicable: bool
    reason: str | None
    status: str | None
    violation: bool
    tiling: Tiling | None


def hajnal_szemeredi_check(
    g: Graph,
    r: int,
    timeout_ms: float | None = None,
    node_budget: int | None = None,
) -> HSReport:
    """Check the minimum-degree guarantee: divisibility plus degree at
    least (1 - 1/r) n force a perfect tiling."""
    if r < 2:
        raise ValueError(f"r must be at least 2, got {r}")
    if g.n % r != 0:
        return HSReport(False, "divisibility", None, False, None)
    min_deg = min(m.bit_count() for m in g.adj) if g.n else 0
    if r * min_deg < (r - 1) * g.n:
        return HSReport(
            False,
            f"minimum degree {min_deg} below {(r - 1) * g.n / r:g}",
            None,
            False,
            None,
        )
    result = perfect_tiling(g, r, timeout_ms=timeout_ms, node_budget=node_budget)
    if result.status == "tiled":
        return HSReport(True, None, "tiled", False, result.tiling)
    if result.status == "timeout":
        return HSReport(True, None, "timeout", False, None)
    return HSReport(True, None, "untiled", True, None)


@dataclass(frozen=True)
class CompletionResult:
    """Disjoint cliques through the requested vertices, plus the ones no
    clique could be found for."""

    tiling: Tiling
    unserved: tuple[int, ...]


def _crossing_patterns(r: int) -> tuple[Graph, Graph]:
    """Crossing-clique pattern: vertex 0 is the crossing vertex; the other
    r-1 split into two blocks joined completely on the deterministic side,
    with everything else (both block interiors and all pairs at vertex 0)
    on the random side. The union is the complete graph."""
    top = (r - 1 + 1) // 2
    block_a = list(range(1, 1 + top))
    block_b = list(range(1 + top, r))
    det_edges = [(a, b) for a in block_a for b in block_b]
    det = Graph(r, sorted((min(a, b), max(a, b)) for a, b in det_edges))
    rand_edges = [
        (a, b)
        for a in range(r)
        for b in range(a + 1, r)
        if not det.has_edge(a, b)
    ]
    return det, Graph(r, rand_edges)


def _hdet_anchor_positions(r: int, k: int) -> list[int]:
    """One representative pattern vertex per block of the deterministic
    pattern (positions within a block are interchangeable)."""
    det = h_det(r, k)
    positions = []
    seen_parts = set()
    for v in range(r):
        # Vertices of one block share an adjacency mask (everything
        # outside the block), which identifies the block.
        if det.adj[v] not in seen_parts:
            seen_parts.add(det.adj[v])
            positions.append(v)
    return positions


def crossing_clique_completion(
    g_det: Graph,
    g_rand: Graph,
    u_set: Sequence[int],
    w_set: Sequence[int],
    r: int,
    k: int,
    variant: str = "hdet",
    seed: int = 0,
    restarts: int = 4,
    attempt_budget: int = 20_000,
) -> CompletionResult:
    """For each vertex of u_set, one clique through it with its other r-1
    vertices drawn from w_set, disjoint across cliques.

    The hdet variant places the deterministic pattern in g_det (trying the
    crossing vertex in every block) and the pattern complement in g_rand.
    The crossing variant uses the balanced-bipartition device: the
    bipartite pattern sits inside w_set on the deterministic side and the
    two completing cliques through the crossing vertex on the random side.
    """
    if g_det.n != g_rand.n:
        raise ValueError("hosts must share a vertex set")
    u_list = sorted(set(u_set))
    w_mask = 0
    for w in w_set:
        w_mask |= 1 << w
    for u in u_list:
        if w_mask >> u & 1:
            raise ValueError(f"vertex {u} appears in both sets")
    if 2 * r * len(u_list) > w_mask.bit_count():
        raise ValueError(
            f"{len(u_list)} crossing vertices exceed |W|/(2r) = "
            f"{w_mask.bit_count() / (2 * r):g}"
        )
    if variant == "hdet":
        det_pat, rand_pat = _pattern_pair(r, k)
        anchor_positions = _hdet_anchor_positions(r, k)
    elif variant == "crossing":
        det_pat, rand_pat = _crossing_patterns(r)
        anchor_positions = [0]
    else:
        raise ValueError(f"unknown variant {variant!r}")
    rng = np.random.default_rng(seed)
    n = g_det.n
    free = w_mask
    tiles: list[tuple[int, ...]] = []
    unserved: list[int] = []
    for u in u_list:
        placed = False
        for _ in range(restarts + 1):
            perm = [int(v) for v in rng.permutation(n)]
            for pos in anchor_positions:
                result = find_joint_embedding(
                    det_pat,
                    rand_pat,
                    g_det,
                    g_rand,
                    anchors={pos: u},
                    allowed=free,
                    candidate_order=perm,
                    node_budget=attempt_budget,
                )
                if result.image is not None:
                    tiles.append(tuple(sorted(result.image)))
                    for hv in result.image:
                        free &= ~(1 << hv)
                    placed = True
                    break
            if placed:
                break
        if not placed:
            unserved.append(u)
    host = union(g_det, g_rand)
    return CompletionResult(Tiling(tuple(tiles), host), tuple(unserved))
