"""The subgraph-appearance threshold functional, evaluated exactly in log space.

For a pattern F the functional is the minimum of n^v * p^e over subgraphs
of F with at least one edge; the anchored variant discounts vertices in an
independent anchor set W. Values span hundreds of orders of magnitude, so
everything is computed and compared as natural logarithms (absolute
tolerance 1e-9).

Minimization runs over induced subgraphs on vertex subsets only. That is
exact for p <= 1: on a fixed vertex set, extra edges multiply by p <= 1 and
never increase anything, and isolated vertices multiply by n >= 1 and never
decrease anything. Tests verify this reduction against the full
(vertex subset x edge subset) brute force on small patterns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .graphs import Graph

__all__ = [
    "LOG_TOL",
    "PhiResult",
    "phi",
    "phi_anchored",
    "ComposeReport",
    "phi_compose_check",
    "GadgetComplementPhi",
    "phi_of_gadget_complement",
]

LOG_TOL = 1e-9
_COMPONENT_CAP = 24


@dataclass(frozen=True)
class PhiResult:
    """Minimizer report: log of the minimum, the vertex subset achieving it,
    how many of those vertices are free (not anchored), and the edge count
    of the induced minimizer."""

    log_value: float
    argmin_vertices: tuple[int, ...]
    argmin_free_count: int
    argmin_edges: int

    @property
    def value(self) -> float:
        try:
            return math.exp(self.log_value)
        except OverflowError:
            return math.inf


def _components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps: list[list[int]] = []
    for start in range(g.n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in g.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


@lru_cache(maxsize=256)
def _subset_profile(
    local_adj: tuple[int, ...], anchor_mask: int
) -> tuple[tuple[int, int], ...]:
    """Best edge count per free-vertex count over one component's subsets.

    Walks the subsets in Gray-code order, so each step flips one vertex and
    the running edge count changes by that vertex's degree into the rest.
    Entry f of the result is (max edges, witness bitmask) over all subsets
    with exactly f free vertices, or (0, 0) when every such subset is
    edgeless. The profile depends only on the component's shape and anchor
    placement, so evaluations at other (n, p) points reuse it.
    """
    m = len(local_adj)
    best: list[tuple[int, int]] = [(0, 0)] * (m + 1)
    subset = 0
    edges = 0
    for step in range(1, 1 << m):
        flipped = step & -step
        bit = flipped.bit_length() - 1
        if subset & flipped:
            subset ^= flipped
            edges -= (local_adj[bit] & subset).bit_count()
        else:
            edges += (local_adj[bit] & subset).bit_count()
            subset ^= flipped
        if edges == 0:
            continue
        free = (subset & ~anchor_mask).bit_count()
        if edges > best[free][0]:
            best[free] = (edges, subset)
    return tuple(best)


def _component_minimum(
    g: Graph, comp: Sequence[int], anchored: frozenset[int], log_n: float, log_p: float
) -> tuple[float, int, int, int] | None:
    """Scan every vertex subset of one connected component.

    Returns (min log value, best subset as a local bitmask, its edge count,
    its free-vertex count), or None when the component has no edges. For a
    fixed free-vertex count the minimum always sits at the maximum edge
    count because log p <= 0, so the profile rows are the only candidates.
    """
    m = len(comp)
    if m > _COMPONENT_CAP:
        raise ValueError(
            f"connected component with {m} vertices exceeds the cap of "
            f"{_COMPONENT_CAP}; split the pattern first"
        )
    local_adj = [0] * m
    index = {v: i for i, v in enumerate(comp)}
    for i, v in enumerate(comp):
        mask = 0
        for u in g.neighbors(v):
            j = index.get(u)
            if j is not None:
                mask |= 1 << j
        local_adj[i] = mask
    anchor_mask = 0
    for i, v in enumerate(comp):
        if v in anchored:
            anchor_mask |= 1 << i
    profile = _subset_profile(tuple(local_adj), anchor_mask)
    best_val = math.inf
    best = None
    for free, (e, s) in enumerate(profile):
        if e == 0:
            continue
        val = free * log_n + e * log_p
        if val < best_val - LOG_TOL:
            best_val = val
            best = (val, s, e, free)
    return best


def _phi_on_components(
    f: Graph, anchors: Iterable[int], n: float, p: float
) -> PhiResult:
    if f.edge_count == 0:
        raise ValueError("the functional needs a pattern with at least one edge")
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0 < p <= 1:
        raise ValueError("p must lie in (0, 1]")
    anchored = frozenset(anchors)
    log_n = math.log(n)
    log_p = math.log(p)
    per_comp: list[tuple[float, list[int], int, int]] = []
    for comp in _components(f):
        found = _component_minimum(f, comp, anchored, log_n, log_p)
        if found is None:
            continue
        val, s, e, free = found
        vertices = [comp[i] for i in range(len(comp)) if s >> i & 1]
        per_comp.append((val, vertices, e, free))
    if not per_comp:
        raise ValueError("no component carries an edge")
    negatives = [entry for entry in per_comp if entry[0] < -LOG_TOL]
    if negatives:
        # Sub-unit components multiply the minimum down; take all of them.
        chosen = negatives
    else:
        chosen = [min(per_comp, key=lambda entry: entry[0])]
    log_value = sum(entry[0] for entry in chosen)
    vertices = tuple(sorted(v for entry in chosen for v in entry[1]))
    edges = sum(entry[2] for entry in chosen)
    free = sum(entry[3] for entry in chosen)
    return PhiResult(log_value, vertices, free, edges)


def phi(f: Graph, n: float, p: float) -> PhiResult:
    """Minimum of n^v * p^e over subgraphs of f with at least one edge."""
    if f.n > 24:
        raise ValueError("pattern capped at 24 vertices")
    return _phi_on_components(f, (), n, p)


def phi_anchored(f: Graph, w: Iterable[int], n: float, p: float) -> PhiResult:
    """Anchored variant: vertices in w contribute no n factor.

    w must be independent in f; an anchored evaluation with empty w is
    exactly phi.
    """
    if f.n > 24:
        raise ValueError("pattern capped at 24 vertices")
    w_set = frozenset(w)
    for v in w_set:
        if not 0 <= v < f.n:
            raise ValueError(f"anchor vertex {v} out of range")
    for u in w_set:
        for v in w_set:
            if u < v and f.has_edge(u, v):
                raise ValueError("anchor set must be independent")
    return _phi_on_components(f, w_set, n, p)


@dataclass(frozen=True)
class ComposeReport:
    """Outcome of composing two anchored patterns and re-evaluating.

    For a disjoint union the composite minimum must equal the smaller of
    the two inputs; for a one-vertex glue it is bounded below by
    min(phi_left, phi_right, phi_left * phi_right / n). Both relations are
    reported, not asserted, together with the precondition that each input
    functional is at least 1.
    """

    mode: str
    log_phi_left: float
    log_phi_right: float
    log_phi_composite: float
    log_bound: float
    holds: bool
    precondition_ok: bool
    composite: Graph
    composite_anchors: tuple[int, ...]


def phi_compose_check(
    f3: Graph,
    w3: Iterable[int],
    f4: Graph,
    w4: Iterable[int],
    n: float,
    p: float,
    mode: str = "disjoint",
) -> ComposeReport:
    """Build the disjoint union or one-vertex glue of two anchored patterns
    and check the composition law on the explicit composite."""
    if mode not in ("disjoint", "shared-vertex"):
        raise ValueError(f"unknown mode {mode!r}")
    w3_set = sorted(set(w3))
    w4_set = sorted(set(w4))
    left = phi_anchored(f3, w3_set, n, p)
    right = phi_anchored(f4, w4_set, n, p)

    if mode == "disjoint":
        shift = f3.n
        edges = list(f3.edges()) + [(u + shift, v + shift) for u, v in f4.edges()]
        composite = Graph(f3.n + f4.n, edges)
        anchors = tuple(w3_set) + tuple(v + shift for v in w4_set)
        bound = min(left.log_value, right.log_value)
        comp_result = phi_anchored(composite, anchors, n, p)
        holds = abs(comp_result.log_value - bound) <= LOG_TOL
    else:
        glue3 = min(v for v in range(f3.n) if v not in w3_set)
        glue4 = min(v for v in range(f4.n) if v not in w4_set)
        relabel = {}
        next_id = f3.n
        for v in range(f4.n):
            if v == glue4:
                relabel[v] = glue3
            else:
                relabel[v] = next_id
                next_id += 1
        edges = list(f3.edges()) + [
            tuple(sorted((relabel[u], relabel[v]))) for u, v in f4.edges()
        ]
        composite = Graph(next_id, edges)
        anchors = tuple(w3_set) + tuple(relabel[v] for v in w4_set)
        bound = min(
            left.log_value,
            right.log_value,
            left.log_value + right.log_value - math.log(n),
        )
        comp_result = phi_anchored(composite, anchors, n, p)
        holds = comp_result.log_value >= bound - LOG_TOL

    precondition_ok = left.log_value >= -LOG_TOL and right.log_value >= -LOG_TOL
    return ComposeReport(
        mode=mode,
        log_phi_left=left.log_value,
        log_phi_right=right.log_value,
        log_phi_composite=comp_result.log_value,
        log_bound=bound,
        holds=holds,
        precondition_ok=precondition_ok,
        composite=composite,
        composite_anchors=anchors,
    )


@dataclass(frozen=True)
class GadgetComplementPhi:
    """Both functionals on the random side of a split gadget, plus the
    bound checks at constant c = p * n^(2/k): the base-free side must reach
    c * n and the base-anchored side c * n^(1/k)."""

    without_base: PhiResult
    anchored: PhiResult
    c: float
    without_base_ok: bool
    anchored_ok: bool


def phi_of_gadget_complement(blueprint, n: float, p: float) -> GadgetComplementPhi:
    """Evaluate the functional on a gadget's random side.

    Works per connected component (the composition law makes that exact),
    so the total size of the gadget does not matter, only component sizes.
    The blueprint must carry its case tag so the random side is defined.
    """
    from .gadgets import split_gadget

    if blueprint.case is None:
        raise ValueError("blueprint lacks a case tag; build it with a (r, k) pair")
    k = blueprint.case.k
    if p < n ** (-2.0 / k) * (1 - 1e-12):
        raise ValueError("p below the threshold scale n^(-2/k)")
    rand = split_gadget(blueprint).random_side
    base = set(blueprint.base)
    keep = [v for v in range(rand.n) if v not in base]
    without_base_graph = rand.induced(keep)
    without_base = _phi_on_components(without_base_graph, (), n, p)
    anchored = _phi_on_components(rand, base, n, p)
    c = p * n ** (2.0 / k)
    log_c = math.log(c)
    log_n = math.log(n)
    return GadgetComplementPhi(
        without_base=without_base,
        anchored=anchored,
        c=c,
        without_base_ok=without_base.log_value >= log_c + log_n - LOG_TOL,
        anchored_ok=anchored.log_value >= log_c + log_n / k - LOG_TOL,
    )
