"""Catalogue of concrete graphs behind the clique-factor machinery.

Everything here is a small deterministic constructor: the multipartite
deterministic pattern whose clique complement is a disjoint union of
cliques, the decorated variants used as path segments, the vector families
that parameterize those paths, the extremal host graph that pins the
threshold from below, and the critical chromatic ratio.

Vertex-order convention for all multipartite constructions: parts in
declaration order, vertices consecutive within parts. Distinguished
vertices are named by index under this convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .graphs import (
    DecoratedGraph,
    Graph,
    complete_multipartite,
    kminus,
)

__all__ = [
    "CaseTag",
    "HVector",
    "case_tag",
    "h_det",
    "h_det_complement_parts",
    "h0",
    "h0_prime",
    "h1",
    "h1_prime",
    "h_vectors",
    "PartitionedGraph",
    "lower_bound_graph",
    "chi_cr",
]


@dataclass(frozen=True)
class CaseTag:
    """Arithmetic split of (r, k): r = k*(r_star - 1) + q with 0 < q <= k.

    case 1 means q == k (r divisible by k), case 2 means r_star >= 3 with
    q < k, case 3 means r_star == 2 with q < k. c = ceil(r/q) is the
    partition width parameter and is populated for case 3 only.
    """

    r: int
    k: int
    q: int
    r_star: int
    case: int
    c: int | None

    def __post_init__(self) -> None:
        if self.k * (self.r_star - 1) + self.q != self.r or not 0 < self.q <= self.k:
            raise ValueError("inconsistent case parameters")


def case_tag(r: int, k: int) -> CaseTag:
    if not 2 <= k <= r:
        raise ValueError(f"need 2 <= k <= r, got k={k}, r={r}")
    r_star = -(-r // k)  # ceil(r / k)
    q = r - k * (r_star - 1)
    if q == k:
        case = 1
    elif r_star >= 3:
        case = 2
    else:
        case = 3
    c = -(-r // q) if case == 3 else None
    return CaseTag(r=r, k=k, q=q, r_star=r_star, case=case, c=c)


def h_det(r: int, k: int) -> Graph:
    """Complete multipartite pattern on r vertices: r_star - 1 parts of size
    k and one part of size q. Its complement inside the complete graph on r
    vertices is a disjoint union of r_star - 1 copies of K_k and one K_q;
    for k == r the pattern is edgeless."""
    tag = case_tag(r, k)
    return complete_multipartite([k] * (tag.r_star - 1) + [tag.q])


def h_det_complement_parts(r: int, k: int) -> list[tuple[int, ...]]:
    """Vertex classes of the clique complement of h_det(r, k): the parts
    themselves, each of which induces a complete graph in the complement."""
    tag = case_tag(r, k)
    parts = []
    start = 0
    for size in [k] * (tag.r_star - 1) + [tag.q]:
        parts.append(tuple(range(start, start + size)))
        start += size
    return parts


def h0(r: int, k: int) -> DecoratedGraph:
    """Segment pattern on r+1 vertices: like h_det but the last part grows
    to q+1, with both distinguished vertices inside that last part (hence
    non-adjacent). Deleting either distinguished vertex leaves h_det."""
    tag = case_tag(r, k)
    g = complete_multipartite([k] * (tag.r_star - 1) + [tag.q + 1])
    n = r + 1
    return DecoratedGraph(g, (n - 2, n - 1))


def h0_prime(r: int, k: int) -> DecoratedGraph:
    """Variant of h0 with the distinguished pair split across the first two
    parts, making the pair adjacent. Defined for cases 2 and 3 only."""
    tag = case_tag(r, k)
    if tag.case == 1:
        raise ValueError("h0_prime is undefined when q == k")
    g = complete_multipartite([k] * (tag.r_star - 1) + [tag.q + 1])
    return DecoratedGraph(g, (0, k))


def h1(r: int, k: int) -> DecoratedGraph:
    """Case-1 segment: the complete (r_star+1)-partite graph with parts of
    size k and a final singleton, intersected with the one-edge-deleted
    complete graph whose missing edge joins the singleton to a first-part
    vertex. Distinguished pair: (singleton, first-part vertex)."""
    tag = case_tag(r, k)
    if tag.q != k:
        raise ValueError(f"h1 requires k | r, got r={r}, k={k}")
    base = complete_multipartite([k] * tag.r_star + [1])
    singleton = r  # last vertex, the size-1 part
    other = 0
    edges = [(u, v) for u, v in base.edges() if {u, v} != {singleton, other}]
    return DecoratedGraph(Graph(r + 1, edges), (singleton, other))


def h1_prime(r: int, k: int) -> DecoratedGraph:
    """h1 with the distinguished labels swapped."""
    f = h1(r, k)
    return DecoratedGraph(f.graph, (f.w2, f.w1))


@dataclass(frozen=True)
class HVector:
    """A nonempty sequence of decorated graphs, all on the same r+1 vertices,
    meant to be chained into a path by gluing consecutive distinguished
    vertices."""

    entries: tuple[DecoratedGraph, ...]

    def __post_init__(self) -> None:
        if len(self.entries) == 0:
            raise ValueError("vector must have at least one entry")
        sizes = {e.graph.n for e in self.entries}
        if len(sizes) != 1:
            raise ValueError("all entries must have the same vertex count")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def r(self) -> int:
        return self.entries[0].graph.n - 1


def h_vectors(r: int, k: int, t_star: int = 1) -> Iterator[HVector]:
    """Yield the segment vectors for the given parameters.

    k == r: the vectors ((K-minus,) * t) for t = 1..t_star.
    case 1: the single vector (h1, h1_prime).
    case 2: the single vector (h0, h0_prime, h0_prime, h0).
    case 3: a lazy enumeration of every vector over {h0, h0_prime} with
        first and last entry h0, at least one interior h0_prime, and length
        between 3 and c * (2^(c+1) + 1), ordered by length then by the
        interior pattern read as a binary number (h0_prime = 1).
    """
    tag = case_tag(r, k)
    if k == r:
        if t_star < 1:
            raise ValueError("t_star must be at least 1")
        seg = kminus(r)
        for t in range(1, t_star + 1):
            yield HVector(tuple([seg] * t))
        return
    if tag.case == 1:
        yield HVector((h1(r, k), h1_prime(r, k)))
        return
    if tag.case == 2:
        a, b = h0(r, k), h0_prime(r, k)
        yield HVector((a, b, b, a))
        return
    assert tag.c is not None
    a, b = h0(r, k), h0_prime(r, k)
    max_len = tag.c * (2 ** (tag.c + 1) + 1)
    for length in range(3, max_len + 1):
        interior = length - 2
        for bits in range(1, 2**interior):
            mid = tuple(b if bits >> (interior - 1 - i) & 1 else a for i in range(interior))
            yield HVector((a, *mid, a))


@dataclass(frozen=True)
class PartitionedGraph:
    """A graph together with its two named vertex classes and a note about
    how the class size was rounded."""

    graph: Graph
    a_vertices: tuple[int, ...]
    b_vertices: tuple[int, ...]
    rounding_note: str

    @property
    def n(self) -> int:
        return self.graph.n


def lower_bound_graph(n: int, r: int, k: int, gamma: float) -> PartitionedGraph:
    """The extremal host: an independent set A plus a dominating class B.

    B has round((1-gamma) * (1-(k-1)/r) * n) vertices; every pair except
    A-internal pairs is an edge, so the minimum degree |B| is achieved on A.
    Vertex layout: B first (ids 0..|B|-1), then A.
    """
    if n % r != 0:
        raise ValueError(f"n must be divisible by r, got n={n}, r={r}")
    if not 0 < gamma < 1:
        raise ValueError("gamma must lie strictly between 0 and 1")
    if not 2 <= k <= r:
        raise ValueError(f"need 2 <= k <= r, got k={k}, r={r}")
    exact = (1 - gamma) * (1 - (k - 1) / r) * n
    b_size = int(math.floor(exact + 0.5))
    if b_size < 1:
        raise ValueError("class B would be empty; increase n or decrease gamma")
    if b_size >= n:
        raise ValueError("class B would swallow the whole graph")
    b = tuple(range(b_size))
    a = tuple(range(b_size, n))
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if u < b_size]
    note = f"|B| = round({exact:.6f}) = {b_size} (nearest integer, half away from zero)"
    return PartitionedGraph(Graph(n, edges), a, b, note)


def _chromatic_number(h: Graph) -> int:
    for colors in range(1, h.n + 1):
        if _colorable(h, colors):
            return colors
    raise AssertionError("unreachable: every graph is n-colorable")


def _colorable(h: Graph, colors: int) -> bool:
    assignment = [-1] * h.n
    order = sorted(range(h.n), key=h.degree, reverse=True)

    def place(i: int, used: int) -> bool:
        if i == h.n:
            return True
        v = order[i]
        forbidden = 0
        for u in range(h.n):
            if assignment[u] >= 0 and h.has_edge(u, v):
                forbidden |= 1 << assignment[u]
        # Symmetry pruning: allow at most one brand-new color.
        limit = min(colors, used + 1)
        for c in range(limit):
            if forbidden >> c & 1:
                continue
            assignment[v] = c
            if place(i + 1, max(used, c + 1)):
                return True
            assignment[v] = -1
        return False

    return place(0, 0)


def _min_color_class(h: Graph, chi: int) -> int:
    """Smallest color-class size over all proper colorings with exactly chi
    colors. Enumerates colorings with canonical color introduction so each
    partition into classes is visited once."""
    assignment = [-1] * h.n
    best = h.n

    def place(v: int, used: int) -> None:
        nonlocal best
        if v == h.n:
            if used == chi:
                sizes = [0] * chi
                for c in assignment:
                    sizes[c] += 1
                best = min(best, min(sizes))
            return
        if used + (h.n - v) < chi:
            return  # cannot introduce enough colors anymore
        forbidden = 0
        for u in range(v):
            if h.has_edge(u, v):
                forbidden |= 1 << assignment[u]
        limit = min(chi, used + 1)
        for c in range(limit):
            if forbidden >> c & 1:
                continue
            assignment[v] = c
            place(v + 1, max(used, c + 1))
            assignment[v] = -1

    place(0, 0)
    return best


def chi_cr(h: Graph) -> Fraction:
    """Critical chromatic ratio (chi - 1) * n / (n - sigma), where sigma is
    the smallest color-class size over all proper chi-colorings.

    Exact rational output; brute-force chromatic search capped at 16
    vertices. Edgeless graphs are rejected: chi = 1 forces sigma = n and
    the ratio degenerates to 0/0.
    """
    if h.n > 16:
        raise ValueError("chi_cr is brute force and capped at 16 vertices")
    if h.edge_count == 0:
        raise ValueError("chi_cr is undefined for edgeless graphs")
    chi = _chromatic_number(h)
    sigma = _min_color_class(h, chi)
    return Fraction((chi - 1) * h.n, h.n - sigma)
