"""Finite simple graphs with bitmask adjacency, embedding counting, and clique enumeration.

The Graph class stores one Python integer per vertex as an adjacency bitmask,
which keeps the labelled-embedding counter and the clique enumerator fast
without any compiled extension. Graphs are immutable once built; every
operation here returns a fresh value.

    >>> g = complete_multipartite((3, 3, 3))
    >>> g.edge_count
    27
    >>> count_labelled_embeddings(complete(3), complete(4)).count
    24
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

__all__ = [
    "Graph",
    "DecoratedGraph",
    "Embedding",
    "EmbeddingCount",
    "complete",
    "empty",
    "complete_multipartite",
    "blow_up",
    "union",
    "complement",
    "complement_within_kminus",
    "kminus",
    "count_labelled_embeddings",
    "enumerate_cliques",
    "graph_to_text",
    "graph_from_text",
]

_EXACT_BUDGET = 2**63 - 1


class Graph:
    """An immutable simple undirected graph on vertices 0..n-1.

    Adjacency is a tuple of integer bitmasks: bit v of adj[u] is set when
    uv is an edge. The masks are the workhorse for every counting loop.
    """

    __slots__ = ("n", "adj", "_edge_count")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        masks = [0] * n
        count = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"loop at vertex {u} is not allowed")
            bit_v = 1 << v
            if not masks[u] & bit_v:
                masks[u] |= bit_v
                masks[v] |= 1 << u
                count += 1
        self.n = n
        self.adj = tuple(masks)
        self._edge_count = count

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, u: int) -> int:
        return self.adj[u].bit_count()

    def min_degree(self) -> int:
        if self.n == 0:
            return 0
        return min(m.bit_count() for m in self.adj)

    def neighbors(self, u: int) -> Iterator[int]:
        return _iter_bits(self.adj[u])

    def edges(self) -> Iterator[tuple[int, int]]:
        """Yield edges as (u, v) with u < v, in lexicographic order."""
        for u in range(self.n):
            m = self.adj[u] >> (u + 1) << (u + 1)
            for v in _iter_bits(m):
                yield (u, v)

    def induced(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph, relabelled to 0..len(vertices)-1 in the given order."""
        index = {v: i for i, v in enumerate(vertices)}
        if len(index) != len(vertices):
            raise ValueError("duplicate vertices in induced-subgraph request")
        es = []
        for i, u in enumerate(vertices):
            for j in range(i + 1, len(vertices)):
                if self.has_edge(u, vertices[j]):
                    es.append((i, j))
        return Graph(len(vertices), es)

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        mask = 0
        for v in vs:
            mask |= 1 << v
        return all(self.adj[v] & mask == mask ^ (1 << v) for v in vs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count})"


def _iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def complete(n: int) -> Graph:
    full = (1 << n) - 1
    g = Graph.__new__(Graph)
    g.n = n
    g.adj = tuple(full ^ (1 << u) for u in range(n))
    g._edge_count = n * (n - 1) // 2
    return g


def empty(n: int) -> Graph:
    g = Graph.__new__(Graph)
    g.n = n
    g.adj = (0,) * n
    g._edge_count = 0
    return g


def complete_multipartite(part_sizes: Sequence[int]) -> Graph:
    """Complete multipartite graph; vertices grouped consecutively by part.

    Part 1 occupies ids 0..part_sizes[0]-1, part 2 the next block, and so
    on. Two vertices are adjacent exactly when they lie in different parts.
    """
    if len(part_sizes) == 0:
        raise ValueError("need at least one part")
    if any(s < 1 for s in part_sizes):
        raise ValueError("every part must have size at least 1")
    n = sum(part_sizes)
    full = (1 << n) - 1
    masks = []
    start = 0
    for size in part_sizes:
        part_mask = ((1 << size) - 1) << start
        for u in range(start, start + size):
            masks.append(full ^ part_mask)
        start += size
    g = Graph.__new__(Graph)
    g.n = n
    g.adj = tuple(masks)
    g._edge_count = sum(m.bit_count() for m in masks) // 2
    return g


def blow_up(j: Graph, sizes: Sequence[int]) -> Graph:
    """Replace vertex i of j by an independent set of sizes[i] vertices.

    Two new vertices are adjacent exactly when their originals were. Blocks
    are laid out consecutively in vertex order of j.
    """
    if len(sizes) != j.n:
        raise ValueError(f"need {j.n} sizes, got {len(sizes)}")
    if any(s < 0 for s in sizes):
        raise ValueError("sizes must be nonnegative")
    starts = []
    total = 0
    for s in sizes:
        starts.append(total)
        total += s
    block_masks = []
    for i in range(j.n):
        m = 0
        for nb in _iter_bits(j.adj[i]):
            m |= ((1 << sizes[nb]) - 1) << starts[nb]
        block_masks.append(m)
    masks = []
    for i in range(j.n):
        masks.extend([block_masks[i]] * sizes[i])
    g = Graph.__new__(Graph)
    g.n = total
    g.adj = tuple(masks)
    g._edge_count = sum(m.bit_count() for m in masks) // 2
    return g


def union(g1: Graph, g2: Graph) -> Graph:
    """Edge-set union of two graphs on the same vertex set."""
    if g1.n != g2.n:
        raise ValueError(f"vertex count mismatch: {g1.n} vs {g2.n}")
    masks = tuple(a | b for a, b in zip(g1.adj, g2.adj))
    g = Graph.__new__(Graph)
    g.n = g1.n
    g.adj = masks
    g._edge_count = sum(m.bit_count() for m in masks) // 2
    return g


def complement(g: Graph) -> Graph:
    """Simple-graph complement on the same vertex set."""
    full = (1 << g.n) - 1
    masks = tuple((full ^ m) & ~(1 << u) for u, m in enumerate(g.adj))
    out = Graph.__new__(Graph)
    out.n = g.n
    out.adj = masks
    out._edge_count = g.n * (g.n - 1) // 2 - g.edge_count
    return out


@dataclass(frozen=True)
class DecoratedGraph:
    """A graph with an ordered pair of distinguished vertices.

    The pair (w1, w2) marks the two special vertices used when chaining
    copies into paths: consecutive copies get glued by identifying the w2
    of one with the w1 of the next.
    """

    graph: Graph
    distinguished: tuple[int, int]

    def __post_init__(self) -> None:
        w1, w2 = self.distinguished
        if w1 == w2:
            raise ValueError("distinguished vertices must be distinct")
        if not (0 <= w1 < self.graph.n and 0 <= w2 < self.graph.n):
            raise ValueError("distinguished vertex out of range")

    @property
    def w1(self) -> int:
        return self.distinguished[0]

    @property
    def w2(self) -> int:
        return self.distinguished[1]

    @property
    def distinguished_adjacent(self) -> bool:
        return self.graph.has_edge(*self.distinguished)

    def is_kminus_carrier(self) -> bool:
        """True when the distinguished pair is a non-edge, so the graph fits
        inside the complete graph minus that one edge."""
        return not self.distinguished_adjacent


def kminus(r: int, distinguished: tuple[int, int] | None = None) -> DecoratedGraph:
    """Complete graph on r+1 vertices minus one edge, as a decorated graph.

    The removed edge joins the distinguished pair, by default (0, r).
    """
    if r < 1:
        raise ValueError("need r >= 1")
    w1, w2 = distinguished if distinguished is not None else (0, r)
    g = complete(r + 1)
    edges = [(u, v) for u, v in g.edges() if {u, v} != {w1, w2}]
    return DecoratedGraph(Graph(r + 1, edges), (w1, w2))


def complement_within_kminus(f: DecoratedGraph) -> DecoratedGraph:
    """Complement a decorated graph inside the one-edge-deleted complete graph.

    The result lives on the same vertex set, keeps the same distinguished
    pair, and carries exactly the edges of the complete graph that f lacks,
    except for the distinguished pair itself which stays a non-edge on both
    sides. Requires the distinguished pair to be a non-edge of f; applying
    the operation twice returns the original edge set.
    """
    if f.distinguished_adjacent:
        raise ValueError("distinguished pair must be a non-edge of the input")
    return _edge_difference_complement(f)


def _edge_difference_complement(f: DecoratedGraph) -> DecoratedGraph:
    """Total version of the one-edge-deleted-complement, defined for any
    decorated graph: result edges are (complete minus the distinguished
    pair) minus f's edges. Internal helper; the public operation enforces
    the non-adjacency precondition."""
    n = f.graph.n
    w1, w2 = f.distinguished
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if {u, v} == {w1, w2}:
                continue
            if not f.graph.has_edge(u, v):
                edges.append((u, v))
    return DecoratedGraph(Graph(n, edges), f.distinguished)


@dataclass(frozen=True)
class Embedding:
    """An injective, edge-preserving map from a pattern into a host.

    image[i] is the host vertex assigned to pattern vertex i. The map is
    labelled: distinct pattern vertices go to distinct host vertices and
    every pattern edge must land on a host edge (extra host edges are fine).
    """

    pattern: Graph
    image: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.image) != self.pattern.n:
            raise ValueError("image length must match pattern size")
        if len(set(self.image)) != len(self.image):
            raise ValueError("embedding must be injective")

    def validate(self, host: Graph) -> bool:
        if any(not (0 <= x < host.n) for x in self.image):
            return False
        return all(
            host.has_edge(self.image[u], self.image[v])
            for u, v in self.pattern.edges()
        )


class EmbeddingCount(NamedTuple):
    count: int
    truncated: bool


def _static_order(pattern: Graph, anchored: Sequence[int]) -> list[int]:
    """Anchored vertices first, then repeatedly the vertex with the most
    already-ordered neighbors (ties to higher degree, then lower id)."""
    placed = list(anchored)
    placed_set = set(placed)
    rest = [v for v in range(pattern.n) if v not in placed_set]
    while rest:
        placed_mask = 0
        for v in placed:
            placed_mask |= 1 << v
        best = max(
            rest,
            key=lambda v: (
                (pattern.adj[v] & placed_mask).bit_count(),
                pattern.degree(v),
                -v,
            ),
        )
        placed.append(best)
        placed_set.add(best)
        rest.remove(best)
    return placed


def count_labelled_embeddings(
    pattern: Graph,
    host: Graph,
    anchors: Mapping[int, int] | None = None,
    budget: int | None = None,
) -> EmbeddingCount:
    """Count injective embeddings of pattern into host extending the anchors.

    Backtracks over pattern vertices in a connectivity-first static order,
    intersecting host adjacency bitmasks to enumerate candidates. Pattern
    vertices with no edges at all are not enumerated; they contribute a
    falling-factorial tail. When a budget is given and reached, the returned
    count equals the budget and the truncated flag is set.
    """
    cap = _EXACT_BUDGET if budget is None else budget
    if cap <= 0:
        return EmbeddingCount(0, True)
    anchors = dict(anchors or {})
    for pv, hv in anchors.items():
        if not (0 <= pv < pattern.n):
            raise ValueError(f"anchor pattern vertex {pv} out of range")
        if not (0 <= hv < host.n):
            raise ValueError(f"anchor host vertex {hv} out of range")
    if len(set(anchors.values())) != len(anchors):
        raise ValueError("anchor images must be distinct")
    # An anchored pattern edge whose image is a host non-edge kills every branch.
    for u, v in pattern.edges():
        if u in anchors and v in anchors and not host.has_edge(anchors[u], anchors[v]):
            return EmbeddingCount(0, False)
    if pattern.n - len(anchors) > host.n - len(anchors):
        return EmbeddingCount(0, False)

    order = _static_order(pattern, sorted(anchors))
    # Split off a tail of pattern-isolated vertices; they only scale the count.
    tail_len = 0
    while (
        tail_len < len(order)
        and order[-1 - tail_len] not in anchors
        and pattern.degree(order[-1 - tail_len]) == 0
    ):
        tail_len += 1
    core = order[: len(order) - tail_len]

    host_full = (1 << host.n) - 1
    back_masks: list[int] = []
    for idx, pv in enumerate(core):
        before = 0
        for prev in core[:idx]:
            before |= 1 << prev
        back_masks.append(pattern.adj[pv] & before)
    positions = {pv: i for i, pv in enumerate(core)}

    # Precompute the falling factorial for the isolated tail.
    tail_mult = 1
    avail = host.n - len(core)
    for i in range(tail_len):
        tail_mult *= avail - i
    if tail_mult <= 0 and tail_len > 0:
        return EmbeddingCount(0, False)

    total = 0
    truncated = False
    image = [0] * len(core)
    used = 0

    def candidates(idx: int) -> Iterator[int]:
        pv = core[idx]
        if pv in anchors:
            hv = anchors[pv]
            if used >> hv & 1:
                return
            mask = 1 << hv
        else:
            mask = host_full
        bm = back_masks[idx]
        for prev_pv in _iter_bits(bm):
            mask &= host.adj[image[positions[prev_pv]]]
            if not mask:
                return
        mask &= ~used
        yield from _iter_bits(mask)

    def dfs(idx: int) -> None:
        nonlocal total, truncated, used
        if truncated:
            return
        if idx == len(core):
            total += tail_mult
            if total >= cap:
                total = cap
                truncated = budget is not None
            return
        for hv in candidates(idx):
            image[idx] = hv
            used |= 1 << hv
            dfs(idx + 1)
            used &= ~(1 << hv)
            if truncated:
                return

    dfs(0)
    return EmbeddingCount(total, truncated)


def enumerate_cliques(g: Graph, r: int) -> list[tuple[int, ...]]:
    """All r-vertex cliques of g as sorted tuples, in lexicographic order."""
    if not (1 <= r <= g.n):
        if r > g.n:
            return []
        raise ValueError("clique size must be at least 1")
    out: list[tuple[int, ...]] = []
    stack: list[int] = []

    def extend(candidates: int, start: int) -> None:
        if len(stack) == r:
            out.append(tuple(stack))
            return
        m = candidates >> start << start
        for v in _iter_bits(m):
            stack.append(v)
            extend(candidates & g.adj[v], v + 1)
            stack.pop()

    extend((1 << g.n) - 1, 0)
    return out


# ---------------------------------------------------------------------------
# Text format: first non-comment line is the vertex count, then one `u v`
# pair per line with u < v; lines starting with `#` are ignored.
# ---------------------------------------------------------------------------


def graph_to_text(g: Graph, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(str(g.n))
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> Graph:
    n: int | None = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            n = int(line)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"malformed edge line: {raw!r}")
        u, v = int(parts[0]), int(parts[1])
        if not u < v:
            raise ValueError(f"edges must be written with u < v, got {raw!r}")
        if (u, v) in seen:
            raise ValueError(f"duplicate edge {u} {v}")
        seen.add((u, v))
        edges.append((u, v))
    if n is None:
        raise ValueError("missing vertex-count line")
    return Graph(n, edges)
