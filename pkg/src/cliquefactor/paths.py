"""Chains of decorated graphs glued end to end, and their exit tilings.

A vector of carriers on r+1 vertices each becomes a path by identifying the
second distinguished vertex of one copy with the first distinguished vertex
of the next, so t segments give t*r + 1 vertices. When every segment fits
inside the complete graph minus its distinguished edge, the completed path
admits two clique tilings, one missing each endpoint.
"""

from __future__ import annotations

from dataclasses import dataclass

from .constructions import HVector
from .graphs import DecoratedGraph, Graph, _edge_difference_complement

__all__ = [
    "HPath",
    "build_h_path",
    "complement_vector",
    "completed_path_graph",
    "path_exit_tilings",
]


@dataclass(frozen=True)
class HPath:
    """A glued chain of decorated segments.

    segments[i] holds the i-th carrier together with its vertex map into
    the path: map[j] is the path vertex playing the carrier's local vertex
    j. endpoints are the unshared distinguished vertices of the first and
    last segments.
    """

    graph: Graph
    endpoints: tuple[int, int]
    segments: tuple[tuple[DecoratedGraph, tuple[int, ...]], ...]

    def __len__(self) -> int:
        return len(self.segments)

    @property
    def entries(self) -> HVector:
        return HVector(tuple(seg for seg, _ in self.segments))


def build_h_path(v: HVector) -> HPath:
    """Glue the entries of v into a path.

    Fresh vertices are numbered in segment order, local index order, except
    that each segment's w1 reuses the previous segment's w2 image. With t
    entries on r+1 vertices each, the result has t*r + 1 vertices.
    """
    sizes = {entry.graph.n for entry in v.entries}
    if len(sizes) != 1:
        raise ValueError("all entries must have the same vertex count")
    maps: list[tuple[int, ...]] = []
    edges: list[tuple[int, int]] = []
    next_id = 0
    prev_w2_image = None
    for entry in v.entries:
        local_map = [-1] * entry.graph.n
        for local in range(entry.graph.n):
            if local == entry.w1 and prev_w2_image is not None:
                local_map[local] = prev_w2_image
            else:
                local_map[local] = next_id
                next_id += 1
        for a, b in entry.graph.edges():
            ia, ib = local_map[a], local_map[b]
            edges.append((min(ia, ib), max(ia, ib)))
        maps.append(tuple(local_map))
        prev_w2_image = local_map[entry.w2]
    graph = Graph(next_id, sorted(set(edges)))
    first_entry = v.entries[0]
    endpoints = (maps[0][first_entry.w1], prev_w2_image)
    return HPath(graph, endpoints, tuple(zip(v.entries, maps)))


def complement_vector(v: HVector) -> HVector:
    """Entrywise complement inside the one-edge-deleted complete carrier.

    Overlaying the path of v with the path of its complement reproduces
    every edge of the fully completed path: each segment's union is the
    complete graph minus the distinguished pair, plus that pair itself when
    the entry already carried it.
    """
    return HVector(tuple(_edge_difference_complement(entry) for entry in v.entries))


def completed_path_graph(p: HPath) -> Graph:
    """The path with every segment filled in to the complete graph minus
    its distinguished edge (segments that already join their distinguished
    pair keep that edge, giving the full complete graph there)."""
    edges = set(p.graph.edges())
    for entry, vmap in p.segments:
        w1_img, w2_img = vmap[entry.w1], vmap[entry.w2]
        skip = frozenset((w1_img, w2_img))
        m = len(vmap)
        for a in range(m):
            for b in range(a + 1, m):
                ia, ib = vmap[a], vmap[b]
                if frozenset((ia, ib)) == skip:
                    continue
                edges.add((min(ia, ib), max(ia, ib)))
    return Graph(p.graph.n, sorted(edges))


def path_exit_tilings(
    p: HPath,
) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    """Two clique tilings of the completed path, each missing one endpoint.

    The first family takes every segment minus its w1 image and partitions
    V minus endpoint a; the second takes every segment minus its w2 image
    and partitions V minus endpoint b. Each part is a clique because a
    complete-minus-one-edge graph loses its defect once either endpoint of
    the missing edge is removed.
    """
    for entry, _ in p.segments:
        if not entry.is_kminus_carrier():
            raise ValueError(
                "exit tilings need every segment to fit the complete graph "
                "minus its distinguished edge"
            )
    avoid_a = tuple(
        tuple(sorted(set(vmap) - {vmap[entry.w1]})) for entry, vmap in p.segments
    )
    avoid_b = tuple(
        tuple(sorted(set(vmap) - {vmap[entry.w2]})) for entry, vmap in p.segments
    )
    return avoid_a, avoid_b
