"""Absorbing gadgets: r rows by s columns of segment chains meeting s clique
layers, with r-1 shared hubs and an s-vertex base.

Row i, column j holds a chain whose layer-side endpoint is v_{i,j} and whose
other endpoint is u_{i,j}. For every row past the first, the s endpoints
u_{i,*} are identified into a single hub; the first row's endpoints stay
separate and form the base. Each column's layer vertices {v_{1,j}..v_{r,j}}
carry a copy of the layer graph. The assembled graph completes every
segment to the complete graph minus its distinguished edge (keeping that
edge where an entry already had it), which is the clique-side view used by
the exit tilings.

Vertex layout, fixed for reproducibility: base w_1..w_s first (ids 0..s-1),
hubs u_2..u_r next, then per (row, column) in row-major order the layer
vertex v_{i,j} followed by that chain's interior vertices in chain order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .constructions import CaseTag, HVector, case_tag, h_det, h_det_complement_parts, h_vectors
from .graphs import Graph, complete
from .paths import HPath, build_h_path

__all__ = [
    "GadgetBlueprint",
    "build_gadget",
    "standard_gadget",
    "gadget_exit_tiling",
    "SplitGadget",
    "split_gadget",
]


@dataclass(frozen=True)
class GadgetBlueprint:
    """Assembled gadget with full identification bookkeeping.

    paths[i][j] is the vector for row i+1, column j+1; path_maps[i][j] maps
    that chain's own vertex ids into the gadget. layer_vertices[i][j] is
    v_{i+1,j+1}. case carries the (r, k) tag when the gadget was built from
    the standard vectors, and None for hand-rolled blueprints.
    """

    r: int
    s: int
    h_top: Graph
    paths: tuple[tuple[HVector, ...], ...]
    assembled: Graph
    base: tuple[int, ...]
    hubs: tuple[int, ...]
    layer_vertices: tuple[tuple[int, ...], ...]
    paths_built: tuple[tuple[HPath, ...], ...]
    path_maps: tuple[tuple[tuple[int, ...], ...], ...]
    case: CaseTag | None = None

    @property
    def n(self) -> int:
        return self.assembled.n

    def layer_column(self, j: int) -> tuple[int, ...]:
        """Layer vertices of column j (1-based), rows 1..r."""
        return tuple(self.layer_vertices[i][j - 1] for i in range(self.r))


def build_gadget(
    r: int,
    s: int,
    paths: tuple[tuple[HVector, ...], ...] | list[list[HVector]],
    h_top: Graph,
    case: CaseTag | None = None,
) -> GadgetBlueprint:
    """Assemble the gadget from an r x s matrix of segment vectors.

    Every vector entry must live on r+1 vertices and h_top on r vertices.
    The vertex count is checked against the identification formula: the
    chains' sizes summed, minus (s-1) for each of the r-1 identified hubs.
    """
    if h_top.n != r:
        raise ValueError(f"layer graph must have {r} vertices, got {h_top.n}")
    matrix = tuple(tuple(row) for row in paths)
    if len(matrix) != r or any(len(row) != s for row in matrix):
        raise ValueError(f"need an {r} x {s} matrix of vectors")
    for row in matrix:
        for vec in row:
            if vec.r != r:
                raise ValueError(
                    f"vector entries on {vec.r + 1} vertices do not fit r={r}"
                )

    base = tuple(range(s))
    hubs = tuple(range(s, s + r - 1))
    next_id = s + r - 1
    built: list[list[HPath]] = []
    maps: list[list[tuple[int, ...]]] = []
    layer: list[list[int]] = []
    edges: set[tuple[int, int]] = set()

    for i in range(r):
        built.append([])
        maps.append([])
        layer.append([])
        for j in range(s):
            path = build_h_path(matrix[i][j])
            v_end, u_end = path.endpoints
            relabel = [-1] * path.graph.n
            relabel[v_end] = next_id
            layer[i].append(next_id)
            next_id += 1
            relabel[u_end] = base[j] if i == 0 else hubs[i - 1]
            for local in range(path.graph.n):
                if relabel[local] == -1:
                    relabel[local] = next_id
                    next_id += 1
            built[i].append(path)
            maps[i].append(tuple(relabel))
            # Complete each segment to the full clique minus its
            # distinguished pair, keeping entry edges (which may include
            # that pair).
            for entry, vmap in path.segments:
                seg_global = [relabel[x] for x in vmap]
                w1g = relabel[vmap[entry.w1]]
                w2g = relabel[vmap[entry.w2]]
                m = len(seg_global)
                for aa in range(m):
                    for bb in range(aa + 1, m):
                        ga, gb = seg_global[aa], seg_global[bb]
                        if {ga, gb} == {w1g, w2g}:
                            continue
                        edges.add((min(ga, gb), max(ga, gb)))
            for u, v in path.graph.edges():
                ga, gb = relabel[u], relabel[v]
                edges.add((min(ga, gb), max(ga, gb)))

    for j in range(s):
        column = [layer[i][j] for i in range(r)]
        for u, v in h_top.edges():
            ga, gb = column[u], column[v]
            edges.add((min(ga, gb), max(ga, gb)))

    expected = sum(
        len(matrix[i][j]) * r + 1 for i in range(r) for j in range(s)
    ) - (r - 1) * (s - 1)
    if next_id != expected:
        raise AssertionError(
            f"identification bookkeeping off: built {next_id}, expected {expected}"
        )
    assembled = Graph(next_id, sorted(edges))
    return GadgetBlueprint(
        r=r,
        s=s,
        h_top=h_top,
        paths=matrix,
        assembled=assembled,
        base=base,
        hubs=hubs,
        layer_vertices=tuple(tuple(row) for row in layer),
        paths_built=tuple(tuple(row) for row in built),
        path_maps=tuple(tuple(row) for row in maps),
        case=case,
    )


def standard_gadget(r: int, k: int, s: int, t_star: int = 1) -> GadgetBlueprint:
    """The gadget for parameters (r, k): every cell carries the first
    vector of h_vectors(r, k), and the layer graph is the complete graph."""
    vector = next(iter(h_vectors(r, k, t_star=t_star)))
    matrix = tuple(tuple(vector for _ in range(s)) for _ in range(r))
    return build_gadget(r, s, matrix, complete(r), case=case_tag(r, k))


def _path_tiles(g: GadgetBlueprint, i: int, j: int, avoid_u: bool) -> list[tuple[int, ...]]:
    """Exit tiles of the chain at (row i, column j), avoiding the hub-side
    endpoint when avoid_u is set, the layer-side endpoint otherwise.

    Chain orientation: the layer endpoint is the w1 image of the first
    segment, the hub endpoint the w2 image of the last, so avoiding u means
    dropping each segment's w2 image and avoiding v means dropping each
    segment's w1 image.
    """
    path = g.paths_built[i][j]
    relabel = g.path_maps[i][j]
    tiles = []
    for entry, vmap in path.segments:
        drop = vmap[entry.w2] if avoid_u else vmap[entry.w1]
        tiles.append(
            tuple(sorted(relabel[x] for x in set(vmap) if x != drop))
        )
    return tiles


def gadget_exit_tiling(g: GadgetBlueprint, j: int) -> tuple[tuple[int, ...], ...]:
    """Disjoint r-cliques of the assembled gadget covering (V minus base)
    plus w_j.

    Column j's chains tile away from their layer endpoints, so they cover
    w_j and the hubs while the column's layer clique picks up the layer
    vertices; every other column tiles away from its hub-side endpoints,
    leaving the other base vertices untouched.
    """
    if not 1 <= j <= g.s:
        raise ValueError(f"column index {j} out of range 1..{g.s}")
    col = j - 1
    tiles: list[tuple[int, ...]] = []
    for i in range(g.r):
        for jj in range(g.s):
            tiles.extend(_path_tiles(g, i, jj, avoid_u=(jj != col)))
    tiles.append(tuple(sorted(g.layer_column(j))))
    return tuple(tiles)


@dataclass(frozen=True)
class SplitGadget:
    """Edge-disjoint halves of the assembled gadget: the deterministic side
    keeps the entry edges plus a deterministic-pattern layer per column; the
    random side gets each segment's carrier complement plus the clique
    complement of the layer pattern."""

    deterministic_side: Graph
    random_side: Graph


def split_gadget(g: GadgetBlueprint) -> SplitGadget:
    """Split the assembled gadget into its deterministic and random sides.

    Requires a case-tagged blueprint with a complete layer graph. The two
    sides partition the assembled edge set: per segment, entry edges versus
    the complement within the one-edge-deleted clique; per layer column,
    the multipartite pattern versus its within-clique complement.
    """
    if g.case is None:
        raise ValueError("split needs a case-tagged blueprint")
    if g.h_top != complete(g.r):
        raise ValueError("split is defined for complete layer graphs")
    r, k = g.case.r, g.case.k
    det_edges: set[tuple[int, int]] = set()
    rand_edges: set[tuple[int, int]] = set()

    for i in range(r):
        for j in range(g.s):
            path = g.paths_built[i][j]
            relabel = g.path_maps[i][j]
            for entry, vmap in path.segments:
                w1g = relabel[vmap[entry.w1]]
                w2g = relabel[vmap[entry.w2]]
                seg_global = [relabel[x] for x in vmap]
                present = set()
                for u, v in entry.graph.edges():
                    ga, gb = relabel[vmap[u]], relabel[vmap[v]]
                    edge = (min(ga, gb), max(ga, gb))
                    det_edges.add(edge)
                    present.add(edge)
                m = len(seg_global)
                for aa in range(m):
                    for bb in range(aa + 1, m):
                        ga, gb = seg_global[aa], seg_global[bb]
                        if {ga, gb} == {w1g, w2g}:
                            continue
                        edge = (min(ga, gb), max(ga, gb))
                        if edge not in present:
                            rand_edges.add(edge)

    pattern = h_det(r, k)
    parts = h_det_complement_parts(r, k)
    for j in range(1, g.s + 1):
        column = g.layer_column(j)
        for u, v in pattern.edges():
            ga, gb = column[u], column[v]
            det_edges.add((min(ga, gb), max(ga, gb)))
        for part in parts:
            for ai in range(len(part)):
                for bi in range(ai + 1, len(part)):
                    ga, gb = column[part[ai]], column[part[bi]]
                    rand_edges.add((min(ga, gb), max(ga, gb)))

    n = g.assembled.n
    return SplitGadget(Graph(n, sorted(det_edges)), Graph(n, sorted(rand_edges)))
