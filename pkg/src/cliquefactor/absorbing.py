"""Absorbing structures: one gadget per template left, wired so the bases
land on a shared 4m-vertex set Z and everything else is pairwise disjoint.

Assembly embeds each gadget jointly: the deterministic side of the split
gadget must land in the first host and the random side in the second, on
the same ordered vertex set. The search places the anchored base first,
then hubs, then the clique layers, then chain interiors, restarting with a
fresh seeded candidate shuffle up to a budget. A failure is classified by
rerunning the deterministic side alone: if even that cannot embed, the
deterministic host is at fault, otherwise the random one.

Absorption takes any m-subset of the flexible half of Z, finds a template
matching avoiding the corresponding rights, and stitches the matched
gadget exit tilings into one clique partition of everything except the
absorbed set.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .gadgets import GadgetBlueprint, SplitGadget, gadget_exit_tiling, split_gadget, standard_gadget
from .graphs import Graph, union
from .templates import Template, matching_avoiding
from .tiling import Tiling, find_joint_embedding

__all__ = [
    "GadgetEmbedding",
    "AbsorbingStructure",
    "AssemblyError",
    "assemble_absorbing_structure",
    "absorb",
    "GreedyEmbeddings",
    "greedy_disjoint_embeddings",
]

_SIZE_FACTOR = 125


class AssemblyError(RuntimeError):
    """Raised when some gadget cannot be embedded; stage is "det" when the
    deterministic host lacks the gadget outright and "rand" when only the
    random side failed."""

    def __init__(self, stage: str, index: int, message: str) -> None:
        super().__init__(message)
        self.stage = stage
        self.index = index


@dataclass(frozen=True)
class GadgetEmbedding:
    """A gadget placed in the host: image[v] is the host vertex carrying
    gadget vertex v."""

    blueprint: GadgetBlueprint
    image: tuple[int, ...]

    @property
    def base_image(self) -> tuple[int, ...]:
        return tuple(self.image[w] for w in self.blueprint.base)

    @property
    def off_base_image(self) -> tuple[int, ...]:
        base = set(self.blueprint.base)
        return tuple(
            self.image[v] for v in range(self.blueprint.n) if v not in base
        )


@dataclass(frozen=True)
class AbsorbingStructure:
    """3m embedded gadgets over the shared set Z = Z1 + Z2; Z1 is the
    flexible half. verification carries the template's checking mode so a
    sampled certificate stays visible downstream."""

    template: Template
    z1: tuple[int, ...]
    z2: tuple[int, ...]
    embeddings: tuple[GadgetEmbedding, ...]
    host_det: Graph
    host_rand: Graph
    r: int
    k: int
    t_star: int
    verification: str

    @property
    def m(self) -> int:
        return self.template.m

    @property
    def z(self) -> tuple[int, ...]:
        """Host vertex of every template right, in right order."""
        return self.z1 + self.z2

    @property
    def flexible(self) -> tuple[int, ...]:
        return self.z1

    @property
    def vertices(self) -> tuple[int, ...]:
        out = set(self.z)
        for emb in self.embeddings:
            out.update(emb.image)
        return tuple(sorted(out))


def _assembly_order(bp: GadgetBlueprint) -> list[int]:
    """Placement order: anchored base, hubs, clique layers, then the chain
    interiors."""
    order = list(bp.base) + list(bp.hubs)
    for row in bp.layer_vertices:
        order.extend(row)
    placed = set(order)
    order.extend(v for v in range(bp.n) if v not in placed)
    return order


def assemble_absorbing_structure(
    host_det: Graph,
    host_rand: Graph,
    template: Template,
    z1: Sequence[int],
    z2: Sequence[int],
    r: int,
    k: int,
    seed: int = 0,
    t_star: int = 1,
    restarts: int = 8,
    attempt_budget: int = 200_000,
) -> AbsorbingStructure:
    """Embed one gadget per template left with bases on Z = z1 + z2.

    z1 and z2 each hold 2m distinct host vertices; gadget i's base lands on
    the z-positions of left i's template neighborhood in sorted order. Off
    base images avoid Z and each other. The host must have room for the
    planned structure and a warning is issued below three times that size.
    """
    if host_det.n != host_rand.n:
        raise ValueError("hosts must share a vertex set")
    m = template.m
    z1 = tuple(z1)
    z2 = tuple(z2)
    if len(z1) != 2 * m or len(z2) != 2 * m:
        raise ValueError(f"z1 and z2 must each hold {2 * m} vertices")
    z = z1 + z2
    if len(set(z)) != 4 * m:
        raise ValueError("z vertices must be distinct")
    for v in z:
        if not 0 <= v < host_det.n:
            raise ValueError(f"z vertex {v} out of range")

    by_width: dict[int, tuple[GadgetBlueprint, SplitGadget]] = {}
    blueprints: list[GadgetBlueprint] = []
    for row in template.adjacency:
        s = len(row)
        if s == 0:
            raise ValueError("template has an isolated left vertex")
        if s not in by_width:
            bp = standard_gadget(r, k, s, t_star=t_star)
            by_width[s] = (bp, split_gadget(bp))
        blueprints.append(by_width[s][0])

    planned = 4 * m + sum(bp.n - bp.s for bp in blueprints)
    bound = _SIZE_FACTOR * t_star * r * r * m
    if planned >= bound:
        raise AssertionError(
            f"planned structure on {planned} vertices breaks the "
            f"{bound}-vertex size bound"
        )
    if host_det.n < planned:
        raise ValueError(
            f"host on {host_det.n} vertices cannot hold a structure on {planned}"
        )
    if host_det.n < 3 * planned:
        warnings.warn(
            f"host on {host_det.n} vertices is tight for a structure on "
            f"{planned}; embedding may fail",
            stacklevel=2,
        )

    rng = np.random.default_rng(seed)
    used = 0
    for v in z:
        used |= 1 << v
    full = (1 << host_det.n) - 1
    embeddings: list[GadgetEmbedding] = []

    for i, row in enumerate(template.adjacency):
        bp, split = by_width[len(row)]
        anchors = {bp.base[col]: z[j] for col, j in enumerate(row)}
        order = _assembly_order(bp)
        allowed = full & ~used
        image = None
        rand_blocked = False
        for _ in range(restarts + 1):
            perm = [int(v) for v in rng.permutation(host_det.n)]
            joint = find_joint_embedding(
                split.deterministic_side,
                split.random_side,
                host_det,
                host_rand,
                anchors=anchors,
                allowed=allowed,
                order=order,
                candidate_order=perm,
                node_budget=attempt_budget,
            )
            if joint.image is not None:
                image = joint.image
                break
        if image is None:
            det_only = find_joint_embedding(
                split.deterministic_side,
                Graph(bp.n, []),
                host_det,
                host_rand,
                anchors=anchors,
                allowed=allowed,
                order=order,
                candidate_order=[int(v) for v in rng.permutation(host_det.n)],
                node_budget=attempt_budget,
            )
            if det_only.image is None:
                raise AssemblyError(
                    "det", i, f"no deterministic-side embedding for gadget {i}"
                )
            raise AssemblyError(
                "rand", i, f"random-side edges missing for gadget {i}"
            )
        embeddings.append(GadgetEmbedding(bp, image))
        base = set(bp.base)
        for v in range(bp.n):
            if v not in base:
                used |= 1 << image[v]

    return AbsorbingStructure(
        template=template,
        z1=z1,
        z2=z2,
        embeddings=tuple(embeddings),
        host_det=host_det,
        host_rand=host_rand,
        r=r,
        k=k,
        t_star=t_star,
        verification=template.verification,
    )


def absorb(a: AbsorbingStructure, z_bar: Sequence[int]) -> Tiling:
    """Clique partition of the structure minus an m-subset of its flexible
    set.

    Finds the template matching that avoids the rights of z_bar, then maps
    the matched exit tiling of every gadget through its embedding. The
    result is hard-asserted to partition the structure's vertices minus
    z_bar into cliques of the host union before being returned.
    """
    z_bar = tuple(sorted(set(z_bar)))
    if len(z_bar) != a.m:
        raise ValueError(f"need exactly m={a.m} vertices, got {len(z_bar)}")
    position = {v: j for j, v in enumerate(a.z1)}
    removed = set()
    for v in z_bar:
        if v not in position:
            raise ValueError(f"vertex {v} is not in the flexible set")
        removed.add(position[v])
    pairs = matching_avoiding(a.template, removed)

    tiles: list[tuple[int, ...]] = []
    for left, right in pairs:
        emb = a.embeddings[left]
        row = a.template.adjacency[left]
        column = row.index(right) + 1
        for tile in gadget_exit_tiling(emb.blueprint, column):
            tiles.append(tuple(sorted(emb.image[v] for v in tile)))

    host = union(a.host_det, a.host_rand)
    tiling = Tiling(tuple(tiles), host)
    tiling.validate()
    expected = set(a.vertices) - set(z_bar)
    if set(tiling.covered) != expected:
        raise AssertionError(
            "absorption did not cover the structure minus the absorbed set"
        )
    return tiling


@dataclass(frozen=True)
class GreedyEmbeddings:
    """Embeddings found by the multi-round greedy; served pairs a task
    index with the full pattern-to-host image."""

    served: tuple[tuple[int, tuple[int, ...]], ...]
    unserved: tuple[int, ...]


def greedy_disjoint_embeddings(
    host_rand: Graph,
    tasks: Sequence[tuple[Graph, Mapping[int, int], Sequence[tuple[int, ...]]]],
    rounds: int = 4,
    seed: int = 0,
) -> GreedyEmbeddings:
    """Serve embedding tasks greedily over several exposure rounds.

    Each task is (pattern, anchors, candidates): anchors pin pattern
    vertices to host vertices, and each candidate lists host vertices for
    the free pattern vertices in ascending pattern order. A candidate
    serves its task when those host vertices are still unused and every
    pattern edge with a free endpoint is present in host_rand. Candidate
    lists are cut into one contiguous batch per round; every round walks
    the unserved tasks in a fresh seeded order and tries only that round's
    batch, which keeps early tasks from draining later tasks' candidates.
    Edges entirely between anchored vertices are the caller's concern.
    """
    if rounds < 1:
        raise ValueError("need at least one round")
    rng = np.random.default_rng(seed)
    free_vertices: list[list[int]] = []
    for pattern, anchors, _ in tasks:
        for pv, hv in anchors.items():
            if not 0 <= pv < pattern.n:
                raise ValueError(f"anchor pattern vertex {pv} out of range")
            if not 0 <= hv < host_rand.n:
                raise ValueError(f"anchor host vertex {hv} out of range")
        free_vertices.append([v for v in range(pattern.n) if v not in anchors])

    batches: list[list[Sequence[tuple[int, ...]]]] = []
    for _, _, candidates in tasks:
        split = np.array_split(np.arange(len(candidates)), rounds)
        batches.append([[candidates[int(i)] for i in part] for part in split])

    used = 0
    served: dict[int, tuple[int, ...]] = {}
    for round_idx in range(rounds):
        pending = [t for t in range(len(tasks)) if t not in served]
        order = [pending[int(i)] for i in rng.permutation(len(pending))]
        for t in order:
            pattern, anchors, _ = tasks[t]
            free = free_vertices[t]
            for cand in batches[t][round_idx]:
                if len(cand) != len(free):
                    raise ValueError(
                        f"task {t}: candidate of length {len(cand)}, "
                        f"expected {len(free)}"
                    )
                image = dict(anchors)
                image.update(zip(free, cand))
                ok = len(set(cand)) == len(cand)
                if ok:
                    for hv in cand:
                        if used >> hv & 1 or hv in anchors.values():
                            ok = False
                            break
                if ok:
                    for u, v in pattern.edges():
                        if u in anchors and v in anchors:
                            continue
                        if not host_rand.has_edge(image[u], image[v]):
                            ok = False
                            break
                if ok:
                    served[t] = tuple(image[v] for v in range(pattern.n))
                    for hv in cand:
                        used |= 1 << hv
                    break
    return GreedyEmbeddings(
        tuple((t, served[t]) for t in sorted(served)),
        tuple(t for t in range(len(tasks)) if t not in served),
    )
