"""End-to-end perturbed tiling at desk scale.

The flow mirrors the constructive argument: split the random edges into
independent layers, sample a flexible vertex set, assemble an absorbing
structure whose flexible half is that set, almost-tile the rest, complete
the leftover into the flexible set, tile and peel the flexible residue so
exactly half the flexible vertices stay uncovered, then absorb.

Stage ids a failed run can report: partition, repair, flexible-set,
absorber, almost-tiling, completion, peel, absorb.  Failures are statuses,
never exceptions; only malformed arguments raise.

Arithmetic that keeps the stages consistent: the structure spans
planned(m) vertices with planned(m) = m (mod r) for the generated
templates, so the almost-tiled region R has |R| = -m (mod r) and every
greedy leftover Y satisfies |Y| = -m (mod r).  Choosing m as a multiple
of r therefore forces |Y| into {0, r, 2r, ...}, and the completion eats
(r-1)|Y| flexible vertices, leaving j = (m - (r-1)|Y|)/r whole tiles to
place inside the flexible residue: j is a nonnegative integer whenever
|Y| <= m/r, which the completion's capacity precondition enforces.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import reduce

from .absorbing import AssemblyError, absorb, assemble_absorbing_structure
from .constructions import case_tag, h_vectors
from .graphs import Graph, union
from .reachability import reachability_partition
from .rng import gnp, mix, stream
from .templates import generate_template
from .tiling import Tiling, crossing_clique_completion, greedy_almost_tiling

__all__ = [
    "PipelineParams",
    "PipelineResult",
    "perturbed_pipeline",
    "planned_structure_size",
]

_PARTITION_CAP = 400


@dataclass(frozen=True)
class PipelineParams:
    """Knobs for the staged run.

    eta is the flexible-set sampling fraction; None selects
    min(gamma / (2000 r^2), 0.02), clamped upward so the flexible set can
    host at least the smallest structure. max_m caps the flexible
    half-size; None lets the host capacity decide.
    """

    eta: float | None = None
    gamma: float = 0.1
    t_star: int = 1
    max_m: int | None = None
    greedy_restarts: int = 6
    attempt_budget: int = 20_000
    assembly_restarts: int = 8
    assembly_budget: int = 200_000
    partition_budget: int = 50_000


@dataclass(frozen=True)
class PipelineResult:
    """Outcome of one pipeline run.

    status is "tiled" or "failed"; stage carries the failing stage id on
    failure. leftover counts the vertices the almost-tiling never covered
    (completed later on success). structures lists the vertex span of each
    absorbing structure that was planned.
    """

    status: str
    stage: str | None
    tiling: Tiling | None
    leftover: int
    structures: tuple[int, ...]
    report: tuple[dict, ...] = field(repr=False)


@dataclass(frozen=True)
class _RegionOutcome:
    stage: str | None
    tiles: tuple[tuple[int, ...], ...]
    leftover: int
    planned: int


def planned_structure_size(m: int, r: int, k: int, t_star: int = 1) -> int:
    """Vertex span of the absorbing structure for flexible half-size m,
    computed without assembling anything."""
    t = len(next(iter(h_vectors(r, k, t_star))))
    chain = t * r + 1

    def gadget_n(s: int) -> int:
        return r * s * chain - (r - 1) * (s - 1)

    hubs = m * (gadget_n(m + 1) - (m + 1))
    singles = 2 * m * (gadget_n(1) - 1)
    return 4 * m + hubs + singles


def _capacity_m(n_region: int, r: int, k: int, t_star: int) -> int | None:
    """Largest multiple of r whose structure fits the region, or None."""
    best = None
    m = r
    while planned_structure_size(m, r, k, t_star) <= n_region:
        best = m
        m += r
    return best


def _layer_union(layers: tuple[Graph, ...], g_det: Graph) -> Graph:
    return reduce(union, layers, g_det)


def _sorted_tuple(parts: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(tuple(sorted(p)) for p in parts))


def _tile_region(
    g_det: Graph,
    layers: tuple[Graph, ...],
    region: list[int],
    r: int,
    k: int,
    seed: int,
    params: PipelineParams,
    report: list[dict],
    region_idx: int,
) -> _RegionOutcome:
    """Run the flexible-set, absorber, almost-tiling, completion, peel and
    absorb stages inside one region, returning global-id tiles."""
    n_region = len(region)
    assert n_region % r == 0, "regions must be divisible before tiling"
    l_det = g_det.induced(region)
    l_layers = [layer.induced(region) for layer in layers[:4]]
    absorber_rand = union(l_det, l_layers[0])
    greedy_rand = union(l_det, l_layers[1])
    completion_rand = union(l_det, l_layers[2])
    internal_rand = union(l_det, l_layers[3])

    def fail(stage: str, leftover: int = 0, planned: int = 0, **detail) -> _RegionOutcome:
        report.append({"stage": stage, "ok": False, "region": region_idx, **detail})
        return _RegionOutcome(stage, (), leftover, planned)

    # Flexible set: sample at 1.9 eta, then fix the size to an even count
    # 2m with m a multiple of r, growing from the low vertex ids when the
    # sample is too small for the smallest structure and shrinking when
    # the structure would not fit the region.
    eta = params.eta
    if eta is None:
        eta = min(params.gamma / (2000.0 * r * r), 0.02)
    prob = min(1.9 * eta, 1.0)
    draws = stream(mix(seed, 17)).random(n_region)
    sampled = [v for v in range(n_region) if draws[v] < prob]
    cap = _capacity_m(n_region, r, k, params.t_star)
    if cap is None:
        return fail(
            "flexible-set",
            needed=planned_structure_size(r, r, k, params.t_star),
            region_size=n_region,
        )
    m = max(r, r * (len(sampled) // (2 * r)))
    m = min(m, cap)
    if params.max_m is not None:
        m = min(m, max(r, r * (params.max_m // r)))
    planned = planned_structure_size(m, r, k, params.t_star)
    if len(sampled) < 2 * m:
        pool = [v for v in range(n_region) if v not in set(sampled)]
        sampled.extend(pool[: 2 * m - len(sampled)])
        sampled.sort()
    x_local = sorted(sampled[: 2 * m])
    x_set = set(x_local)
    z2_local = [v for v in range(n_region) if v not in x_set][: 2 * m]
    report.append(
        {
            "stage": "flexible-set",
            "ok": True,
            "region": region_idx,
            "m": m,
            "planned": planned,
            "sampled": len(sampled),
        }
    )

    template = generate_template(m, seed=mix(seed, 19))
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            structure = assemble_absorbing_structure(
                l_det,
                absorber_rand,
                template,
                z1=tuple(x_local),
                z2=tuple(z2_local),
                r=r,
                k=k,
                seed=mix(seed, 23),
                t_star=params.t_star,
                restarts=params.assembly_restarts,
                attempt_budget=params.assembly_budget,
            )
    except AssemblyError as err:
        return fail("absorber", planned=planned, side=err.stage, gadget=err.index)
    except ValueError as err:
        return fail("absorber", planned=planned, reason=str(err))
    report.append(
        {
            "stage": "absorber",
            "ok": True,
            "region": region_idx,
            "vertices": len(structure.vertices),
        }
    )

    occupied = set(structure.vertices)
    rest = [v for v in range(n_region) if v not in occupied]
    rest_mask = 0
    for v in rest:
        rest_mask |= 1 << v
    allowance = m // r
    almost = greedy_almost_tiling(
        l_det,
        greedy_rand,
        r,
        k,
        leftover_cap=allowance / len(rest) if rest else 0.0,
        seed=mix(seed, 29),
        restarts=params.greedy_restarts,
        attempt_budget=params.attempt_budget,
        allowed=rest_mask,
    )
    leftover = list(almost.leftover)
    report.append(
        {
            "stage": "almost-tiling",
            "ok": len(leftover) <= allowance,
            "region": region_idx,
            "tiles": len(almost.tiling.parts),
            "leftover": len(leftover),
        }
    )
    if len(leftover) > allowance:
        return fail(
            "almost-tiling", leftover=len(leftover), planned=planned, allowance=allowance
        )
    assert len(leftover) % r == 0, "greedy leftover residue off"

    eaten: set[int] = set()
    completion_parts: tuple[tuple[int, ...], ...] = ()
    if leftover:
        completed = crossing_clique_completion(
            l_det,
            completion_rand,
            u_set=leftover,
            w_set=x_local,
            r=r,
            k=k,
            variant="hdet",
            seed=mix(seed, 31),
            attempt_budget=params.attempt_budget,
        )
        if completed.unserved:
            return fail(
                "completion",
                leftover=len(leftover),
                planned=planned,
                unserved=len(completed.unserved),
            )
        completion_parts = completed.tiling.parts
        for part in completion_parts:
            eaten.update(v for v in part if v in x_set)
        assert len(eaten) == (r - 1) * len(leftover), "completion ate off-script"
    report.append(
        {
            "stage": "completion",
            "ok": True,
            "region": region_idx,
            "cliques": len(completion_parts),
        }
    )

    residue = [v for v in x_local if v not in eaten]
    tiles_needed = (m - (r - 1) * len(leftover)) // r
    assert tiles_needed * r == m - (r - 1) * len(leftover), "peel arithmetic off"
    kept: tuple[tuple[int, ...], ...] = ()
    if tiles_needed:
        residue_mask = 0
        for v in residue:
            residue_mask |= 1 << v
        inner = greedy_almost_tiling(
            l_det,
            internal_rand,
            r,
            k,
            leftover_cap=0.0,
            seed=mix(seed, 37),
            restarts=params.greedy_restarts,
            attempt_budget=params.attempt_budget,
            allowed=residue_mask,
        )
        if len(inner.tiling.parts) < tiles_needed:
            return fail(
                "peel",
                planned=planned,
                found=len(inner.tiling.parts),
                needed=tiles_needed,
            )
        kept = inner.tiling.parts[:tiles_needed]
    report.append(
        {"stage": "peel", "ok": True, "region": region_idx, "kept": len(kept)}
    )

    stolen = sorted(eaten | {v for part in kept for v in part})
    assert len(stolen) == m, "stolen flexible count off"
    try:
        absorbed = absorb(structure, stolen)
    except RuntimeError as err:
        return fail("absorb", planned=planned, reason=str(err))
    report.append(
        {
            "stage": "absorb",
            "ok": True,
            "region": region_idx,
            "tiles": len(absorbed.parts),
        }
    )

    local_tiles = (
        almost.tiling.parts + completion_parts + kept + absorbed.parts
    )
    global_tiles = tuple(
        tuple(region[v] for v in part) for part in local_tiles
    )
    return _RegionOutcome(None, global_tiles, len(leftover), planned)


def _straddle_clique(
    g_det: Graph,
    g_rand: Graph,
    side_a: list[int],
    side_b: list[int],
    r: int,
    usage_a: int,
    rng,
    attempt_budget: int = 5_000,
) -> tuple[int, ...] | None:
    """One K_r straddling two vertex pools: a bipartite block pair carries
    the deterministic edges between the pools and everything else, the
    crossing vertex included, is random. usage_a fixes how many clique
    vertices come from side_a."""
    top = (r - 1 + 1) // 2
    bot = r - 1 - top
    configs = []
    for block_a, block_b in dict.fromkeys([(top, bot), (bot, top)]):
        for v_in_a in (True, False):
            if block_a + (1 if v_in_a else 0) == usage_a and block_b >= 0:
                configs.append((block_a, block_b, v_in_a))
    if not configs:
        return None
    nodes = 0

    def grow(
        chosen_a: list[int], chosen_b: list[int], block_a: int, block_b: int
    ) -> tuple[int, ...] | None:
        nonlocal nodes
        nodes += 1
        if nodes > attempt_budget:
            return None
        if len(chosen_a) < block_a:
            for v in cand_a:
                if v in chosen_a:
                    continue
                # within-block pairs ride the random side
                if all(g_rand.has_edge(v, u) for u in chosen_a):
                    out = grow(chosen_a + [v], chosen_b, block_a, block_b)
                    if out:
                        return out
            return None
        if len(chosen_b) < block_b:
            for v in cand_b:
                if v in chosen_b:
                    continue
                if all(g_rand.has_edge(v, u) for u in chosen_b) and all(
                    g_det.has_edge(v, u) for u in chosen_a
                ):
                    out = grow(chosen_a, chosen_b + [v], block_a, block_b)
                    if out:
                        return out
            return None
        crossing_pool = cand_a if v_in_a else cand_b
        taken = set(chosen_a) | set(chosen_b)
        for v in crossing_pool:
            if v in taken:
                continue
            if all(g_rand.has_edge(v, u) for u in chosen_a + chosen_b):
                return tuple(sorted(chosen_a + chosen_b + [v]))
        return None

    for block_a, block_b, v_in_a in configs:
        cand_a = [side_a[int(i)] for i in rng.permutation(len(side_a))]
        cand_b = [side_b[int(i)] for i in rng.permutation(len(side_b))]
        found = grow([], [], block_a, block_b)
        if found:
            return found
    return None


def _split_and_repair(
    g_det: Graph,
    layers: tuple[Graph, ...],
    tag,
    seed: int,
    params: PipelineParams,
    report: list[dict],
) -> tuple[list[list[int]], tuple[tuple[int, ...], ...], str | None]:
    """Case-3 preamble: partition the host by chain reachability, then fix
    every part's size modulo r with straddling cliques across consecutive
    parts. Returns (regions, repair tiles, failing stage or None)."""
    n = g_det.n
    r = tag.r
    if n > _PARTITION_CAP:
        report.append(
            {"stage": "partition", "ok": True, "parts": 1, "note": "host above partition cap"}
        )
        return [list(range(n))], (), None
    split = reachability_partition(
        g_det,
        tag.r,
        tag.k,
        sample_budget=params.partition_budget,
        seed=mix(seed, 3),
    )
    if split.heuristic or split.leftover or len(split.parts) <= 1:
        report.append(
            {
                "stage": "partition",
                "ok": True,
                "parts": len(split.parts),
                "fallback": True,
                "notes": split.notes,
            }
        )
        return [list(range(n))], (), None
    report.append({"stage": "partition", "ok": True, "parts": len(split.parts)})

    repair_rand = _layer_union(layers[4:], g_det)
    rng = stream(mix(seed, 5))
    used: set[int] = set()
    repair_tiles: list[tuple[int, ...]] = []
    parts = [sorted(p) for p in split.parts]
    top = (r - 1 + 1) // 2
    usages = sorted({top, r - 1 - top, top + 1, r - top})
    usages = [u for u in usages if 0 < u < r]
    for i in range(len(parts) - 1):
        for _ in range(r + 1):
            avail_a = [v for v in parts[i] if v not in used]
            deficit = len(avail_a) % r
            if deficit == 0:
                break
            usage = deficit if deficit in usages else max(usages)
            avail_b = [v for v in parts[i + 1] if v not in used]
            tile = _straddle_clique(
                g_det, repair_rand, avail_a, avail_b, r, usage, rng
            )
            if tile is None:
                report.append(
                    {"stage": "repair", "ok": False, "boundary": i, "deficit": deficit}
                )
                return [], (), "repair"
            repair_tiles.append(tile)
            used.update(tile)
        else:
            report.append(
                {"stage": "repair", "ok": False, "boundary": i, "deficit": deficit}
            )
            return [], (), "repair"
    regions = [[v for v in part if v not in used] for part in parts]
    assert all(len(region) % r == 0 for region in regions), "repair left a residue"
    report.append({"stage": "repair", "ok": True, "cliques": len(repair_tiles)})
    return regions, tuple(repair_tiles), None


def perturbed_pipeline(
    g_det: Graph,
    p: float,
    r: int,
    k: int,
    seed: int = 0,
    params: PipelineParams | None = None,
) -> PipelineResult:
    """Tile the union of g_det and a fresh G(n, p) drawn in independent
    layers, following the staged constructive argument.

    Success returns a validated perfect tiling of the union graph; any
    stage shortfall returns a failed status carrying the stage id.  Only
    r not dividing n, a probability outside [0, 1], or bad (r, k) raise.
    """
    params = params or PipelineParams()
    tag = case_tag(r, k)
    n = g_det.n
    if n % r != 0:
        raise ValueError(f"r = {r} must divide n = {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    layer_count = 4 if tag.case in (1, 2) else 4 + 2 * tag.c
    p_layer = 1.0 - (1.0 - p) ** (1.0 / layer_count)
    layers = tuple(
        gnp(n, p_layer, mix(seed, 101, i)) for i in range(layer_count)
    )
    report: list[dict] = [
        {"stage": "layers", "ok": True, "count": layer_count, "p_layer": p_layer}
    ]

    repair_tiles: tuple[tuple[int, ...], ...] = ()
    if tag.case == 3:
        regions, repair_tiles, failed = _split_and_repair(
            g_det, layers, tag, seed, params, report
        )
        if failed is not None:
            return PipelineResult("failed", failed, None, 0, (), tuple(report))
    else:
        regions = [list(range(n))]

    tiles: list[tuple[int, ...]] = list(repair_tiles)
    leftover_total = 0
    planned_sizes: list[int] = []
    for idx, region in enumerate(regions):
        outcome = _tile_region(
            g_det, layers, region, r, k, mix(seed, 211, idx), params, report, idx
        )
        leftover_total += outcome.leftover
        if outcome.planned:
            planned_sizes.append(outcome.planned)
        if outcome.stage is not None:
            return PipelineResult(
                "failed",
                outcome.stage,
                None,
                leftover_total,
                tuple(planned_sizes),
                tuple(report),
            )
        tiles.extend(outcome.tiles)

    host = _layer_union(layers, g_det)
    tiling = Tiling(_sorted_tuple(tuple(tiles)), host)
    tiling.validate()
    assert tiling.is_perfect, "stage accounting must yield a perfect tiling"
    report.append({"stage": "validate", "ok": True, "tiles": len(tiles)})
    return PipelineResult(
        "tiled", None, tiling, leftover_total, tuple(planned_sizes), tuple(report)
    )
