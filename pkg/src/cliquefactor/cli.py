"""Command line front ends for the library.

Each subcommand is also installed as a standalone console script; the
umbrella entry point dispatches to the same implementations.  Graphs are
exchanged in the text format of the graphs module: a vertex-count line
followed by one `u v` edge per line, `#` lines ignored.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence

from .absorbing import AssemblyError, absorb, assemble_absorbing_structure
from .constructions import (
    case_tag,
    h0,
    h0_prime,
    h1,
    h1_prime,
    h_det,
    lower_bound_graph,
)
from .gadgets import standard_gadget
from .graphs import complete, graph_from_text, graph_to_text
from .harness import ExperimentConfig, threshold_scan
from .phi import phi, phi_anchored
from .rng import gnp, mix, stream
from .templates import generate_template
from .tiling import max_tiling, perfect_tiling

__all__ = [
    "absorb_demo_main",
    "construct_main",
    "gadget_main",
    "main",
    "phi_main",
    "scan_main",
    "template_main",
    "tile_main",
]

_FAMILIES = ("hdet", "h0", "h0p", "h1", "h1p", "lower-bound")


def _read_graph(path: str):
    with open(path) as handle:
        return graph_from_text(handle.read())


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _parse_c_grid(text: str) -> tuple[float, ...]:
    """Either a comma list of constants or LO:HI:geom:STEPS."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 4 or parts[2] != "geom":
            raise argparse.ArgumentTypeError(
                f"grid spec must look like LO:HI:geom:STEPS, got {text!r}"
            )
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[3])
        if lo <= 0 or hi <= 0 or steps < 1:
            raise argparse.ArgumentTypeError("geometric grid needs positive endpoints")
        if steps == 1:
            return (lo,)
        ratio = hi / lo
        return tuple(lo * ratio ** (i / (steps - 1)) for i in range(steps))
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated constants, got {text!r}")


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------


def _construct_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", required=True, choices=_FAMILIES)
    parser.add_argument("--r", type=int, required=True)
    parser.add_argument("--k", type=int, required=True)
    parser.add_argument("--n", type=int, help="host size (lower-bound family)")
    parser.add_argument("--gamma", type=float, help="slack (lower-bound family)")
    parser.add_argument("--out", required=True, help="output graph file")


def _run_construct(args: argparse.Namespace) -> int:
    tag = case_tag(args.r, args.k)
    distinguished = None
    if args.family == "hdet":
        g = h_det(args.r, args.k)
        parts = [args.k] * (tag.r_star - 1) + [tag.q]
        extra: list[str] = []
    elif args.family in ("h0", "h0p"):
        f = h0(args.r, args.k) if args.family == "h0" else h0_prime(args.r, args.k)
        g = f.graph
        parts = [args.k] * (tag.r_star - 1) + [tag.q + 1]
        distinguished = f.distinguished
        extra = []
    elif args.family in ("h1", "h1p"):
        f = h1(args.r, args.k) if args.family == "h1" else h1_prime(args.r, args.k)
        g = f.graph
        parts = [args.k] * tag.r_star + [1]
        distinguished = f.distinguished
        extra = []
    else:
        if args.n is None or args.gamma is None:
            raise ValueError("the lower-bound family needs --n and --gamma")
        built = lower_bound_graph(args.n, args.r, args.k, args.gamma)
        g = built.graph
        parts = [len(built.a_vertices), len(built.b_vertices)]
        extra = [f"rounding={built.rounding_note}"]
    comments = [f"parts={','.join(str(size) for size in parts)}"]
    if distinguished is not None:
        comments.append(f"distinguished={distinguished[0]},{distinguished[1]}")
    comments.extend(extra)
    with open(args.out, "w") as handle:
        handle.write(graph_to_text(g, comments))
    print(f"wrote {args.family} graph with {g.n} vertices to {args.out}")
    return 0


# ---------------------------------------------------------------------------
# phi
# ---------------------------------------------------------------------------


def _phi_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--graph", required=True, help="graph file")
    parser.add_argument("--anchors", type=_parse_int_list, default=())
    parser.add_argument("--n", type=float, required=True)
    parser.add_argument("--p", type=float, required=True)


def _run_phi(args: argparse.Namespace) -> int:
    g = _read_graph(args.graph)
    if args.anchors:
        result = phi_anchored(g, args.anchors, args.n, args.p)
    else:
        result = phi(g, args.n, args.p)
    print(f"log_value {result.log_value:.12g}")
    print(f"value {result.value:.6e}")
    print(f"argmin_vertices {' '.join(str(v) for v in result.argmin_vertices)}")
    print(f"argmin_edges {result.argmin_edges}")
    return 0


# ---------------------------------------------------------------------------
# template
# ---------------------------------------------------------------------------


def _template_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--m", type=int, required=True)
    parser.add_argument("--verify", choices=("exhaustive", "sampled"), default="exhaustive")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--profile", choices=("lean", "uniform"), default="lean")


def _run_template(args: argparse.Namespace) -> int:
    t = generate_template(args.m, seed=args.seed, profile=args.profile, verify=args.verify)
    print(f"m {t.m}")
    print(f"lefts {t.n_left} rights {t.n_right} edges {t.edge_count}")
    print(f"max_degree {t.max_degree}")
    print(f"verification {t.verification} subsets_checked {t.subsets_checked}")
    for i, row in enumerate(t.adjacency):
        print(f"left {i}: {' '.join(str(j) for j in row)}")
    return 0


# ---------------------------------------------------------------------------
# gadget
# ---------------------------------------------------------------------------


def _gadget_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--r", type=int, required=True)
    parser.add_argument("--k", type=int, required=True)
    parser.add_argument("--s", type=int, required=True)
    parser.add_argument("--case", default="auto", choices=("auto", "1", "2", "3"))
    parser.add_argument("--out", required=True, help="output graph file; JSON sidecar at FILE.json")


def _run_gadget(args: argparse.Namespace) -> int:
    tag = case_tag(args.r, args.k)
    if args.case != "auto" and int(args.case) != tag.case:
        raise ValueError(
            f"(r={args.r}, k={args.k}) falls in case {tag.case}, not {args.case}"
        )
    bp = standard_gadget(args.r, args.k, args.s)
    comments = [
        f"gadget r={args.r} k={args.k} s={args.s} case={tag.case}",
        f"base={','.join(str(v) for v in bp.base)}",
    ]
    with open(args.out, "w") as handle:
        handle.write(graph_to_text(bp.assembled, comments))
    sidecar = {
        "r": args.r,
        "k": args.k,
        "s": args.s,
        "case": tag.case,
        "n": bp.n,
        "W": list(bp.base),
        "hubs": list(bp.hubs),
        "layers": [list(row) for row in bp.layer_vertices],
    }
    sidecar_path = args.out + ".json"
    with open(sidecar_path, "w") as handle:
        json.dump(sidecar, handle, indent=2)
        handle.write("\n")
    print(f"wrote gadget with {bp.n} vertices to {args.out} (sidecar {sidecar_path})")
    return 0


# ---------------------------------------------------------------------------
# absorb-demo
# ---------------------------------------------------------------------------


def _absorb_demo_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--r", type=int, required=True)
    parser.add_argument("--k", type=int, required=True)
    parser.add_argument("--m", type=int, required=True)
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--p", type=float, required=True)
    parser.add_argument("--seed", type=int, default=0)


def _run_absorb_demo(args: argparse.Namespace) -> int:
    """Assemble a structure on a complete deterministic host with a fresh
    G(n, p) supplying the random side, then absorb a seeded flexible draw."""
    if not 0.0 <= args.p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {args.p}")
    host_det = complete(args.n)
    host_rand = gnp(args.n, args.p, args.seed)
    template = generate_template(args.m, seed=mix(args.seed, 1))
    z1 = tuple(range(2 * args.m))
    z2 = tuple(range(2 * args.m, 4 * args.m))
    try:
        structure = assemble_absorbing_structure(
            host_det,
            host_rand,
            template,
            z1,
            z2,
            args.r,
            args.k,
            seed=mix(args.seed, 2),
        )
    except AssemblyError as err:
        print(f"assembly failed on the {err.stage} side at gadget {err.index}", file=sys.stderr)
        return 1
    rng = stream(mix(args.seed, 3))
    picks = sorted(rng.choice(len(z1), size=args.m, replace=False).tolist())
    z_bar = tuple(z1[i] for i in picks)
    tiling = absorb(structure, z_bar)
    tiling.validate()
    print(f"structure vertices {len(structure.vertices)}")
    print(f"flexible set {z1}")
    print(f"absorbed {z_bar}")
    print(f"tiles {len(tiling.parts)} (r = {args.r}), validated")
    return 0


# ---------------------------------------------------------------------------
# tile
# ---------------------------------------------------------------------------


def _tile_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--graph", required=True, help="graph file")
    parser.add_argument("--r", type=int, required=True)
    parser.add_argument("--max", action="store_true", help="largest tiling instead of a perfect one")
    parser.add_argument("--timeout-ms", type=float, default=None)


def _run_tile(args: argparse.Namespace) -> int:
    g = _read_graph(args.graph)
    if args.max:
        result = max_tiling(g, args.r, timeout_ms=args.timeout_ms)
        print(f"max {len(result.tiling.parts)} optimal {result.optimal}")
        for part in result.tiling.parts:
            print(" ".join(str(v) for v in part))
        return 0
    result = perfect_tiling(g, args.r, timeout_ms=args.timeout_ms)
    if result.reason:
        print(f"{result.status} ({result.reason})")
    else:
        print(result.status)
    if result.tiling is not None:
        for part in result.tiling.parts:
            print(" ".join(str(v) for v in part))
    return 0


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------

_SCAN_CONFIG_FLAGS = ("r", "k", "alpha", "gamma", "n", "c", "trials", "seed", "timeout_ms")


def _scan_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--r", type=int)
    parser.add_argument("--k", type=int)
    parser.add_argument("--base", choices=("lower-bound", "random"), default=None)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--n", type=_parse_int_list, help="comma-separated host sizes")
    parser.add_argument("--c", type=_parse_c_grid, help="comma list or LO:HI:geom:STEPS")
    parser.add_argument("--trials", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--timeout-ms", type=float, dest="timeout_ms")
    parser.add_argument("--pipeline", action="store_true")
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--out", default=None, help="CSV output path")
    parser.add_argument("--jsonl", default=None, help="JSONL output path")
    parser.add_argument("--config", default=None, help="JSON file with ExperimentConfig fields")


def _scan_config(args: argparse.Namespace) -> ExperimentConfig:
    if args.config is not None:
        given = [
            name
            for name in _SCAN_CONFIG_FLAGS
            if getattr(args, name) is not None
        ]
        if args.base is not None:
            given.append("base")
        if args.pipeline:
            given.append("pipeline")
        if given:
            raise ValueError(
                f"--config replaces the scan parameters; drop --{', --'.join(given)}"
            )
        with open(args.config) as handle:
            payload = json.load(handle)
        for key in ("n_grid", "c_grid"):
            if key in payload:
                payload[key] = tuple(payload[key])
        return ExperimentConfig(**payload)
    if args.r is None or args.k is None:
        raise ValueError("--r and --k are required without --config")
    fields: dict = {"r": args.r, "k": args.k}
    if args.base is not None:
        fields["base"] = args.base
    if args.alpha is not None:
        fields["alpha"] = args.alpha
    if args.gamma is not None:
        fields["gamma"] = args.gamma
    if args.n is not None:
        fields["n_grid"] = args.n
    if args.c is not None:
        fields["c_grid"] = args.c
    if args.trials is not None:
        fields["trials"] = args.trials
    if args.seed is not None:
        fields["master_seed"] = args.seed
    if args.timeout_ms is not None:
        fields["timeout_ms"] = args.timeout_ms
    if args.pipeline:
        fields["pipeline"] = True
    if args.workers is not None:
        fields["workers"] = args.workers
    return ExperimentConfig(**fields)


def _run_scan(args: argparse.Namespace) -> int:
    cfg = _scan_config(args)
    result = threshold_scan(cfg, csv_path=args.out, jsonl_path=args.jsonl)
    for cell in result.summaries:
        print(
            f"n={cell.n} c={cell.c:g} p={cell.p:g} "
            f"tiled={cell.tiled}/{cell.trials} P={cell.probability:.3f} "
            f"wilson=[{cell.wilson_low:.3f},{cell.wilson_high:.3f}]"
        )
    if args.out:
        print(f"wrote {len(result.records)} records to {args.out}")
    return 0


# ---------------------------------------------------------------------------
# entry points
# ---------------------------------------------------------------------------

_COMMANDS = {
    "construct": (_construct_args, _run_construct, "build the named graph family"),
    "phi": (_phi_args, _run_phi, "evaluate the threshold functional on a graph file"),
    "template": (_template_args, _run_template, "generate and verify a flexibility template"),
    "gadget": (_gadget_args, _run_gadget, "assemble an absorbing gadget"),
    "absorb-demo": (_absorb_demo_args, _run_absorb_demo, "end-to-end absorbing structure demo"),
    "tile": (_tile_args, _run_tile, "decide perfect tileability or find a largest tiling"),
    "scan": (_scan_args, _run_scan, "threshold scan over an (n, c) grid"),
}


def _single_command_main(name: str, argv: Sequence[str] | None) -> int:
    register, run, description = _COMMANDS[name]
    parser = argparse.ArgumentParser(prog=name, description=description)
    register(parser)
    args = parser.parse_args(argv)
    try:
        return run(args)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="cliquefactor",
        description="Clique-factor constructions, solvers, and threshold experiments.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, (register, run, description) in _COMMANDS.items():
        sub = subparsers.add_parser(name, help=description, description=description)
        register(sub)
        sub.set_defaults(run=run)
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def construct_main(argv: Sequence[str] | None = None) -> int:
    return _single_command_main("construct", argv)


def phi_main(argv: Sequence[str] | None = None) -> int:
    return _single_command_main("phi", argv)


def template_main(argv: Sequence[str] | None = None) -> int:
    return _single_command_main("template", argv)


def gadget_main(argv: Sequence[str] | None = None) -> int:
    return _single_command_main("gadget", argv)


def absorb_demo_main(argv: Sequence[str] | None = None) -> int:
    return _single_command_main("absorb-demo", argv)


def tile_main(argv: Sequence[str] | None = None) -> int:
    return _single_command_main("tile", argv)


def scan_main(argv: Sequence[str] | None = None) -> int:
    return _single_command_main("scan", argv)


if __name__ == "__main__":
    sys.exit(main())
