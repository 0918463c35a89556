"""Curve rendering from scan CSV files.

The fourteen-column CSV layout is the contract between the scan tool and
this package, so it is restated here rather than imported; a file whose
header deviates is rejected with a column diff.  Figures are rendered
with a pinned SVG hash salt and no date metadata, making the bytes a
pure function of the input rows.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = [
    "CSV_COLUMNS",
    "CurveSpec",
    "RenderReport",
    "SchemaMismatch",
    "load_results",
    "render",
    "wilson_interval",
]

CSV_COLUMNS = (
    "r",
    "k",
    "base",
    "alpha",
    "gamma",
    "n",
    "c",
    "p",
    "trial",
    "seed",
    "outcome",
    "leftover",
    "solver_ms",
    "total_ms",
)

_GROUP_KEYS = ("n", "alpha")
_HASH_SALT = "cliquefactor-plots"


class SchemaMismatch(ValueError):
    """Raised when a results file does not carry the scan columns."""

    def __init__(self, found: tuple[str, ...]) -> None:
        missing = [name for name in CSV_COLUMNS if name not in found]
        unexpected = [name for name in found if name not in CSV_COLUMNS]
        parts = []
        if missing:
            parts.append(f"missing columns: {', '.join(missing)}")
        if unexpected:
            parts.append(f"unexpected columns: {', '.join(unexpected)}")
        if not parts:
            parts.append(
                f"column order must be {','.join(CSV_COLUMNS)}, got {','.join(found)}"
            )
        super().__init__("; ".join(parts))
        self.found = found
        self.missing = tuple(missing)
        self.unexpected = tuple(unexpected)


@dataclass(frozen=True)
class CurveSpec:
    """One figure: curves grouped by n or alpha, probability against c."""

    group: str = "n"
    x: str = "c"

    def __post_init__(self) -> None:
        if self.group not in _GROUP_KEYS:
            raise ValueError(f"group must be one of {_GROUP_KEYS}, got {self.group!r}")
        if self.x != "c":
            raise ValueError(f"only c is supported on the x axis, got {self.x!r}")


@dataclass(frozen=True)
class CellPoint:
    c: float
    trials: int
    tiled: int
    probability: float
    low: float
    high: float


@dataclass(frozen=True)
class RenderReport:
    """What went into the figure: per-group row counts as shown in the
    legend, aggregated cells, and whether the input had no rows."""

    rows: int
    group_rows: dict[str, int]
    cells: dict[str, tuple[CellPoint, ...]]
    empty: bool
    out_path: str


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval; the band always contains the point estimate."""
    if trials <= 0:
        return (0.0, 1.0)
    phat = successes / trials
    zz = z * z
    denom = 1.0 + zz / trials
    center = (phat + zz / (2.0 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials + zz / (4.0 * trials * trials))
    half /= denom
    return (max(0.0, min(center - half, phat)), min(1.0, max(center + half, phat)))


def load_results(path: str) -> list[dict[str, str]]:
    """All rows of a scan CSV, schema-checked against the fixed columns."""
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = tuple(next(reader))
        except StopIteration:
            raise SchemaMismatch(())
        if header != CSV_COLUMNS:
            raise SchemaMismatch(header)
        rows = []
        for line in reader:
            if len(line) != len(CSV_COLUMNS):
                raise SchemaMismatch(header)
            rows.append(dict(zip(CSV_COLUMNS, line)))
    return rows


def _group_label(spec: CurveSpec, value: str) -> str:
    return f"{spec.group}={value}"


def _aggregate(rows: list[dict[str, str]], spec: CurveSpec) -> dict[str, tuple[CellPoint, ...]]:
    counts: dict[str, dict[float, list[int]]] = {}
    for row in rows:
        group = row[spec.group]
        c = float(row["c"])
        bucket = counts.setdefault(group, {}).setdefault(c, [0, 0])
        bucket[0] += 1
        if row["outcome"] == "tiled":
            bucket[1] += 1
    cells: dict[str, tuple[CellPoint, ...]] = {}
    for group in sorted(counts, key=lambda v: float(v)):
        points = []
        for c in sorted(counts[group]):
            trials, tiled = counts[group][c]
            low, high = wilson_interval(tiled, trials)
            points.append(CellPoint(c, trials, tiled, tiled / trials, low, high))
        cells[group] = tuple(points)
    return cells


def render(results_path: str, spec: CurveSpec, out_path: str) -> RenderReport:
    """Render one figure from a scan CSV.

    The legend shows, per curve, the number of CSV rows aggregated into
    it.  SVG output is byte-stable for identical input; PNG is chosen by
    the output extension.
    """
    rows = load_results(results_path)
    cells = _aggregate(rows, spec)
    group_rows = {
        group: sum(point.trials for point in points) for group, points in cells.items()
    }

    plt.rcParams["svg.hashsalt"] = _HASH_SALT
    # Keep legend strings as real text nodes so the counts stay
    # machine-checkable in the output.
    plt.rcParams["svg.fonttype"] = "none"
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    try:
        for group, points in cells.items():
            xs = [point.c for point in points]
            ys = [point.probability for point in points]
            lows = [point.probability - point.low for point in points]
            highs = [point.high - point.probability for point in points]
            label = f"{_group_label(spec, group)} ({group_rows[group]} trials)"
            ax.errorbar(xs, ys, yerr=(lows, highs), fmt="o-", capsize=3, label=label)
            if len(points) > 1:
                ax.fill_between(
                    xs,
                    [point.low for point in points],
                    [point.high for point in points],
                    alpha=0.2,
                    linewidth=0,
                )
        all_c = [point.c for points in cells.values() for point in points]
        if all_c and min(all_c) > 0:
            ax.set_xscale("log")
        ax.set_xlabel("c  (p = c n^(-2/k))")
        ax.set_ylabel("empirical tiling probability")
        ax.set_ylim(-0.05, 1.05)
        if cells:
            ax.legend()
            ax.set_title("Perfect-tiling probability with Wilson 95% bands")
        else:
            ax.set_title("no records")
        fig.tight_layout()
        metadata = {"Date": None} if out_path.endswith(".svg") else None
        fig.savefig(out_path, metadata=metadata)
    finally:
        plt.close(fig)
    return RenderReport(
        rows=len(rows),
        group_rows=group_rows,
        cells=cells,
        empty=not rows,
        out_path=out_path,
    )
