"""Seeded threshold experiments over (n, c) grids with persistence.

A scan builds one base graph per host size, unions it with a fresh
G(n, p) draw per trial at p = c * n^(-2/k), decides perfect tileability
with the exact solver (or runs the staged pipeline), and records one row
per trial plus a Wilson-interval summary per cell.  Every trial seed is
derived as mix(master_seed, cell_id, trial), so records are identical no
matter how many workers execute them.

The two timing columns are deterministic work proxies, not wall-clock
measurements: solver_ms bills explored search nodes at a declared rate
(pipeline runs bill vertices times stage entries), and total_ms adds a
setup charge proportional to the number of vertex pairs scanned while
building the perturbation.  Wall-clock times would break the
byte-identical rerun contract that makes scan outputs diffable.  For the
same reason the timeout budget is enforced as a search-node budget at
the declared rate rather than as a deadline.
"""

from __future__ import annotations

import csv
import json
import math
import threading
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .constructions import lower_bound_graph
from .graphs import Graph, union
from .pipeline import PipelineParams, perturbed_pipeline
from .rng import boost_min_degree, gnp, mix
from .tiling import perfect_tiling

__all__ = [
    "BASES",
    "CSV_COLUMNS",
    "BisectResult",
    "CellSummary",
    "ExperimentConfig",
    "ScanResult",
    "TrialRecord",
    "bisect_constant",
    "threshold_scan",
    "wilson_interval",
]

BASES = ("lower-bound", "random")

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

_NODES_PER_MS = 1.0
_PAIRS_PER_MS = 1000.0
_PIPELINE_WORK_PER_MS = 100.0
_BASE_TAG = 0xBA5E
_BISECT_TAG = 0xB15EC7
_ENDPOINT_BAND = 0.05


@dataclass(frozen=True)
class ExperimentConfig:
    """One scan definition: grids, base construction, seeds, budgets.

    alpha is the minimum-degree fraction of the base graph.  For the
    lower-bound base it must sit strictly inside the interval
    1 - k/r < alpha < 1 - (k-1)/r; values near either endpoint are
    accepted with a warning since behaviour there is unsettled.
    """

    r: int
    k: int
    base: str = "lower-bound"
    alpha: float = 0.25
    gamma: float = 0.1
    n_grid: tuple[int, ...] = (60,)
    c_grid: tuple[float, ...] = (1.0,)
    trials: int = 20
    master_seed: int = 0
    timeout_ms: float = 10_000.0
    pipeline: bool = False
    workers: int = 1

    def __post_init__(self) -> None:
        if self.r < 2:
            raise ValueError(f"r must be at least 2, got {self.r}")
        if not 2 <= self.k <= self.r:
            raise ValueError(f"k must satisfy 2 <= k <= r, got k={self.k} r={self.r}")
        if self.base not in BASES:
            raise ValueError(f"base must be one of {BASES}, got {self.base!r}")
        if not self.n_grid or any(n < 1 for n in self.n_grid):
            raise ValueError("n grid must be a nonempty list of positive sizes")
        if not self.c_grid or any(c < 0 for c in self.c_grid):
            raise ValueError("c grid must be nonempty with nonnegative entries")
        if self.trials < 1:
            raise ValueError("trials per cell must be positive")
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be positive")
        if self.workers < 1:
            raise ValueError("workers must be positive")
        if self.base == "lower-bound":
            lo = 1.0 - self.k / self.r
            hi = 1.0 - (self.k - 1) / self.r
            if not lo < self.alpha < hi:
                raise ValueError(
                    "alpha must lie strictly inside the interval "
                    f"1 - k/r < alpha < 1 - (k-1)/r, i.e. {lo:.6g} < alpha "
                    f"< {hi:.6g} for r={self.r}, k={self.k}; got {self.alpha}"
                )
            band = _ENDPOINT_BAND * (hi - lo)
            if self.alpha < lo + band or self.alpha > hi - band:
                warnings.warn(
                    f"alpha = {self.alpha} is within {band:.4g} of an endpoint "
                    f"of ({lo:.6g}, {hi:.6g}); thresholds are unsettled there",
                    stacklevel=2,
                )
        else:
            if not 0.0 <= self.alpha < 1.0:
                raise ValueError(
                    f"alpha must lie in [0, 1) for the random base, got {self.alpha}"
                )
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")

    def cells(self) -> tuple[tuple[int, int, float], ...]:
        """Enumerate (cell_id, n, c) with n outermost."""
        out = []
        cell_id = 0
        for n in self.n_grid:
            for c in self.c_grid:
                out.append((cell_id, n, c))
                cell_id += 1
        return tuple(out)


@dataclass(frozen=True)
class TrialRecord:
    """One seeded trial.  The first fourteen fields are the CSV columns
    in order; structures and stages appear only in the JSONL mirror."""

    r: int
    k: int
    base: str
    alpha: float
    gamma: float
    n: int
    c: float
    p: float
    trial: int
    seed: int
    outcome: str
    leftover: int
    solver_ms: float
    total_ms: float
    structures: tuple[int, ...] = ()
    stages: tuple[dict, ...] = field(default=(), repr=False)

    def csv_row(self) -> list[str]:
        return [
            str(self.r),
            str(self.k),
            self.base,
            repr(self.alpha),
            repr(self.gamma),
            str(self.n),
            repr(self.c),
            repr(self.p),
            str(self.trial),
            str(self.seed),
            self.outcome,
            str(self.leftover),
            repr(self.solver_ms),
            repr(self.total_ms),
        ]

    def json_line(self) -> str:
        payload = {name: getattr(self, name) for name in CSV_COLUMNS}
        payload["structures"] = list(self.structures)
        payload["stages"] = [dict(entry) for entry in self.stages]
        return json.dumps(payload, separators=(",", ":"))


@dataclass(frozen=True)
class CellSummary:
    """Per-cell empirical tiling probability with a Wilson 95% band."""

    n: int
    c: float
    p: float
    trials: int
    tiled: int
    probability: float
    wilson_low: float
    wilson_high: float


@dataclass(frozen=True)
class ScanResult:
    records: tuple[TrialRecord, ...]
    summaries: tuple[CellSummary, ...]


@dataclass(frozen=True)
class BisectResult:
    """Transition-constant estimate for one host size.  status is ok,
    collapsed-low (probability already above target at the smallest
    probed c), collapsed-high (still below target after widening to the
    cap), and evaluations lists every (c, probability) probe in order."""

    n: int
    c_star: float
    bracket: tuple[float, float]
    status: str
    evaluations: tuple[tuple[float, float], ...]


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        return (0.0, 1.0)
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    phat = successes / trials
    zz = z * z
    denom = 1.0 + zz / trials
    center = (phat + zz / (2.0 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials + zz / (4.0 * trials * trials))
    half /= denom
    # The exact interval contains the point estimate; keep that true
    # under floating-point rounding at the endpoints.
    return (max(0.0, min(center - half, phat)), min(1.0, max(center + half, phat)))


def _base_graph(cfg: ExperimentConfig, n: int) -> Graph:
    """Base per host size, fixed across cells and trials so the scan
    varies only the perturbation."""
    if cfg.base == "lower-bound":
        return lower_bound_graph(n, cfg.r, cfg.k, cfg.gamma).graph
    g = gnp(n, cfg.alpha, mix(cfg.master_seed, _BASE_TAG, n))
    delta = min(math.ceil(cfg.alpha * n), n - 1)
    if delta <= 0:
        return g
    return boost_min_degree(g, delta, mix(cfg.master_seed, _BASE_TAG, n, 1))


def _verify_tiling(tiling, n: int) -> None:
    tiling.validate()
    if tiling.covered != tuple(range(n)):
        raise AssertionError("success recorded without a perfect cover")


def _run_trial(
    cfg: ExperimentConfig,
    base: Graph,
    cell_id: int,
    n: int,
    c: float,
    p: float,
    trial: int,
    seed: int | None = None,
) -> TrialRecord:
    if seed is None:
        seed = mix(cfg.master_seed, cell_id, trial)
    structures: tuple[int, ...] = ()
    stages: tuple[dict, ...] = ()
    if cfg.pipeline:
        if n % cfg.r != 0:
            outcome, leftover, solver_ms = "untiled", n, 0.0
        else:
            result = perturbed_pipeline(base, p, cfg.r, cfg.k, seed=seed)
            structures = result.structures
            stages = result.report
            solver_ms = n * len(result.report) / _PIPELINE_WORK_PER_MS
            if result.status == "tiled":
                _verify_tiling(result.tiling, n)
                outcome, leftover = "tiled", 0
            else:
                outcome = f"stage:{result.stage}"
                leftover = result.leftover if result.leftover else n
    else:
        host = union(base, gnp(n, p, seed))
        budget = max(1, int(cfg.timeout_ms * _NODES_PER_MS))
        result = perfect_tiling(host, cfg.r, node_budget=budget)
        solver_ms = result.nodes / _NODES_PER_MS
        if result.status == "tiled":
            _verify_tiling(result.tiling, n)
            outcome, leftover = "tiled", 0
        else:
            outcome, leftover = result.status, n
    total_ms = solver_ms + math.comb(n, 2) / _PAIRS_PER_MS
    return TrialRecord(
        r=cfg.r,
        k=cfg.k,
        base=cfg.base,
        alpha=cfg.alpha,
        gamma=cfg.gamma,
        n=n,
        c=c,
        p=p,
        trial=trial,
        seed=seed,
        outcome=outcome,
        leftover=leftover,
        solver_ms=solver_ms,
        total_ms=total_ms,
        structures=structures,
        stages=stages,
    )


class _Sink:
    """Serialized appender for the CSV and JSONL outputs."""

    def __init__(self, csv_path: str | None, jsonl_path: str | None) -> None:
        self._lock = threading.Lock()
        self._csv_file = open(csv_path, "w", newline="") if csv_path else None
        self._jsonl_file = open(jsonl_path, "w") if jsonl_path else None
        self._writer = None
        if self._csv_file is not None:
            self._writer = csv.writer(self._csv_file, lineterminator="\n")
            self._writer.writerow(CSV_COLUMNS)

    def append(self, records: list[TrialRecord]) -> None:
        with self._lock:
            for record in records:
                if self._writer is not None:
                    self._writer.writerow(record.csv_row())
                if self._jsonl_file is not None:
                    self._jsonl_file.write(record.json_line() + "\n")

    def close(self) -> None:
        with self._lock:
            if self._csv_file is not None:
                self._csv_file.close()
            if self._jsonl_file is not None:
                self._jsonl_file.close()


def threshold_scan(
    cfg: ExperimentConfig,
    csv_path: str | None = None,
    jsonl_path: str | None = None,
) -> ScanResult:
    """Run every (n, c, trial) combination and summarize each cell.

    Trials run concurrently up to cfg.workers; the sink appends whole
    cells in grid order, so outputs are byte-identical for a fixed
    (config, master_seed) regardless of worker count.
    """
    sink = _Sink(csv_path, jsonl_path)
    records: list[TrialRecord] = []
    summaries: list[CellSummary] = []
    bases = {n: _base_graph(cfg, n) for n in cfg.n_grid}
    try:
        for cell_id, n, c in cfg.cells():
            p = min(c * n ** (-2.0 / cfg.k), 1.0)
            base = bases[n]

            def job(trial: int, _n=n, _c=c, _p=p, _base=base, _id=cell_id):
                return _run_trial(cfg, _base, _id, _n, _c, _p, trial)

            if cfg.workers > 1:
                with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                    cell_records = list(pool.map(job, range(cfg.trials)))
            else:
                cell_records = [job(t) for t in range(cfg.trials)]
            sink.append(cell_records)
            records.extend(cell_records)
            tiled = sum(1 for rec in cell_records if rec.outcome == "tiled")
            low, high = wilson_interval(tiled, cfg.trials)
            summaries.append(
                CellSummary(n, c, p, cfg.trials, tiled, tiled / cfg.trials, low, high)
            )
    finally:
        sink.close()
    return ScanResult(tuple(records), tuple(summaries))


def _probability_at(
    cfg: ExperimentConfig, base: Graph, n: int, c: float, eval_index: int
) -> float:
    p = min(c * n ** (-2.0 / cfg.k), 1.0)
    tiled = 0
    for trial in range(cfg.trials):
        seed = mix(cfg.master_seed, _BISECT_TAG, n, eval_index, trial)
        record = _run_trial(cfg, base, 0, n, c, p, trial, seed=seed)
        if record.outcome == "tiled":
            tiled += 1
    return tiled / cfg.trials


def bisect_constant(
    cfg: ExperimentConfig,
    target: float = 0.5,
    tolerance: float = 0.25,
    widen_cap: int = 6,
) -> tuple[BisectResult, ...]:
    """Geometric bisection on c locating where the empirical tiling
    probability crosses the target, one result per host size.

    Assumes, without asserting, that the probability is monotone in c;
    the evaluations field records every probe so a violation is visible
    in the output.  A non-bracketing start widens geometrically up to
    widen_cap doublings per side, then collapses to the nearer edge.
    """
    if not 0.0 < target < 1.0:
        raise ValueError("target probability must lie strictly in (0, 1)")
    if tolerance <= 0.0:
        raise ValueError("tolerance must be positive")
    results = []
    for n in cfg.n_grid:
        base = _base_graph(cfg, n)
        evals: list[tuple[float, float]] = []
        counter = 0

        def probe(c: float, _n=n, _base=base) -> float:
            nonlocal counter
            prob = _probability_at(cfg, _base, _n, c, counter)
            counter += 1
            evals.append((c, prob))
            return prob

        lo = min(cfg.c_grid)
        hi = max(cfg.c_grid)
        if hi <= lo:
            hi = lo * 4.0 if lo > 0 else 1.0
        if lo <= 0:
            lo = hi / 2.0 ** (widen_cap + 2)
        p_lo = probe(lo)
        widened = 0
        while p_lo >= target and widened < widen_cap:
            lo /= 2.0
            p_lo = probe(lo)
            widened += 1
        if p_lo >= target:
            results.append(
                BisectResult(n, lo, (lo, lo), "collapsed-low", tuple(evals))
            )
            continue
        p_hi = probe(hi)
        widened = 0
        while p_hi < target and widened < widen_cap:
            hi *= 2.0
            p_hi = probe(hi)
            widened += 1
        if p_hi < target:
            results.append(
                BisectResult(n, hi, (lo, hi), "collapsed-high", tuple(evals))
            )
            continue
        for _ in range(40):
            if hi <= lo * (1.0 + tolerance):
                break
            mid = math.sqrt(lo * hi)
            if probe(mid) >= target:
                hi = mid
            else:
                lo = mid
        results.append(
            BisectResult(n, math.sqrt(lo * hi), (lo, hi), "ok", tuple(evals))
        )
    return tuple(results)
