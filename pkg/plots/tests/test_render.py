"""Rendering: schema guard, aggregation, legend counts, determinism."""

from __future__ import annotations

import csv
import hashlib
import re

import pytest

from cliquefactor_plots import (
    CSV_COLUMNS,
    CurveSpec,
    SchemaMismatch,
    load_results,
    render,
    wilson_interval,
)
from cliquefactor_plots.cli import main


def make_csv(path, rows):
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([row[name] for name in CSV_COLUMNS])
    return str(path)


def trial_row(n, c, trial, outcome, alpha="0.4"):
    return {
        "r": "3", "k": "2", "base": "lower-bound", "alpha": alpha, "gamma": "0.1",
        "n": str(n), "c": repr(float(c)), "p": repr(float(c) * n ** -1.0),
        "trial": str(trial), "seed": str(1000 + trial), "outcome": outcome,
        "leftover": "0" if outcome == "tiled" else str(n),
        "solver_ms": "1.0", "total_ms": "2.0",
    }


def sigmoid_rows(n, cs, trials=10):
    rows = []
    for i, c in enumerate(cs):
        tiled = round(trials * i / (len(cs) - 1))
        for t in range(trials):
            outcome = "tiled" if t < tiled else "untiled"
            rows.append(trial_row(n, c, t, outcome))
    return rows


class TestWilson:
    def test_contains_point_estimate(self):
        for tiled, trials in [(0, 10), (10, 10), (3, 7), (1, 1)]:
            low, high = wilson_interval(tiled, trials)
            assert 0.0 <= low <= tiled / trials <= high <= 1.0


class TestCurveSpec:
    def test_valid_groups(self):
        CurveSpec(group="n")
        CurveSpec(group="alpha")

    def test_invalid_group(self):
        with pytest.raises(ValueError, match="group"):
            CurveSpec(group="seed")

    def test_invalid_axis(self):
        with pytest.raises(ValueError, match="x axis"):
            CurveSpec(x="p")


class TestLoadResults:
    def test_reads_rows(self, tmp_path):
        path = make_csv(tmp_path / "ok.csv", sigmoid_rows(60, [0.1, 1.0], trials=4))
        rows = load_results(path)
        assert len(rows) == 8
        assert rows[0]["outcome"] in {"tiled", "untiled"}

    def test_rejects_wrong_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("r,k,wrong\n1,2,3\n")
        with pytest.raises(SchemaMismatch) as err:
            load_results(str(path))
        assert "missing columns" in str(err.value)
        assert "unexpected columns: wrong" in str(err.value)

    def test_rejects_reordered_header(self, tmp_path):
        path = tmp_path / "re.csv"
        path.write_text(",".join(reversed(CSV_COLUMNS)) + "\n")
        with pytest.raises(SchemaMismatch, match="column order"):
            load_results(str(path))

    def test_rejects_ragged_row(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text(",".join(CSV_COLUMNS) + "\n1,2,3\n")
        with pytest.raises(SchemaMismatch):
            load_results(str(path))


class TestRender:
    def test_single_cell_single_point(self, tmp_path):
        rows = [trial_row(60, 1.0, t, "tiled" if t < 3 else "untiled") for t in range(5)]
        path = make_csv(tmp_path / "one.csv", rows)
        out = tmp_path / "one.svg"
        report = render(path, CurveSpec(group="n"), str(out))
        assert out.exists()
        assert list(report.cells) == ["60"]
        (point,) = report.cells["60"]
        assert point.trials == 5
        assert point.probability == 0.6
        assert point.low <= point.probability <= point.high

    def test_legend_counts_equal_row_counts(self, tmp_path):
        rows = sigmoid_rows(30, [0.1, 0.5, 2.0], trials=7)
        rows += sigmoid_rows(60, [0.1, 0.5, 2.0], trials=9)
        path = make_csv(tmp_path / "two.csv", rows)
        out = tmp_path / "two.svg"
        report = render(path, CurveSpec(group="n"), str(out))
        svg = out.read_text()
        legend_counts = {
            group: int(count)
            for group, count in re.findall(r"n=(\d+) \((\d+) trials\)", svg)
        }
        expected = {"30": 21, "60": 27}
        assert legend_counts == expected
        assert report.group_rows == expected
        assert sum(report.group_rows.values()) == report.rows == 48

    def test_sigmoid_trend_per_group(self, tmp_path):
        path = make_csv(
            tmp_path / "sig.csv", sigmoid_rows(60, [0.05, 0.2, 0.8, 3.2], trials=10)
        )
        report = render(path, CurveSpec(group="n"), str(tmp_path / "sig.svg"))
        probs = [point.probability for point in report.cells["60"]]
        assert probs == sorted(probs)
        assert probs[0] == 0.0
        assert probs[-1] == 1.0

    def test_group_by_alpha(self, tmp_path):
        rows = [trial_row(60, 1.0, t, "tiled", alpha="0.4") for t in range(3)]
        rows += [trial_row(60, 1.0, t, "untiled", alpha="0.5") for t in range(3)]
        path = make_csv(tmp_path / "al.csv", rows)
        report = render(path, CurveSpec(group="alpha"), str(tmp_path / "al.svg"))
        assert set(report.cells) == {"0.4", "0.5"}

    def test_svg_byte_stable(self, tmp_path):
        path = make_csv(tmp_path / "s.csv", sigmoid_rows(60, [0.1, 1.0], trials=5))
        digests = []
        for name in ("a.svg", "b.svg"):
            out = tmp_path / name
            render(path, CurveSpec(group="n"), str(out))
            digests.append(hashlib.sha256(out.read_bytes()).hexdigest())
        assert digests[0] == digests[1]

    def test_png_output(self, tmp_path):
        path = make_csv(tmp_path / "s.csv", sigmoid_rows(60, [0.1, 1.0], trials=5))
        out = tmp_path / "fig.png"
        render(path, CurveSpec(group="n"), str(out))
        assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


class TestCli:
    def test_render_success(self, tmp_path, capsys):
        path = make_csv(tmp_path / "s.csv", sigmoid_rows(60, [0.1, 1.0], trials=5))
        out = tmp_path / "fig.svg"
        code = main(["render", "--in", path, "--group", "n", "--x", "c", "--out", str(out)])
        assert code == 0
        assert "wrote" in capsys.readouterr().out
        assert out.exists()

    def test_schema_mismatch_exit_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("r,k,wrong\n")
        code = main(["render", "--in", str(bad), "--out", str(tmp_path / "x.svg")])
        assert code == 2
        err = capsys.readouterr().err
        assert "missing columns" in err

    def test_empty_file_warns_and_succeeds(self, tmp_path, capsys):
        empty = tmp_path / "empty.csv"
        empty.write_text(",".join(CSV_COLUMNS) + "\n")
        out = tmp_path / "empty.svg"
        code = main(["render", "--in", str(empty), "--out", str(out)])
        assert code == 0
        assert "warning" in capsys.readouterr().err
        assert out.exists()

    def test_missing_file_exit_code(self, tmp_path, capsys):
        code = main(["render", "--in", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "x.svg")])
        assert code == 2
        assert "error" in capsys.readouterr().err
