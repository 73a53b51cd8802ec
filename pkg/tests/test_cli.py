import subprocess
import sys
from pathlib import Path

import pytest

from chaintrace import Ledger, read_records_csv
from chaintrace.cli import main

FIXTURE = Path(__file__).parent / "data" / "utxo_small.csv"


@pytest.fixture
def small_ledger_path(tmp_path, example_ledger) -> Path:
    path = tmp_path / "ledger.jsonl"
    example_ledger.to_jsonl(path)
    return path


class TestGen:
    def test_writes_jsonl(self, tmp_path, capsys):
        out = tmp_path / "gen.jsonl"
        code = main(["gen", "--n", "500", "--seed", "3", "--out", str(out)])
        assert code == 0
        assert "500" in capsys.readouterr().out
        assert len(Ledger.from_jsonl(out)) == 500

    def test_repeat_runs_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        args = ["gen", "--n", "300", "--seed", "9", "--root-fraction", "0.4"]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestIngest:
    def test_converts_fixture(self, tmp_path, capsys):
        out = tmp_path / "utxo.jsonl"
        code = main(
            [
                "ingest", "--input", str(FIXTURE),
                "--min-position", "1000", "--max-position", "1999",
                "--out", str(out),
            ]
        )
        assert code == 0
        assert len(Ledger.from_jsonl(out)) == 269


class TestTrace:
    def test_prints_predecessors_and_metrics(self, small_ledger_path, capsys):
        code = main(
            [
                "trace", "--ledger", str(small_ledger_path), "--id", "5",
                "--alpha", "2", "--replicas", "0",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "predecessors (4): 1 2 3 4" in out
        assert "lookups=5" in out
        assert "rounds=3" in out
        assert "ratio_vs_bfs=1.6667" in out

    def test_unknown_id_fails_with_class_name(self, small_ledger_path, capsys):
        code = main(
            ["trace", "--ledger", str(small_ledger_path), "--id", "99"]
        )
        assert code == 1
        assert "UnknownId" in capsys.readouterr().err

    def test_missing_ledger_reports_class_name(self, tmp_path, capsys):
        code = main(
            ["trace", "--ledger", str(tmp_path / "nope.jsonl"), "--id", "1"]
        )
        assert code == 1
        assert "FileNotFoundError" in capsys.readouterr().err


class TestBench:
    def test_single_cell(self, small_ledger_path, capsys):
        code = main(
            [
                "bench", "--ledger", str(small_ledger_path),
                "--alpha", "2", "--replicas", "0", "--queries", "5",
            ]
        )
        assert code == 0
        assert "ratio=1.6667" in capsys.readouterr().out


class TestSweep:
    def test_grid_csv_and_fit(self, small_ledger_path, tmp_path, capsys):
        out = tmp_path / "records.csv"
        code = main(
            [
                "sweep", "--ledger", str(small_ledger_path),
                "--alphas", "1..3", "--replica-values", "0,1",
                "--queries", "5", "--out", str(out),
            ]
        )
        assert code == 0
        records = read_records_csv(out)
        assert len(records) == 6
        assert {r.alpha for r in records} == {1, 2, 3}

    def test_sweep_reruns_byte_identical(self, tmp_path):
        gen = tmp_path / "ledger.jsonl"
        assert main(["gen", "--n", "400", "--seed", "2", "--out", str(gen)]) == 0
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = [
            "sweep", "--ledger", str(gen), "--alphas", "1..4",
            "--replica-values", "0..2", "--policy", "hash", "--seed", "5",
            "--repeats", "3", "--deepest", "5",
        ]
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b), "--jobs", "2"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_summary_file(self, small_ledger_path, tmp_path):
        out = tmp_path / "records.csv"
        summary = tmp_path / "summary.txt"
        code = main(
            [
                "sweep", "--ledger", str(small_ledger_path),
                "--alphas", "1,2", "--replica-values", "0,1",
                "--queries", "5", "--out", str(out),
                "--summary-out", str(summary),
            ]
        )
        assert code == 0
        assert "max parallelization ratio" in summary.read_text()


def test_console_entry_point_runs():
    # True subprocess smoke test of the installed script.
    proc = subprocess.run(
        [sys.executable, "-m", "chaintrace.cli", "--help"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "sweep" in proc.stdout
