"""Contract tests for the latsurg command line: outputs and exit codes."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

from src.main import EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, main

FIXTURES = Path(__file__).parent / "fixtures"
REPO_ROOT = Path(__file__).parents[2]


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Run every CLI test with default configuration."""
    for key in (
        "LOG_LEVEL",
        "LATSURG_SEED",
        "LATSURG_ROUNDS",
        "LATSURG_DENSE_LIMIT",
        "LATSURG_DISTANCE",
        "LATSURG_TRN_COUNT",
        "LATSURG_GRID",
    ):
        monkeypatch.delenv(key, raising=False)


@pytest.fixture()
def golden_schedule(tmp_path):
    """Path of the compiled five-qubit schedule."""
    out = tmp_path / "golden.json"
    assert main(["compile", str(FIXTURES / "five_qubit.circ"), "-o", str(out)]) == EXIT_OK
    return out


def _json_lines(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def test_compile_prints_metrics(tmp_path, capsys):
    """compile writes the schedule and prints its metrics."""
    out = tmp_path / "s.json"
    code = main(["compile", str(FIXTURES / "five_qubit.circ"), "-o", str(out)])
    assert code == EXIT_OK
    assert json.loads(capsys.readouterr().out) == {"tiles_used": 6, "timesteps": 6}
    assert json.loads(out.read_text())["version"] == 1


def test_compile_parse_error_is_domain_error(tmp_path, capsys):
    """A malformed circuit exits 1 with the position on stderr."""
    circ = tmp_path / "bad.circ"
    circ.write_text("qubits 2\nCNOT q0 q5\n")
    code = main(["compile", str(circ), "-o", str(tmp_path / "s.json")])
    assert code == EXIT_DOMAIN
    assert "line 2, col 9" in capsys.readouterr().err


def test_compile_without_trn_is_domain_error(tmp_path, capsys):
    """Two-qubit gates with --trn 0 exit 1."""
    code = main(
        ["compile", str(FIXTURES / "five_qubit.circ"), "--trn", "0", "-o", str(tmp_path / "s")]
    )
    assert code == EXIT_DOMAIN
    assert "trn_count is 0" in capsys.readouterr().err


def test_compile_bad_distance_is_domain_error(tmp_path):
    """An invalid distance flag exits 1."""
    code = main(
        ["compile", str(FIXTURES / "five_qubit.circ"), "-d", "1", "-o", str(tmp_path / "s")]
    )
    assert code == EXIT_DOMAIN


def test_missing_arguments_is_usage_error():
    """Missing required arguments exit 2."""
    assert main(["compile"]) == EXIT_USAGE
    assert main([]) == EXIT_USAGE


def test_unknown_suite_is_usage_error():
    """Suite names outside the registered set exit 2."""
    assert main(["verify", "--suite", "bogus"]) == EXIT_USAGE


def test_invalid_environment_is_usage_error(monkeypatch):
    """A bad LATSURG_* variable exits 2."""
    monkeypatch.setenv("LATSURG_DISTANCE", "one")
    assert main(["verify", "--suite", "table1"]) == EXIT_USAGE


def test_simulate_logical(golden_schedule, capsys):
    """simulate prints one JSON record per action and a summary."""
    capsys.readouterr()
    assert main(["simulate", str(golden_schedule)]) == EXIT_OK
    records = _json_lines(capsys.readouterr().out)
    assert len(records) == 16
    assert records[0] == {
        "step": 1,
        "tier": "logical",
        "action": "inject Z_{pi/8}@q0",
        "outcomes": {},
    }
    assert records[-1]["summary"] is True
    assert records[-1]["fidelity"] == pytest.approx(1.0)


def test_simulate_trials_tag_records(golden_schedule, capsys):
    """With several trials every record carries its trial index."""
    capsys.readouterr()
    assert main(["simulate", str(golden_schedule), "--trials", "2", "--seed", "4"]) == EXIT_OK
    records = _json_lines(capsys.readouterr().out)
    assert {r["trial"] for r in records} == {0, 1}
    assert [r["seed"] for r in records if r.get("summary")] == [4, 5]


def test_simulate_physical_refuses_magic_state(tmp_path, capsys):
    """A T gate on |+> cannot run at the physical tier."""
    circ = tmp_path / "magic.circ"
    circ.write_text("qubits 1\nH q0\nT q0\n")
    out = tmp_path / "magic.json"
    assert main(["compile", str(circ), "--trn", "0", "-o", str(out)]) == EXIT_OK
    assert main(["simulate", str(out), "--tier", "physical"]) == EXIT_DOMAIN
    assert "step 4" in capsys.readouterr().err


def test_simulate_noise_prints_csv(golden_schedule, capsys):
    """--noise estimates a memory error rate as CSV."""
    capsys.readouterr()
    code = main(["simulate", str(golden_schedule), "--noise", "0.0", "--trials", "50"])
    assert code == EXIT_OK
    header, row = capsys.readouterr().out.splitlines()
    assert header == "d,p,trials,failures,rate,stderr,seed"
    assert row.startswith("2,0.0,50,0,")


def test_simulate_corrupt_schedule(tmp_path, capsys):
    """A corrupt schedule file exits 1."""
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert main(["simulate", str(bad)]) == EXIT_DOMAIN
    assert "unsupported schedule version" in capsys.readouterr().err


def test_verify_prints_results_and_summary(capsys):
    """verify prints one record per check and a summary line."""
    assert main(["verify", "--suite", "golden"]) == EXIT_OK
    records = _json_lines(capsys.readouterr().out)
    summary = records[-1]
    assert summary == {"summary": True, "suite": "golden", "passed": 8, "failed": 0}
    assert all(r["passed"] for r in records[:-1])


def test_verify_table1_suite(capsys):
    """The gate-table suite is reachable under its published name."""
    assert main(["verify", "--suite", "table1"]) == EXIT_OK
    records = _json_lines(capsys.readouterr().out)
    assert records[-1]["suite"] == "table1"
    assert records[-1]["failed"] == 0
    assert records[-1]["passed"] >= 11
    assert {r["suite"] for r in records[:-1]} == {"table1"}


def test_render_ascii_step(golden_schedule, capsys):
    """render --step prints one frame."""
    capsys.readouterr()
    assert main(["render", str(golden_schedule), "--step", "5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "step 5/6" in out
    assert "cz(q3,q4) via T0" in out


def test_render_step_out_of_range(golden_schedule, capsys):
    """A step beyond the schedule exits 1."""
    assert main(["render", str(golden_schedule), "--step", "7"]) == EXIT_DOMAIN
    assert "outside 1..6" in capsys.readouterr().err


def test_render_svg_to_file(golden_schedule, tmp_path):
    """render --format svg -o writes an SVG document."""
    out = tmp_path / "frames.svg"
    assert main(["render", str(golden_schedule), "--format", "svg", "-o", str(out)]) == EXIT_OK
    assert out.read_text().rstrip().endswith("</svg>")


def test_module_entry_point():
    """python -m src.main runs the CLI and returns its exit code."""
    result = subprocess.run(
        [sys.executable, "-m", "src.main", "verify", "--suite", "table1"],
        capture_output=True,
        text=True,
        check=False,
        cwd=REPO_ROOT,
        timeout=120,
    )
    assert result.returncode == 0
    assert json.loads(result.stdout.splitlines()[-1])["failed"] == 0
