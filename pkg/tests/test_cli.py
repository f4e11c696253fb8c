import json
import subprocess
import sys
from pathlib import Path

import pytest

from coopfollow.cli import _parse_seeds, main
from coopfollow.recording import read_record

REPO = Path(__file__).resolve().parent.parent
SCENARIOS = REPO / "scenarios"

QUICK = {
    "path": {"segments": [{"kind": "line", "length": 3.0}]},
    "gaps": [[1.4, 1.7]],
    "operator": {"kind": "compliant", "sigma_e2": 0.0, "sigma_e3": 0.0},
    "max_duration": 60.0,
}


@pytest.fixture
def quick_file(tmp_path):
    p = tmp_path / "quick.json"
    p.write_text(json.dumps(QUICK), encoding="utf-8")
    return str(p)


# ---- seed expressions -------------------------------------------------------

def test_parse_seeds_forms():
    assert _parse_seeds("1,2,5-8") == [1, 2, 5, 6, 7, 8]
    assert _parse_seeds("3") == [3]
    assert _parse_seeds(" 1 , 2 ") == [1, 2]
    assert _parse_seeds("-2-1") == [-2, -1, 0, 1]


@pytest.mark.parametrize("bad", ["1,1", "5-3", "", ",", "a"])
def test_parse_seeds_rejects(bad):
    with pytest.raises(ValueError):
        _parse_seeds(bad)


def test_bad_seeds_expression_exits_1(quick_file, tmp_path, capsys):
    rc = main(["batch", quick_file, "--seeds", "5-3", "--out", str(tmp_path)])
    assert rc == 1
    assert "bad --seeds" in capsys.readouterr().err


def test_bad_jobs_exits_1(quick_file, tmp_path, capsys):
    rc = main(["batch", quick_file, "--seeds", "1", "--jobs", "0", "--out", str(tmp_path)])
    assert rc == 1
    assert "--jobs" in capsys.readouterr().err


# ---- run ----------------------------------------------------------------------

def test_run_completes_and_writes_outputs(quick_file, tmp_path, capsys):
    out = tmp_path / "out"
    rc = main(["run", quick_file, "--out", str(out)])
    assert rc == 0
    text = capsys.readouterr().out
    assert "status=completed" in text and "rmse_e2=" in text
    header, rows, footer = read_record(str(out / "run.jsonl"))
    assert footer["status"] == "completed" and len(rows) == footer["ticks"]
    csv = (out / "metrics.csv").read_text().splitlines()
    assert csv[0].startswith("seed,mode,rmse_e2") and len(csv) == 2


def test_run_timeout_exits_2(tmp_path, capsys):
    p = tmp_path / "slow.json"
    p.write_text(json.dumps(dict(QUICK, max_duration=2.0)), encoding="utf-8")
    rc = main(["run", str(p), "--out", str(tmp_path / "o")])
    assert rc == 2
    assert "status=timeout" in capsys.readouterr().out


def test_run_mode_and_seed_overrides_land_in_header(quick_file, tmp_path):
    out = tmp_path / "o"
    assert main(["run", quick_file, "--mode", "MC", "--seed", "9", "--out", str(out)]) == 0
    header, _, _ = read_record(str(out / "run.jsonl"))
    assert header["mode"] == "MC" and header["seed"] == 9


def test_run_unknown_scenario_key_exits_1(tmp_path, capsys):
    p = tmp_path / "typo.json"
    p.write_text(json.dumps(dict(QUICK, sensing_radis=0.4)), encoding="utf-8")
    rc = main(["run", str(p), "--out", str(tmp_path / "o")])
    assert rc == 1
    assert "sensing_radis" in capsys.readouterr().err


def test_run_missing_file_exits_1(tmp_path, capsys):
    rc = main(["run", str(tmp_path / "absent.json"), "--out", str(tmp_path)])
    assert rc == 1
    assert "cannot read" in capsys.readouterr().err


# ---- batch and compare ----------------------------------------------------------

def test_batch_writes_ordered_csv(quick_file, tmp_path, capsys):
    out = tmp_path / "b"
    rc = main(["batch", quick_file, "--seeds", "2,1", "--out", str(out)])
    assert rc == 0
    lines = (out / "batch.csv").read_text().splitlines()
    assert len(lines) == 5
    got = [tuple(l.split(",")[:2]) for l in lines[1:]]
    assert got == [("1", "CC"), ("1", "MC"), ("2", "CC"), ("2", "MC")]


def test_compare_requires_two_seeds(quick_file, tmp_path, capsys):
    rc = main(["compare", quick_file, "--seeds", "1", "--out", str(tmp_path)])
    assert rc == 1
    assert "at least 2 seeds" in capsys.readouterr().err


def test_compare_prints_summary_and_is_deterministic(quick_file, tmp_path, capsys):
    out1, out2 = tmp_path / "c1", tmp_path / "c2"
    assert main(["compare", quick_file, "--seeds", "1-3", "--out", str(out1)]) == 0
    text = capsys.readouterr().out
    assert "pairs=3" in text
    assert "rmse_e2: CC mean=" in text and "CC lower in" in text
    assert main(["compare", quick_file, "--seeds", "1-3", "--out", str(out2),
                 "--jobs", "2"]) == 0
    assert (out1 / "compare.csv").read_bytes() == (out2 / "compare.csv").read_bytes()


# ---- validate -------------------------------------------------------------------

def test_validate_shipped_scenarios(capsys):
    files = sorted(str(p) for p in SCENARIOS.glob("*.json"))
    assert len(files) == 3
    assert main(["validate", *files]) == 0
    out = capsys.readouterr().out
    assert out.count(": ok (") == 3


def test_validate_flags_broken_file(tmp_path, capsys):
    good = str(SCENARIOS / "u_course_cc.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    rc = main(["validate", good, str(bad)])
    assert rc == 1
    captured = capsys.readouterr()
    assert "INVALID" in captured.err and ": ok (" in captured.out


# ---- entry point ----------------------------------------------------------------

def test_module_entry_point_help():
    out = subprocess.run([sys.executable, "-m", "coopfollow.cli", "--help"],
                         capture_output=True, text=True, timeout=30)
    assert out.returncode == 0
    for word in ("run", "batch", "compare", "serve", "validate"):
        assert word in out.stdout
