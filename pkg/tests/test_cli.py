import json
import subprocess
import sys
from pathlib import Path

import pytest

from strcheck.cli import main, parse_seeds, percent

MODELS = Path(__file__).resolve().parent.parent / "models"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_lockpair_json(capsys):
    code, out, _ = run(capsys, "check", str(MODELS / "lockpair.gcl"), "--strategy=str",
                       "--format=json")
    data = json.loads(out)
    assert code == 0
    assert set(data) == {"model", "strategy", "states", "transitions", "external_states",
                         "deadlocks", "violated", "time_ms"}
    assert data["strategy"] == "str" and data["violated"] is False


def test_check_deadlock_spor(capsys):
    code, out, _ = run(capsys, "check", "deadlock2", "--strategy", "spor", "--format", "json")
    assert code == 0 and json.loads(out)["deadlocks"] == 1


def test_violation_exit_code_and_trace(capsys):
    code, out, _ = run(capsys, "check", "prog1", "--property", "x < 1")
    assert code == 1
    assert "invariant violated" in out and "x:=1@1" in out


def test_missing_file(capsys):
    code, _, err = run(capsys, "check", "missing.gcl")
    assert code == 2 and "missing.gcl" in err


def test_parse_error_location(tmp_path, capsys):
    bad = tmp_path / "bad.gcl"
    bad.write_text("model bad;\nvar x : int[0,2] = 0;\nproperty y = 1;\n")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2
    assert err.strip() == f"{bad}:3:10: undeclared variable 'y'"


def test_bad_property_override(capsys):
    code, _, err = run(capsys, "check", "prog1", "--property", "q = 1")
    assert code == 2 and "<property>:1:1" in err


def test_usage_error(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "check", "prog1", "--strategy", "magic")[0] == 2


def test_resource_bound(capsys):
    code, _, err = run(capsys, "check", "indep(3,4)", "--strategy", "none", "--max-states", "10")
    assert code == 3 and "resource bound" in err


def test_timeout(capsys):
    code = run(capsys, "check", "indep(4,6)", "--strategy", "none", "--timeout-ms", "0")[0]
    assert code == 3


def test_compare_indep_csv(capsys):
    code, out, _ = run(capsys, "compare", "indep(3,4)", "--format", "csv")
    rows = [line.split(",") for line in out.strip().splitlines()]
    header, body = rows[0], {r[1]: dict(zip(rows[0], r)) for r in rows[1:]}
    assert code == 0 and "states_pct" in header
    assert body["str"]["external_states"] == "8" and body["str"]["states_pct"] == "12.5"
    assert body["none"]["states"] == "64"


def test_compare_prog1_subset(capsys):
    code, out, _ = run(capsys, "compare", "prog1", "--strategies", "none,str", "--format=json")
    rows = json.loads(out)
    assert [(r["strategy"], r["external_states"]) for r in rows] == [("none", 9), ("str", 4)]


def test_compare_baseline_only(capsys):
    _, out, _ = run(capsys, "compare", "prog1", "--strategies", "none", "--format=json")
    (row,) = json.loads(out)
    assert row["states_pct"] == "100.0"


def test_compare_text_table(capsys):
    _, out, _ = run(capsys, "compare", "lockpair")
    lines = out.splitlines()
    assert lines[0] == "model lockpair"
    assert lines[1].split()[:3] == ["strategy", "states", "external"]
    assert len(lines) == 6


def test_validate_seeds(capsys):
    code, out, _ = run(capsys, "validate", "--seeds=0..99")
    assert code == 0 and out.strip().endswith("over 100 models")


def test_validate_reference(capsys):
    assert run(capsys, "validate", "--reference")[0] == 0


def test_validate_catches_broken_movers(capsys):
    code, out, _ = run(capsys, "validate", "--reference", "--broken-movers", "--strategies=tr")
    assert code == 1 and "minimized model" in out


def test_helpers():
    assert parse_seeds("0..3,7") == [0, 1, 2, 3, 7]
    assert percent(1, 8) == "12.5"
    assert percent(1, 16) == "6.3"  # half-up, not banker's rounding
    assert percent(0, 0) == "0.0"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "strcheck", "check", str(MODELS / "prog1.gcl"), "--format=json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["external_states"] == 4


@pytest.mark.parametrize("path", sorted(MODELS.glob("*.gcl")), ids=lambda p: p.stem)
def test_shipped_models_match_builtins(path):
    from strcheck.gcl import parse_file
    from strcheck.reference import reference_model

    name = "indep(3,4)" if path.stem == "indep_3_4" else path.stem
    assert parse_file(path) == reference_model(name)
