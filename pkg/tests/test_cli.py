import json
import shutil
import subprocess
import sys

import pytest

from skolemlab.cli import main
from skolemlab.report import validate_report


def run(capsys, *argv, code=0):
    assert main(list(argv)) == code
    out = capsys.readouterr().out.strip()
    return out


def report(capsys, *argv, code=0):
    doc = json.loads(run(capsys, *argv, code=code))
    validate_report(doc)
    return doc


def test_minval_exact_output(capsys):
    out = run(capsys, "minval", "--poly", "t + x^2", "--scene", "scenes/a.json")
    assert out == '{"lines":[[0,"1"],[2,"0"]],"breakpoints":["1/2"]}'


def test_eval_pole_is_a_value(capsys):
    doc = report(capsys, "eval", "--phi", "1/x", "--at", "0")
    assert doc["checks"][0]["details"]["value"] == "POLE"
    doc = report(capsys, "eval", "--phi", "t*(1+x^4)/((1+t*x^2)*(t+x^2))", "--at", "1")
    assert doc["checks"][0]["details"]["valuation"] == "1"


def test_locpoly_and_exactness(capsys):
    out = json.loads(run(capsys, "locpoly", "--poly", "x^2 - t^2", "--t", "t"))
    assert out["d_index"] == 2 and out["residue_poly"] == ["2", "0", "1"]
    out = json.loads(run(capsys, "exactness", "--poly", "x^2 - t^2", "--at", "t"))
    assert out["exact"] is False and out["witness_root"] is True


def test_verify_vx2t2(capsys):
    doc = report(capsys, "verify", "vx2t2", "--scene", "scenes/b.json", "--seed", "7")
    assert doc["suite"] == "vx2t2" and doc["seed"] == 7
    fp = [c for c in doc["checks"] if c["name"] == "forced_profile"][0]
    assert fp["status"] == "pass" and fp["details"]["pattern"] == "ContradictionPattern(-1, >=0)"


def test_verify_pvd_x2m(capsys):
    doc = report(capsys, "verify", "pvd-x2m", "--scene", "c", "--samples", "40", "--negatives", "10")
    assert [c["status"] for c in doc["checks"]] == ["pass", "pass", "evidence", "theorem-level"]


def test_certify_exit_codes(capsys):
    doc = report(capsys, "certify", "--phi", "(x^3-x)/t", "--scene", "a", "--tree")
    assert doc["checks"][0]["status"] == "pass" and "branch_tree" in doc["checks"][0]["details"]
    doc = report(capsys, "certify", "--phi", "(x^2+1)/t", code=1)
    assert doc["checks"][0]["details"]["point"] == "0"
    report(capsys, "certify", "--phi", "x", "--scene", "b", "--seed", "1")
    report(capsys, "certify", "--phi", "x", "--scene", "b", "--seed", "1", "--strict", code=3)


def test_usage_and_scene_errors(capsys):
    assert main(["eval", "--phi", "x +", "--at", "0"]) == 2
    assert "position" in capsys.readouterr().err
    assert main(["eval", "--phi", "x", "--at", "0", "--scene", "nowhere.json"]) == 2
    assert main(["verify", "vx2t2", "--scene", "a"]) == 2
    assert main(["certify", "--phi", "x", "--scene", "b", "--exhaustive"]) == 2
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2
    capsys.readouterr()


def test_construct_commands(capsys):
    doc = report(capsys, "construct", "lemz", "--eps", "2", "--delta", "1", "--c", "0", "--scene", "a")
    d = doc["checks"][0]["details"]
    assert doc["checks"][0]["status"] == "pass" and d["gamma"] == "3/2" and d["v_a"] == "5"
    assert len(d["grid"]) >= 30
    doc = report(capsys, "construct", "theta", "--samples", "30")
    assert doc["checks"][0]["details"]["self_check"] == "30/30"
    doc = report(capsys, "construct", "rho", "--phi1", "x", "--phi2", "x+t", "--samples", "30")
    assert doc["checks"][0]["status"] == "pass"
    assert main(["construct", "rho", "--phi1", "x"]) == 2
    capsys.readouterr()


def test_sk_check_and_spectra(capsys):
    doc = report(capsys, "sk-check", "--psi", "t*x", "--ideal", "x^2, t^2", "--scene", "b", "--samples", "50")
    assert doc["checks"][0]["status"] == "evidence"
    doc = report(capsys, "sk-check", "--psi", "1", "--ideal", "x", "--points", "0", code=1)
    assert doc["checks"][0]["details"]["member"] is False
    doc = report(capsys, "spectra", "fip", "--ideal", "x, x-1", "--points", "0,1,t", "--scene", "a")
    assert doc["checks"][0]["details"]["fip"]["fip"] is False


def test_seed_env_override_and_determinism(capsys, monkeypatch):
    args = ("verify", "vx2t2", "--scene", "b", "--samples", "30")
    a = run(capsys, *args, "--seed", "3")
    b = run(capsys, *args, "--seed", "3")
    assert a == b
    monkeypatch.setenv("SKOLEMLAB_SEED", "11")
    c = run(capsys, *args, "--seed", "3")
    assert json.loads(c)["seed"] == 11 and c != a
    monkeypatch.setenv("SKOLEMLAB_SEED", "eleven")
    assert main(list(args)) == 2
    capsys.readouterr()


def test_pretty_goes_to_stderr(capsys):
    assert main(["verify", "vx2t2", "--scene", "b", "--samples", "20", "--pretty"]) == 0
    cap = capsys.readouterr()
    json.loads(cap.out)
    assert "[pass] value_ideal_table" in cap.err


def test_module_entry_point():
    exe = shutil.which("skolemlab")
    cmd = [exe] if exe else [sys.executable, "-m", "skolemlab.cli"]
    out = subprocess.run(cmd + ["minval", "--poly", "t + x^2"], capture_output=True, text=True, check=True)
    assert out.stdout.strip() == '{"lines":[[0,"1"],[2,"0"]],"breakpoints":["1/2"]}'
