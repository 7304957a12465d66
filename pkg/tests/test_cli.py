import json
import subprocess
import sys

import pytest

from unisolv.cli import SCHEMA, main, parse_k_range
from unisolv.dofsys import OPEN_CASE_LABEL


def run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(argv + ["--out", str(out)])
    doc = json.loads(out.read_text()) if out.exists() else None
    return code, doc, out


def test_parse_k_range():
    assert parse_k_range("3") == [3]
    assert parse_k_range("1..4") == [1, 2, 3, 4]


def test_verify_planar(tmp_path):
    code, doc, _ = run(["verify", "--k", "2", "--d", "2", "--reference"], tmp_path)
    assert code == 0
    assert doc["schema"] == SCHEMA
    (rep,) = doc["reports"]
    assert rep["verdict"] == "unisolvent" and rep["dim"] == 14


def test_verify_spatial_singular(tmp_path):
    code, doc, _ = run(["verify", "--k", "2", "--d", "3", "--reference"], tmp_path)
    assert code == 0
    (rep,) = doc["reports"]
    assert rep["verdict"] == "singular" and len(rep["kernel"]) == 1 and rep["det"] == "0"


def test_verify_random_seeded(tmp_path):
    code, doc, _ = run(["verify", "--k", "1", "--d", "2", "--random", "5", "--seed", "42"], tmp_path)
    assert code == 0
    assert len(doc["reports"]) == 5
    assert all(r["verdict"] == "unisolvent" and r["seed"] == 42 for r in doc["reports"])


def test_spatial_random_quadratic_is_labelled_open(tmp_path):
    code, doc, _ = run(["verify", "--k", "2", "--d", "3", "--random", "1", "--seed", "3"], tmp_path)
    assert code == 0
    assert doc["reports"][0]["label"] == OPEN_CASE_LABEL
    assert doc["expectations"][0]["expected"] is None


def test_open_case_needs_flag(tmp_path, capsys):
    code, doc, _ = run(["verify", "--k", "3", "--d", "3"], tmp_path)
    assert code == 2 and doc is None
    assert "--exploratory" in capsys.readouterr().err


def test_identical_config_is_byte_identical(tmp_path):
    argv = ["verify", "--k", "1..2", "--d", "2", "--random", "2", "--seed", "9"]
    _, _, a = run(argv, tmp_path, "a.json")
    _, _, b = run(argv, tmp_path, "b.json")
    assert a.read_bytes() == b.read_bytes()


def test_seed_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("UNISOLV_SEED", "42")
    _, doc_env, _ = run(["verify", "--k", "1", "--random", "2", "--seed", "1"], tmp_path, "a.json")
    monkeypatch.delenv("UNISOLV_SEED")
    _, doc_arg, _ = run(["verify", "--k", "1", "--random", "2", "--seed", "42"], tmp_path, "b.json")
    assert doc_env == doc_arg
    assert doc_env["config"]["seed"] == 42
    monkeypatch.setenv("UNISOLV_SEED", "nope")
    assert main(["verify", "--k", "1"]) == 2


def test_bad_inputs_exit_2(tmp_path, capsys):
    assert main(["verify", "--k", "1", "--simplex", str(tmp_path / "missing.json")]) == 2
    flat = tmp_path / "flat.json"
    flat.write_text(json.dumps({"dim": 2, "vertices": [["0", "0"], ["1", "1"], ["2", "2"]]}))
    assert main(["verify", "--k", "1", "--simplex", str(flat)]) == 2
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{not json")
    assert main(["verify", "--k", "1", "--simplex", str(garbage)]) == 2
    assert main(["verify", "--k", "1", "--random", "0"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--k", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--k", "1", "--d", "4"])
    assert exc.value.code == 2


def test_simplex_file(tmp_path):
    tri = tmp_path / "tri.json"
    tri.write_text(json.dumps({"dim": 2, "vertices": [["1/3", "-2"], ["4", "1/2"], ["-1", "3"]]}))
    code, doc, _ = run(["verify", "--k", "1..3", "--simplex", str(tri)], tmp_path)
    assert code == 0
    assert [r["verdict"] for r in doc["reports"]] == ["unisolvent"] * 3
    assert main(["verify", "--k", "1", "--d", "3", "--simplex", str(tri)]) == 2


def test_certificate_command(tmp_path):
    code, doc, _ = run(["certificate", "--k", "1..3", "--random", "4", "--seed", "7"], tmp_path)
    assert code == 0 and doc["passed"]
    assert len(doc["random"]) == 12
    fixtures = {f["name"]: f for f in doc["fixtures"]}
    assert fixtures["k=2 (0,z,1) at z=2"]["det_elimination"] == {"re": "1/180", "im": "0"}
    assert fixtures["repeated-point k=2"]["det_closed_form"] == {"re": "0", "im": "0"}
    assert all(a["ok"] for a in doc["alpha"])


def test_counterexample_command(tmp_path, capsys):
    code, doc, _ = run(["counterexample"], tmp_path)
    assert code == 0
    assert "5/5 checks pass" in capsys.readouterr().out
    assert len(doc["functional_values"]) == 39
    assert doc["kernel_dimension"] == 1


def test_dual_basis_command(tmp_path):
    code, doc, _ = run(["dual-basis", "--k", "1", "--d", "2", "--reference"], tmp_path, "cr.json")
    assert code == 0 and len(doc["fields"]) == 6
    assert doc["biorthogonality"]["identity"] is True
    code, doc, _ = run(["dual-basis", "--k", "2", "--d", "2"], tmp_path)
    assert code == 0 and len(doc["fields"]) == 14
    code, doc, _ = run(["dual-basis", "--k", "2", "--d", "3", "--reference"], tmp_path)
    assert code == 1 and doc["refused"] is True
    assert doc["unisolvence_report"]["verdict"] == "singular"
    assert main(["dual-basis", "--k", "1..2"]) == 2


def test_report_command(tmp_path):
    code, doc, _ = run(["report", "--all", "--max-k", "2", "--random", "2"], tmp_path)
    assert code == 0 and doc["passed"]
    assert len(doc["counting"]) == 4
    assert doc["counterexample"]["passed"] is True


def test_stdout_is_pure_json():
    proc = subprocess.run([sys.executable, "-m", "unisolv", "verify", "--k", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["schema"] == SCHEMA
    assert "[ok]" in proc.stderr
