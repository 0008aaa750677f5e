import json
import subprocess
import sys

import pytest

from indeplab.cli import main
from indeplab.reports import SCHEMA_VERSION


def run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = main(argv + ["--out", str(out)])
    data = json.loads(out.read_text()) if out.exists() else None
    return code, data, out


RF = ["--tower", "integer", "--p", "3", "--q", "5", "--mode", "RF"]


def test_check_rf_pair(tmp_path):
    code, data, _ = run(["check", *RF, "--set", "0,15", "--depth", "3"], tmp_path)
    assert data["schema_version"] == SCHEMA_VERSION
    assert data["command"] == "check"
    assert code == (0 if data["findings"]["independent"] else 1)
    assert data["config"]["depth"] == 3


def test_check_not_witnessed_exit_code(tmp_path):
    code, data, _ = run(["check", *RF, "--set", "0,16", "--depth", "3"], tmp_path)
    assert code == 1
    assert data["findings"]["status"] == "NotWitnessedUpTo(3)"


def test_check_singleton_free(tmp_path):
    code, data, _ = run(["check", "--set", "aabAAB"], tmp_path)
    assert code == 0
    assert len(data["findings"]["witnesses"]) == 2


def test_malformed_word_exit_code(tmp_path, capsys):
    code, _, out = run(["check", "--set", "ax?"], tmp_path)
    assert code == 2
    assert not out.exists()
    assert "error" in capsys.readouterr().err


def test_bad_flag_exit_code(capsys):
    assert main(["check", "--depth", "many"]) == 2


def test_depth_beyond_tower(tmp_path):
    code, _, _ = run(["check", "--set", "1", "--depth", "5", "--max-depth", "4"], tmp_path)
    assert code == 2


def test_validate_round_trip(tmp_path):
    code, data, out = run(["check", *RF, "--set", "0,15", "--depth", "3"], tmp_path)
    if not data["findings"]["independent"]:
        pytest.skip("nothing to validate")
    code, val, _ = run(["check", "--validate", str(out)], tmp_path, "val.json")
    assert code == 0 and val["findings"]["valid"] is True


def test_validate_free_report(tmp_path):
    code, data, out = run(["check", "--set", "1,aabAABAAb", "--depth", "3"], tmp_path)
    assert code == 0
    code, val, _ = run(["check", "--validate", str(out)], tmp_path, "val.json")
    assert code == 0 and val["findings"]["valid"] is True


def test_tampered_report_fails_validation(tmp_path):
    code, data, out = run(["check", *RF, "--set", "0,15", "--depth", "3"], tmp_path)
    if not data["findings"]["independent"]:
        pytest.skip("nothing to validate")
    w = data["findings"]["witnesses"][0]
    level, ident = w["z"].split(":")
    w["z"] = f"{level}:{(int(ident) + 1) % 3375}"
    out.write_text(json.dumps(data))
    code, val, _ = run(["check", "--validate", str(out)], tmp_path, "val.json")
    assert code == 1 and val["findings"]["valid"] is False


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tower": "integer", "mode": "RF", "depth": 2}))
    code, data, _ = run(["check", "--config", str(cfg), "--set", "0", "--depth", "3"], tmp_path)
    assert code == 0
    assert data["config"]["tower"] == "integer" and data["config"]["depth"] == 3


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"towre": "integer"}))
    code, _, _ = run(["check", "--config", str(cfg), "--set", "0"], tmp_path)
    assert code == 2


def test_search_is_deterministic(tmp_path):
    argv = ["search", *RF, "--radius", "20", "--depth", "3", "--size-cap", "4", "--seed", "7"]
    _, _, a = run(argv, tmp_path, "a.json")
    _, data, b = run(argv, tmp_path, "b.json")
    assert a.read_bytes() == b.read_bytes()
    assert data["findings"]["k_star"] >= 1
    assert "wall_clock_seconds" not in data


def test_timing_is_opt_in(tmp_path):
    _, data, _ = run(["ramsey", "3", "3", "--timing"], tmp_path)
    assert "wall_clock_seconds" in data


def test_ramsey_command(tmp_path):
    code, data, _ = run(["ramsey", "3", "3"], tmp_path)
    assert code == 0 and data["findings"]["value"] == "6"
    code, data, _ = run(["ramsey", "--final"], tmp_path)
    assert data["findings"]["digits"] == 77
    assert main(["ramsey"]) == 2


def test_verify_command(tmp_path):
    code, data, _ = run(["verify", "rf1", "free5", "--exhaustive"], tmp_path)
    assert code == 0
    assert data["findings"]["counterexamples"] == 0
    assert [r["lemma"] for r in data["findings"]["lemmas"]] == ["RF1", "free5"]
    assert main(["verify", "free3"]) == 2


def test_classify_pair_command(tmp_path):
    code, data, _ = run(["classify", "--pair", "aabAABAAb,1"], tmp_path)
    assert code == 0
    assert any(m["type"] == "C3" for m in data["findings"]["matches"])
    assert main(["classify", "--pair", "ab,ab"]) == 2


def test_classify_sample_command(tmp_path):
    code, data, _ = run(["classify", "--sample", "20", "--sketches", "5"], tmp_path)
    assert code == 0 and data["findings"]["disagreements"] == 0


def test_bounds_command(tmp_path):
    code, data, _ = run(["bounds", "C3", "B2", "--radius", "6"], tmp_path)
    assert code == 0
    for r in data["findings"]["types"]:
        assert r["largest_independent"] < r["bound"]
    assert main(["bounds", "Z9"]) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "indeplab", "ramsey", "3", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["findings"]["value"] == "6"
