import json
import subprocess
import sys

import pytest

from conftest import DATA
from decaylab.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_simulate_writes_report(tmp_path, capsys):
    code, out, _ = run(["simulate", "--seed", "3", "--run-count", "1000", "--out-dir", str(tmp_path)], capsys)
    assert code == 0
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["schema"] == "decaylab_report_v1"
    assert doc["arms"][0]["config"]["rng_seed"] == 3
    assert "H_mean=" in out


def test_simulate_requires_seed(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--out-dir", str(tmp_path)])
    assert exc.value.code == 1
    assert "--seed" in capsys.readouterr().err


def test_unknown_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1


def test_breakdown_is_model_error(tmp_path, capsys):
    code, _, err = run(["simulate", "--seed", "1", "--voltage", "1250", "--out-dir", str(tmp_path)], capsys)
    assert code == 3 and "breakdown" in err
    assert json.loads((tmp_path / "report.json").read_text())["status"] == "error"


def test_analyze_bad_file_is_data_error(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("# preset_time_s=1,source=x\n1\n2\n-3\n")
    code, _, err = run(["analyze", str(path), "--out-dir", str(tmp_path / "o")], capsys)
    assert code == 2 and "line 4" in err


def test_analyze_roundtrip(tmp_path, capsys):
    run(["simulate", "--seed", "9", "--run-count", "800", "--out-dir", str(tmp_path / "s")], capsys)
    code, out, _ = run(
        ["analyze", str(tmp_path / "s" / "sr_90_counts.csv"), "--out-dir", str(tmp_path / "a"),
         "--plot-data", str(tmp_path / "p")],
        capsys,
    )
    assert code == 0
    a = json.loads((tmp_path / "a" / "report.json").read_text())["arms"][0]
    s = json.loads((tmp_path / "s" / "report.json").read_text())["arms"][0]
    assert a["entropy"] == s["entropy"] and a["battery"]["results"] == s["battery"]["results"]
    assert (tmp_path / "p" / "frequency.csv").exists()


def test_battery_subcommand(tmp_path, capsys):
    path = tmp_path / "bits.txt"
    path.write_text("0" * 5000)
    code, out, _ = run(["battery", str(path)], capsys)
    assert code == 0 and "FAIL frequency" in out
    code, out, _ = run(["battery", str(path), "--json", "--tests", "runs,frequency"], capsys)
    doc = json.loads(out)
    assert [r["test_name"] for r in doc["results"]] == ["frequency", "runs"]


def test_battery_unknown_test_is_usage_error(tmp_path, capsys):
    path = tmp_path / "bits.txt"
    path.write_text("01" * 100)
    code, _, _ = run(["battery", str(path), "--tests", "nope"], capsys)
    assert code == 1


def test_plateau_from_table(tmp_path, capsys):
    code, out, _ = run(["plateau", "--scan", str(DATA / "co60_plateau_scan.csv"), "--out-dir", str(tmp_path)], capsys)
    assert code == 0
    assert "knee=720 V" in out and "operating=920 V" in out


def test_plateau_without_plateau_is_model_error(tmp_path, capsys):
    scan = tmp_path / "scan.csv"
    scan.write_text("voltage,count\n" + "\n".join(f"{700 + 20 * i},{10 * 2**i}" for i in range(8)))
    code, _, err = run(["plateau", "--scan", str(scan), "--out-dir", str(tmp_path / "o")], capsys)
    assert code == 3 and "no plateau" in err


def test_scenario_custom_vary(tmp_path, capsys):
    code, out, _ = run(
        ["scenario", "custom", "--seed", "2", "--run-count", "600", "--vary", "distance_cm=2,3",
         "--out-dir", str(tmp_path)],
        capsys,
    )
    assert code == 0
    doc = json.loads((tmp_path / "report.json").read_text())
    assert [a["label"] for a in doc["arms"]] == ["distance_cm=2", "distance_cm=3"]
    assert len(doc["verdicts"]) == 5


def test_scenario_custom_without_vary(tmp_path, capsys):
    code, _, _ = run(["scenario", "custom", "--seed", "2", "--out-dir", str(tmp_path)], capsys)
    assert code == 1


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "decaylab.cli", "plateau", "--seed", "1", "--out-dir", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "operating=" in proc.stdout
