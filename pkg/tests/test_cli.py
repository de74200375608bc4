import json

import pytest

from qtanner.cli import main
from qtanner.harness import read_results_csv


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_fixture_and_check_round_trip(tmp_path, capsys):
    bundle = tmp_path / "d4-36"
    rc, out = run_cli(capsys, "fixture", "d4-36", "--out", str(bundle))
    assert rc == 0
    assert (bundle / "hx.alist").exists()
    assert (bundle / "meta.json").exists()
    rc, out = run_cli(capsys, "check", str(bundle))
    assert rc == 0
    report = json.loads(out[: out.rindex("}") + 1])
    assert report["valid"] is True
    assert report["orthogonal"] is True
    assert report["qubit_count_formula"] is True


def test_construct_writes_bundle(tmp_path, capsys):
    out_dir = tmp_path / "random-code"
    rc, out = run_cli(
        capsys, "construct", "--group", "6", "--delta", "3",
        "--seed", "3", "--out", str(out_dir),
    )
    assert rc == 0
    assert (out_dir / "hz.alist").exists()
    rc, _ = run_cli(capsys, "check", str(out_dir))
    assert rc == 0


def test_distance_command(capsys):
    rc, out = run_cli(
        capsys, "distance", "--fixture", "d4-36", "--trials", "500", "--seed", "1"
    )
    assert rc == 0
    est = json.loads(out)
    assert est["d_upper"] == 3


def test_spectra_command(capsys):
    rc, out = run_cli(capsys, "spectra", "--fixture", "d4-36")
    assert rc == 0
    summary = json.loads(out)
    assert summary["n_faces"] == 36
    assert summary["spectral"]["bound_satisfied"] is True


def test_simulate_appends_csv(tmp_path, capsys):
    csv_path = tmp_path / "results.csv"
    rc, out = run_cli(
        capsys, "simulate", "--fixture", "d4-36", "--model", "capacity",
        "--p", "0.01", "--shots", "2000", "--seed", "2", "--out", str(csv_path),
    )
    assert rc == 0
    rows = read_results_csv(csv_path)
    assert len(rows) == 1
    assert rows[0]["model"] == "code-capacity"
    assert int(rows[0]["shots_x"]) == 2000


def test_simulate_respects_output_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("QTANNER_OUTPUT_DIR", str(tmp_path))
    rc, _ = run_cli(
        capsys, "simulate", "--fixture", "d4-36", "--model", "capacity",
        "--p", "0.005", "--shots", "500", "--seed", "0",
    )
    assert rc == 0
    assert (tmp_path / "results.csv").exists()


def test_config_file_defaults(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"bp.alpha": 0.5, "osd.order": 4, "shots": 700}))
    csv_path = tmp_path / "r.csv"
    rc, out = run_cli(
        capsys, "--config", str(cfg), "simulate", "--fixture", "d4-36",
        "--model", "capacity", "--p", "0.01", "--seed", "0", "--out", str(csv_path),
    )
    assert rc == 0
    rows = read_results_csv(csv_path)
    assert int(rows[0]["shots_x"]) == 700  # config-supplied shot count


def test_overhead_command(capsys):
    rc, out = run_cli(capsys, "overhead", "--fixture", "d4-36", "--rounds", "3")
    report = json.loads(out)
    assert report["space_time"] == (36 + 32) * (report["d_x"] + report["d_z"]) * 3
    assert report["reference_per_logical"] == 612


def test_sweep_command(tmp_path, capsys):
    out_csv = tmp_path / "sweep.csv"
    rc, out = run_cli(
        capsys, "sweep", "--groups", "8", "--deltas", "3", "--targets", "1:1",
        "--instances", "2", "--trials", "300", "--seed", "5", "--out", str(out_csv),
    )
    assert rc == 0
    rows = json.loads(out[: out.rindex("]") + 1])
    assert rows[0]["delta"] == 3
    assert out_csv.exists()
