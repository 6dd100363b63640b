"""CLI behavior: flag handling, exit codes, formats, determinism."""

import json
import subprocess
import sys

import pytest

from magicsimplex.cli import CommandConfig, main, run


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------


def test_classify_by_line_parameter(capsys):
    code, out, _ = run_cli(capsys, "classify", "--b", "3.5")
    assert code == 0
    assert "BoundEntangled" in out


def test_classify_origin_text(capsys):
    code, out, _ = run_cli(capsys, "classify", "--alpha", "0", "--beta", "0", "--gamma", "0")
    assert code == 0
    assert out.startswith("verdict: Separable")
    assert "pyramid_margin: 0.125" in out


def test_classify_facet_flags(capsys):
    code, out, _ = run_cli(
        capsys, "classify", "--epsilon", "-0.25", "--gamma", "0.25"
    )
    assert code == 0
    assert "verdict:" in out


def test_classify_json(capsys):
    code, out, _ = run_cli(
        capsys, "classify", "--b", "1.5", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["verdict"] == "BoundEntangled"
    assert payload["witness_value"] < 0
    assert set(payload) >= {"alpha", "beta", "gamma", "pt_min_eig", "pyramid_margin"}


def test_classify_csv(capsys):
    code, out, _ = run_cli(capsys, "classify", "--b", "2.5", "--format", "csv")
    assert code == 0
    header, row = out.strip().splitlines()
    assert header == "alpha,beta,gamma,verdict,pt_min_eig,witness_name,witness_value,polygon_member"
    assert row.split(",")[3] == "Separable"


def test_conflicting_point_flags(capsys):
    code, _, err = run_cli(capsys, "classify", "--b", "1", "--alpha", "0")
    assert code == 2
    assert "conflicts" in err


def test_missing_point_flags(capsys):
    code, _, err = run_cli(capsys, "classify")
    assert code == 2
    assert "address a point" in err


def test_epsilon_without_gamma(capsys):
    code, _, err = run_cli(capsys, "classify", "--epsilon", "0.1")
    assert code == 2
    assert "requires --gamma" in err


def test_invalid_line_parameter(capsys):
    code, _, err = run_cli(capsys, "classify", "--b", "9")
    assert code == 2
    assert "[0, 5]" in err


# ---------------------------------------------------------------------------
# lambda-min
# ---------------------------------------------------------------------------


def test_lambda_min_near_optimal_point(capsys):
    code, out, _ = run_cli(
        capsys,
        "lambda-min",
        "--epsilon", "0.119429",
        "--gamma", "0.345586",
        "--tol", "1e-9",
    )
    assert code == 0
    value = float(out.split(":")[1])
    assert abs(value - 0.825694) <= 1e-5


def test_lambda_min_rejects_npt_point(capsys):
    code, _, err = run_cli(capsys, "lambda-min", "--epsilon", "0.11963", "--gamma", "0.35")
    assert code == 2
    assert "NPT" in err


def test_lambda_min_degenerate(capsys):
    code, out, _ = run_cli(
        capsys, "lambda-min", "--alpha", "0", "--beta", "0", "--gamma", "0"
    )
    assert code == 0
    assert "never feasible" in out


def test_lambda_min_json(capsys):
    code, out, _ = run_cli(
        capsys, "lambda-min", "--b", "1.5", "--format", "json"
    )
    assert code == 0
    payload = json.loads(out)
    assert 0.0 < payload["lambda_min"] <= 1.0


# ---------------------------------------------------------------------------
# witness
# ---------------------------------------------------------------------------


def test_witness_listing(capsys):
    code, out, _ = run_cli(capsys, "witness")
    assert code == 0
    for name in ("Pl1", "Pl1m", "Pl2", "Pl2m", "Pl3", "Pl3m"):
        assert name in out


def test_witness_dump_structure(capsys):
    code, out, _ = run_cli(capsys, "witness", "--name", "Pl1")
    assert code == 0
    payload = json.loads(out)
    assert payload["name"] == "Pl1"
    assert payload["matrix"]["dim"] == 9
    assert len(payload["matrix"]["entries"]) == 81
    assert set(payload["plane"]) == {"a_coeff", "b_coeff", "g_coeff", "const"}
    assert payload["plane"]["a_coeff"] == 1.0
    assert payload["plane"]["b_coeff"] == pytest.approx(-0.8, abs=1e-9)
    coeffs = payload["weyl_coefficients"]
    assert len(coeffs) == 9
    assert all(len(entry) == 4 for entry in coeffs)
    assert payload["feasible"] is True


def test_witness_unknown_name(capsys):
    code, _, err = run_cli(capsys, "witness", "--name", "Pl7")
    assert code == 2
    assert "unknown witness" in err


# ---------------------------------------------------------------------------
# horodecki
# ---------------------------------------------------------------------------


def test_horodecki_csv_schema(capsys):
    code, out, _ = run_cli(capsys, "horodecki", "--grid", "0:5:2.5")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "b,alpha,beta,gamma,pyramid_margin,pt_min_eig,classification"
    assert len(lines) == 4
    assert lines[2].split(",")[0] == "2.5"


def test_horodecki_json_includes_published_label(capsys):
    code, out, _ = run_cli(capsys, "horodecki", "--b", "3.5", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert rows[0]["published"] == "BoundEntangled"
    assert rows[0]["classification"] == "BoundEntangled"


def test_horodecki_requires_exactly_one_selector(capsys):
    code, _, err = run_cli(capsys, "horodecki")
    assert code == 2
    code, _, err = run_cli(capsys, "horodecki", "--b", "1", "--grid", "0:1:1")
    assert code == 2


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------


def test_scan_csv_deterministic_across_threads(tmp_path, capsys):
    grid = "0:1:0.5,-0.3:0:0.15,0:0.5:0.25"
    out1 = tmp_path / "one.csv"
    out4 = tmp_path / "four.csv"
    assert run_cli(capsys, "scan", "--grid", grid, "--out", str(out1))[0] == 0
    assert run_cli(
        capsys, "scan", "--grid", grid, "--threads", "4", "--out", str(out4)
    )[0] == 0
    assert out1.read_bytes() == out4.read_bytes()


def test_scan_plane_json_summary(capsys):
    code, out, _ = run_cli(
        capsys,
        "scan", "--plane", "--grid", "0:1:0.25,-0.3:0:0.1", "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["rows"] == 5 * 4
    assert "Separable" in payload["counts"]
    sample = payload["boundary_samples"][0]
    assert set(sample) == {"gamma", "l_a", "l_b"}


def test_scan_grid_shape_errors(capsys):
    code, _, err = run_cli(capsys, "scan", "--grid", "0:1:0.5")
    assert code == 2
    code, _, err = run_cli(capsys, "scan", "--plane", "--grid", "0:1:0.5")
    assert code == 2


def test_scan_unwritable_output(capsys):
    code, _, err = run_cli(
        capsys, "scan", "--grid", "0:0:1,0:0:1,0:0:1",
        "--out", "/nonexistent-dir/out.csv",
    )
    assert code == 2
    assert "error" in err


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_single_check(capsys):
    code, out, _ = run_cli(capsys, "verify", "--only", "4")
    assert code == 0
    assert "[PASS]" in out
    assert "1/1 checks passed" in out


def test_verify_rejects_bad_index(capsys):
    code, _, err = run_cli(capsys, "verify", "--only", "99")
    assert code == 2


def test_verify_rejects_non_integer(capsys):
    code, _, err = run_cli(capsys, "verify", "--only", "two")
    assert code == 2


# ---------------------------------------------------------------------------
# programmatic entry: CommandConfig + run
# ---------------------------------------------------------------------------


def test_run_with_config_writes_file(tmp_path):
    target = tmp_path / "row.json"
    config = CommandConfig(
        subcommand="classify", b=3.5, format="json", out=str(target)
    )
    assert run(config) == 0
    payload = json.loads(target.read_text())
    assert payload["verdict"] == "BoundEntangled"


def test_run_raises_on_conflicting_flags():
    with pytest.raises(ValueError, match="conflicts"):
        run(CommandConfig(subcommand="classify", b=1.0, alpha=0.0))


def test_config_rejects_unknown_subcommand():
    with pytest.raises(ValueError, match="unknown subcommand"):
        CommandConfig(subcommand="explode")


def test_config_rejects_bad_threads():
    with pytest.raises(ValueError, match="threads"):
        CommandConfig(subcommand="scan", threads=0)


# ---------------------------------------------------------------------------
# real process round trips
# ---------------------------------------------------------------------------


def test_subprocess_classify():
    proc = subprocess.run(
        [sys.executable, "-m", "magicsimplex.cli", "classify", "--b", "3.5"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert "BoundEntangled" in proc.stdout


def test_subprocess_logging_env():
    proc = subprocess.run(
        [sys.executable, "-m", "magicsimplex.cli", "classify", "--b", "1.5"],
        capture_output=True,
        text=True,
        timeout=120,
        env={"MAGIC_SIMPLEX_LOG": "INFO", "PATH": "/usr/bin:/bin"},
    )
    assert proc.returncode == 0
    assert "witness Pl1" in proc.stderr
