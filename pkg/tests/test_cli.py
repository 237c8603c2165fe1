"""CLI behavior: exit codes, report schema, determinism, manifests."""

import json

import pytest

from sasakigeom.cli import run_cli


def run(capsys, *argv):
    code = run_cli(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_verify_sphere(capsys):
    code, out, err = run(capsys, "verify", "--space", "sphere", "--n", "2")
    assert code == 0
    report = json.loads(out)
    assert report["command"] == "verify"
    assert report["pass"] is True
    assert report["results"]["tau"] == 20.0
    assert "d_eta" in report["conventions"]
    assert report["results"]["residuals"]["contact_metric"]["d_eta"] < 1e-8


def test_verify_heisenberg(capsys):
    code, out, _ = run(capsys, "verify", "--space", "heisenberg", "--n", "2")
    assert code == 0
    report = json.loads(out)
    assert report["results"]["tau"] == pytest.approx(-4.0, abs=1e-9)
    assert report["results"]["total_volume"] is None


def test_verify_deformed(capsys):
    code, out, _ = run(
        capsys, "verify", "--space", "deformed_sphere", "--n", "2", "--a", "2.0"
    )
    assert code == 0
    report = json.loads(out)
    assert report["results"]["phi_sectional_c"] == pytest.approx(-1.0)


def test_heat_json_and_csv(capsys):
    code, out, _ = run(capsys, "heat", "--space", "sphere", "--n", "2", "--p", "0,1,2")
    assert code == 0
    rows = json.loads(out)["results"]["coefficients"]
    assert [r["p"] for r in rows] == [0, 1, 2]
    code, out, _ = run(
        capsys, "heat", "--space", "sphere", "--n", "2", "--format", "csv"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "m,p,a0,a2,a4"
    assert len(lines) == 4


def test_heat_heisenberg_fails_cleanly(capsys):
    code, out, err = run(capsys, "heat", "--space", "heisenberg", "--n", "2")
    assert code == 1
    assert out == ""
    error = json.loads(err)["error"]
    assert error["type"] == "NoncompactSpace"


def test_constants_table(capsys):
    code, out, _ = run(capsys, "constants", "--m", "5")
    assert code == 0
    table = json.loads(out)["results"]["table"]
    assert len(table) == 3
    by_p = {row["p"]: row for row in table}
    assert by_p[0]["c1"] == pytest.approx(5 / 360, abs=1e-10)
    assert all(row["residual"] < 1e-8 for row in table)


def test_constants_csv_schema(capsys):
    code, out, _ = run(capsys, "constants", "--m", "5", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "m,p,c1,c2,c3,residual"
    assert len(lines) == 4


def test_independence(capsys):
    code, out, _ = run(capsys, "independence", "--m", "5")
    assert code == 0
    report = json.loads(out)
    assert report["results"]["rank"] == 2


def test_spectrum_fit(capsys):
    code, out, _ = run(
        capsys, "spectrum-fit", "--m", "3", "--tmin", "1e-3", "--tmax", "1e-1",
        "--kmax", "400",
    )
    assert code == 0
    report = json.loads(out)
    assert report["results"]["rel_errors"]["a0"] < 1e-3
    assert report["results"]["rel_errors"]["a2"] < 1e-2


def test_spectrum_fit_bad_grid_is_failure(capsys):
    code, _, err = run(
        capsys, "spectrum-fit", "--m", "3", "--tmin", "1e-2", "--tmax", "2e-2",
        "--kmax", "400",
    )
    assert code == 1
    assert json.loads(err)["error"]["type"] == "IllConditionedFit"


def _manifest(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def test_classify_space_form_self_pair(capsys, tmp_path):
    left = _manifest(tmp_path, "l.json", {"space": "sphere", "n": 2})
    right = _manifest(tmp_path, "r.json", {"space": "sphere", "n": 2})
    code, out, _ = run(
        capsys, "classify", "--left", left, "--right", right,
        "--mode", "space-form", "--c", "1.0",
    )
    assert code == 0
    report = json.loads(out)
    assert report["results"]["kind"] == "space_form_transferred"


def test_classify_eta_einstein_mismatch(capsys, tmp_path):
    left = _manifest(tmp_path, "l.json", {"space": "sphere", "n": 2})
    right = _manifest(tmp_path, "r.json", {"space": "deformed_sphere", "n": 2, "a": 2.0})
    code, out, _ = run(
        capsys, "classify", "--left", left, "--right", right, "--mode", "eta-einstein"
    )
    assert code == 1
    report = json.loads(out)
    assert report["results"]["kind"] == "mismatch_at_a2"
    assert report["results"]["details"]["tau_1"] == pytest.approx(20.0, abs=1e-8)
    assert report["results"]["details"]["tau_2"] == pytest.approx(8.0, abs=1e-8)


def test_classify_wrong_c_refused(capsys, tmp_path):
    left = _manifest(tmp_path, "l.json", {"space": "sphere", "n": 2})
    code, out, err = run(
        capsys, "classify", "--left", left, "--right", left,
        "--mode", "space-form", "--c", "-1.0",
    )
    assert code == 1
    error = json.loads(err)["error"]
    assert error["type"] == "HypothesisViolation"
    assert error["details"]["residual_density"] == pytest.approx(48.0, rel=1e-8)


def test_classify_default_c_is_nominal(capsys, tmp_path):
    left = _manifest(tmp_path, "l.json", {"space": "deformed_sphere", "n": 2, "a": 2.0})
    code, out, _ = run(
        capsys, "classify", "--left", left, "--right", left, "--mode", "space-form"
    )
    assert code == 0
    assert json.loads(out)["results"]["details"]["c"] == pytest.approx(-1.0)


def test_manifest_validation(capsys, tmp_path):
    bad = _manifest(tmp_path, "bad.json", {"space": "torus", "n": 2})
    code, _, err = run(
        capsys, "classify", "--left", bad, "--right", bad, "--mode", "space-form"
    )
    assert code == 2
    assert "torus" in json.loads(err)["error"]["message"]


def test_usage_error_exit_two(capsys):
    assert run(capsys, "verify", "--space", "klein_bottle")[0] == 2
    assert run(capsys, "no-such-command")[0] == 2
    assert run(capsys, "verify", "--space", "sphere", "--format", "csv")[0] == 2


def test_out_file_and_determinism(capsys, tmp_path):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    for target in (out1, out2):
        code = run_cli(
            ["verify", "--space", "sphere", "--n", "2", "--seed", "7",
             "--out", str(target)]
        )
        capsys.readouterr()
        assert code == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_seed_env_override(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("SASAKI_SEED", "12321")
    code, out, _ = run(capsys, "constants", "--m", "5")
    assert code == 0
    assert json.loads(out)["inputs"]["seed"] == 12321
    monkeypatch.delenv("SASAKI_SEED")


def test_floats_have_17_significant_digits(capsys):
    code, out, _ = run(capsys, "heat", "--space", "sphere", "--n", "2", "--p", "0")
    a0_text = out.split('"a0": ')[1].split(",")[0]
    import math

    assert float(a0_text) == (4 * math.pi) ** -2.5 * math.pi**3
    assert len(a0_text.replace(".", "").replace("-", "").lstrip("0")) >= 16
