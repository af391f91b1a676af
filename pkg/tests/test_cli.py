import csv
import filecmp
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from jacsym import cli, reference
from jacsym import construct as cs
from jacsym.tableau import ButcherTableau, explicit_euler

CHEB3_FLAGS = ["--alpha", "-0.5", "--beta", "0.5"]


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_construct_two_stage(capsys):
    code, out, _ = run(["construct", *CHEB3_FLAGS, "--xi", "2", "--eta", "1", "--rho", "1"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["alpha_mat"][0][1] == pytest.approx(-math.pi / 8, abs=1e-12)
    assert data["free_dim"] == 0
    assert "null_basis" not in data


def test_construct_family_with_free_value(capsys):
    code, out, _ = run(
        ["construct", "--alpha", "0.5", "--beta", "-0.5", "--xi", "3", "--eta", "1", "--rho", "2", "--free", "0=0.5"],
        capsys,
    )
    assert code == 0
    data = json.loads(out)
    assert data["free_dim"] == 1
    assert len(data["null_basis"]) == 1
    assert data["alpha_mat"][1][2] == pytest.approx(0.5, abs=1e-14)
    assert data["free_values"] == [0.5]


def test_construct_legendre_midpoint(tmp_path, capsys):
    coeffs = tmp_path / "c.json"
    assert cli.main(["construct", "--alpha", "0", "--beta", "0", "--xi", "2", "--eta", "1", "--rho", "1", "-o", str(coeffs)]) == 0
    out = tmp_path / "t.json"
    assert cli.main(["tableau", "--coeffs", str(coeffs), "--stages", "1", "--rule", "eigen", "-o", str(out)]) == 0
    capsys.readouterr()
    t = ButcherTableau.from_dict(json.loads(out.read_text()))
    np.testing.assert_allclose(t.A, [[0.5]], atol=1e-15)
    np.testing.assert_allclose(t.b, [1.0], atol=1e-15)
    assert out.with_suffix(".txt").exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["construct", *CHEB3_FLAGS, "--xi", "3", "--eta", "2", "--rho", "2"],
        ["construct", "--alpha", "-1", "--beta", "0", "--xi", "2", "--eta", "1", "--rho", "1"],
        ["construct", *CHEB3_FLAGS, "--xi", "2", "--eta", "1", "--rho", "1", "--free", "oops"],
        ["construct", *CHEB3_FLAGS, "--xi", "2"],
        ["frobnicate"],
        ["tableau", "--xi", "2"],
    ],
)
def test_argument_errors(argv, capsys):
    code, _, _ = run(argv, capsys)
    assert code == 2


def test_inconsistent_construction_exit_code(monkeypatch, capsys):
    real = cs.assemble_system

    def broken(params, test="jacobi"):
        M, rhs = real(params, test)
        return np.vstack([M, M]), np.concatenate([rhs, rhs + 1.0])

    monkeypatch.setattr(cs, "assemble_system", broken)
    code, _, err = run(["construct", *CHEB3_FLAGS, "--xi", "2", "--eta", "1", "--rho", "1"], capsys)
    assert code == 3
    assert "residual" in err


def test_tableau_paper_order(capsys):
    code, out, err = run(["tableau", *CHEB3_FLAGS, "--xi", "5", "--eta", "2", "--rho", "2", "--stages", "5", "--paper-order"], capsys)
    assert code == 0
    data = json.loads(out)
    t = ButcherTableau.from_dict(data)
    ref = reference.chebyshev3_order5()
    assert np.max(np.abs(t.A - ref.A)) <= 1e-11
    assert data["declared_order"] == 5
    assert data["checks"]["classical_order"] == 5
    assert data["checks"]["symplectic_residual"] <= 1e-11
    assert "0.97974648680725" in err


def test_verify_exit_codes(tmp_path, capsys):
    good = tmp_path / "t1.json"
    good.write_text(reference.chebyshev1_family(0.05).to_json())
    code, out, _ = run(["verify", "--tableau", str(good)], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["classical_order"] == 4 and rep["symplectic"]

    bad = tmp_path / "euler.json"
    bad.write_text(explicit_euler().to_json())
    code, out, _ = run(["verify", "--tableau", str(bad)], capsys)
    assert code == 4
    assert json.loads(out)["symplectic_residual"] == 1.0

    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert run(["verify", "--tableau", str(junk)], capsys)[0] == 2
    incomplete = tmp_path / "incomplete.json"
    incomplete.write_text('{"b": [1.0]}')
    assert run(["verify", "--tableau", str(incomplete)], capsys)[0] == 2
    assert run(["verify", "--tableau", str(tmp_path / "missing.json")], capsys)[0] == 2


def test_verify_table3(tmp_path, capsys):
    path = tmp_path / "t3.json"
    path.write_text(reference.chebyshev3_order3().to_json())
    code, out, _ = run(["verify", "--tableau", str(path), "--max-order", "4"], capsys)
    assert code == 0
    assert json.loads(out)["classical_order"] == 3


def test_integrate_writes_csv(tmp_path, capsys):
    out = tmp_path / "k.csv"
    code, _, _ = run(["integrate", *CHEB3_FLAGS, "--xi", "3", "--eta", "1", "--rho", "2", "--h", "0.1", "--steps", "20", "-o", str(out)], capsys)
    assert code == 0
    rows = list(csv.reader(open(out)))
    assert rows[0] == ["t", "z_1", "z_2", "z_3", "z_4", "energy_err", "sol_err"]
    assert len(rows) == 22
    assert float(rows[-1][5]) < 1e-9


def test_integration_failure_exit_code(tmp_path, capsys):
    out = tmp_path / "k.csv"
    code, _, err = run(["integrate", *CHEB3_FLAGS, "--xi", "3", "--eta", "1", "--rho", "2", "--h", "20", "--steps", "3", "-o", str(out)], capsys)
    assert code == 5
    assert "step" in err


def test_order_study(capsys):
    code, out, _ = run(["order-study", *CHEB3_FLAGS, "--xi", "3", "--eta", "1", "--rho", "2"], capsys)
    assert code == 0
    data = json.loads(out)
    assert abs(data["slope"] - 3) <= 0.2
    assert data["classical_order"] == 3


def test_reproduce_small_targets(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(cli.OUTPUT_ENV, str(tmp_path / "env"))
    code, _, _ = run(["reproduce", "--target", "ex4"], capsys)
    assert code == 0
    data = json.loads((tmp_path / "env" / "ex4.json").read_text())
    assert data["max_deviation"] <= 1e-12
    assert data["cases"]["iii"]["free_dim"] == 0


def test_reproduce_is_deterministic(tmp_path, capsys):
    for d in ("a", "b"):
        argv = ["reproduce", "--target", "all", "--outdir", str(tmp_path / d), "--steps", "50"]
        assert run(argv, capsys)[0] == 0
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert "kepler_chebyshev3_order5.csv" in names and "chebyshev4_order5.json" in names
    match, mismatch, errors = filecmp.cmpfiles(tmp_path / "a", tmp_path / "b", names, shallow=False)
    assert not mismatch and not errors


def test_reproduce_reports_failures(tmp_path, monkeypatch, capsys):
    monkeypatch.setattr(cli, "TABLE5_TOL", 0.0)
    code, _, err = run(["reproduce", "--target", "tables", "--outdir", str(tmp_path)], capsys)
    assert code == 4
    assert "chebyshev3_order5" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "jacsym", "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    assert "reproduce" in res.stdout
