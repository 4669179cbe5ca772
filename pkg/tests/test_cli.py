import json
import math

import numpy as np
import pytest

from confweight import ConformalMap, DomainFamily
from confweight.cli import build_parser, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_weight_halfplane_example(capsys):
    code, out, _ = run(capsys, "weight", "--domain", "halfplane", "--at", "0,1")
    assert code == 0
    doc = json.loads(out)
    assert doc["h"] == 0.25
    assert doc["config"]["command"] == "weight"
    assert doc["config"]["domain"] == "halfplane"


def test_weight_csv_output(capsys):
    code, out, _ = run(capsys, "weight", "--domain", "exterior", "--at", "2,0",
                       "--output", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    config_lines = [l for l in lines if l.startswith("#")]
    assert any("domain=exterior" in l for l in config_lines)
    header = lines[len(config_lines)]
    values = lines[len(config_lines) + 1]
    assert header.split(",")[0] == "h"
    assert float(values.split(",")[0]) == 0.0625


def test_brennan_divergent_exit(capsys):
    code, out, _ = run(capsys, "brennan", "--domain", "slitplane",
                       "--s", "4.1", "--levels", "8")
    assert code == 1
    assert json.loads(out)["verdict"] == "Divergent"


def test_brennan_converged_exit(capsys):
    code, out, _ = run(capsys, "brennan", "--domain", "slitplane",
                       "--s", "3.0", "--tol", "0.1")
    assert code == 0
    assert json.loads(out)["verdict"] == "Converged"


def test_inverse_brennan_alpha(capsys):
    code, out, _ = run(capsys, "inverse-brennan", "--domain", "slitplane",
                       "--alpha", "-1.0", "--tol", "0.1")
    assert code == 0
    direct = json.loads(out)
    code, out, _ = run(capsys, "brennan", "--domain", "slitplane",
                       "--s", "3.0", "--tol", "0.1")
    assert direct["level_values"] == json.loads(out)["level_values"]


def test_kpq_cardioid(capsys):
    code, out, _ = run(capsys, "kpq", "--domain", "cardioid", "--p", "2", "--q", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "Converged"
    assert abs(doc["value"] - math.sqrt(3 * math.pi / 8)) / doc["value"] < 1e-4


def test_exponents_bounds_and_q(capsys):
    code, out, _ = run(capsys, "exponents", "--p", "1.9", "--alpha0", "-1.752")
    assert code == 0
    doc = json.loads(out)
    assert doc["p_min"] == pytest.approx(3.752 / 2.752, rel=1e-15)
    assert not doc["conjectural"]
    code, out, _ = run(capsys, "exponents", "--p", "3", "--s", "3")
    assert code == 0
    assert json.loads(out)["q"] == 2.25


def test_exponents_infeasible_exit(capsys):
    code, out, err = run(capsys, "exponents", "--p", "1.9", "--s", "3")
    assert code == 1
    assert "error" in err
    assert out == ""


def test_usage_error_exit(capsys):
    assert run(capsys, "weight", "--domain", "nowhere", "--at", "0,0")[0] == 2
    assert run(capsys, "weight", "--domain", "disc")[0] == 2       # missing --at
    assert run(capsys, "weight", "--domain", "disc", "--at", "xy")[0] == 2
    assert run(capsys, "nosuchcommand")[0] == 2


def test_constant_eigen_route(capsys):
    code, out, _ = run(capsys, "constant", "--r", "2", "--nr", "128",
                       "--ntheta", "128")
    assert code == 0
    doc = json.loads(out)
    assert doc["method"] == "EigenRayleigh"
    assert abs(doc["value"] - 0.41583) < 0.01 * 0.41583 + 1e-5


def test_constant_bump_route_seeded(capsys, monkeypatch):
    code, out, _ = run(capsys, "constant", "--r", "1.5", "--nr", "64",
                       "--ntheta", "64", "--bumps", "8")
    assert code == 0
    base = json.loads(out)
    assert base["method"] == "BumpFamilyMax"
    # same seed, same bumps, same value
    code, out, _ = run(capsys, "constant", "--r", "1.5", "--nr", "64",
                       "--ntheta", "64", "--bumps", "8")
    assert json.loads(out)["value"] == base["value"]
    monkeypatch.setenv("CW_SEED", "99")
    code, out, _ = run(capsys, "constant", "--r", "1.5", "--nr", "64",
                       "--ntheta", "64", "--bumps", "8")
    assert json.loads(out)["value"] != base["value"]


def test_solve_csv_against_exact(capsys):
    code, out, _ = run(capsys, "solve", "--domain", "strip", "--f", "const:-4",
                       "--nr", "64", "--ntheta", "64")
    assert code == 0
    lines = out.strip().splitlines()
    data = [l for l in lines if not l.startswith("#") and not l.startswith("x,")]
    assert len(data) == 64 * 64
    mapping = ConformalMap.to_disc(DomainFamily.STRIP)
    worst = 0.0
    for line in data[::37]:
        x, y, u = (float(s) for s in line.split(","))
        exact = 1.0 - abs(mapping.eval(complex(x, y))) ** 2
        worst = max(worst, abs(u - exact))
    assert worst <= 1e-3


def test_solve_lattice_inside_domain(capsys):
    code, out, _ = run(capsys, "solve", "--domain", "halfplane", "--f", "quartic",
                       "--nr", "32", "--ntheta", "32", "--export", "lattice",
                       "--window=-2,2,-2,2", "--lattice-n", "9")
    assert code == 0
    data = [l for l in out.strip().splitlines()
            if not l.startswith("#") and not l.startswith("x,")]
    assert 0 < len(data) < 81
    for line in data:
        assert float(line.split(",")[1]) > 0.0


def test_solve_json_summary(capsys):
    code, out, _ = run(capsys, "solve", "--domain", "disc", "--f", "const:-4",
                       "--nr", "32", "--ntheta", "32", "--output", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["u_max"] == pytest.approx(1.0, abs=1e-3)
    assert doc["config"]["rhs"] == "const:-4"


def test_out_file(tmp_path, capsys):
    target = tmp_path / "weight.json"
    code, out, _ = run(capsys, "weight", "--domain", "halfplane", "--at", "0,1",
                       "--out", str(target))
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text())["h"] == 0.25


def test_byte_identical_reruns(capsys):
    args = ("brennan", "--domain", "slitplane", "--s", "3.9", "--tol", "0.1")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_parser_lists_all_commands():
    parser = build_parser()
    text = parser.format_help()
    for cmd in ("weight", "brennan", "inverse-brennan", "kpq", "exponents",
                "constant", "solve", "verify"):
        assert cmd in text


def test_out_path_missing_directory_exit(tmp_path, capsys):
    target = tmp_path / "no_such_dir" / "weight.json"
    code, out, err = run(capsys, "weight", "--domain", "halfplane", "--at", "0,1",
                         "--out", str(target))
    assert code == 1
    assert err.startswith("error:")
    assert out == ""


def test_invalid_grid_sizes_exit_cleanly(capsys):
    code, _, err = run(capsys, "solve", "--domain", "disc", "--f", "const:-4",
                       "--nr", "0", "--ntheta", "32")
    assert code == 1 and err.startswith("error:")
    code, _, err = run(capsys, "solve", "--domain", "disc", "--f", "const:-4",
                       "--nr", "32", "--ntheta", "31")
    assert code == 1 and "power of two" in err


def test_bad_cw_seed_exit(capsys, monkeypatch):
    monkeypatch.setenv("CW_SEED", "banana")
    code, _, err = run(capsys, "constant", "--r", "1.5", "--bumps", "2")
    assert code == 1
    assert "CW_SEED" in err
