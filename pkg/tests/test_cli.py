import json

import numpy as np
import pytest

from conimhd.cli import main
from conimhd.residual import assemble_residual, read_residual_csv, write_field_csv
from conimhd.verify.fields import interpolated_v1_field, smooth_field, band_chart

SUBSONIC = json.dumps({"rho": 1.0, "v1": 0.1, "v2": 0.0, "V3": 0.0, "P": 1 / 1.4,
                       "b1": 0.0, "b2": 0.0, "B3": 0.0, "gamma": 1.4})
MAGNETIZED = json.dumps({"rho": 1.0, "v1": 3.0, "v2": 0.2, "V3": 0.1, "P": 1.0,
                         "b1": 0.8, "b2": -0.4, "B3": 0.5, "gamma": 5 / 3})

INTERP_TOML = """
[chart]
kind = "spherical"
theta = [0.7853981633974483, 2.356194490192345]
phi = [0.0, 1.5707963267948966]
periodic_phi = false
"""


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_speeds_subsonic(capsys):
    code, out, _ = run(capsys, "speeds", "--state", SUBSONIC)
    assert code == 0
    rep = json.loads(out)
    assert rep["type"] == "E"
    ims = sorted(z[1] for z in rep["eigenvalues"] if abs(z[1]) > 1e-9)
    assert len(ims) == 2 and ims[0] == pytest.approx(-ims[1])
    assert rep["explicit"] is not None


def test_speeds_magnetized_reports_quartic(capsys, tmp_path):
    out_file = tmp_path / "s.json"
    code, out, _ = run(capsys, "speeds", "--state", MAGNETIZED, "--out", str(out_file))
    assert code == 0
    rep = json.loads(out_file.read_text())
    assert rep == json.loads(out)
    assert max(rep["explicit_deviation"]) < 1e-8
    assert len(rep["quartic_residuals"]) == 4
    assert all(q["residual"] < 1e-6 for q in rep["quartic_residuals"])


def test_speeds_state_from_file(capsys, tmp_path):
    p = tmp_path / "state.json"
    p.write_text(SUBSONIC)
    code, out, _ = run(capsys, "speeds", "--state", str(p), "--metric", "1,0,1")
    assert code == 0 and json.loads(out)["type"] == "E"


def test_speeds_degenerate_reports_null_explicit(capsys):
    s = json.loads(SUBSONIC)
    s.update(v1=0.0, v2=2.0)
    code, out, _ = run(capsys, "speeds", "--state", json.dumps(s))
    rep = json.loads(out)
    assert code == 0 and rep["type"] == "D"
    assert rep["explicit"] is None
    assert None in [z[0] for z in rep["eigenvalues"]]


def test_pseudo(capsys):
    s = json.dumps({"rho": 1, "v1": 1, "v2": 0, "V3": 0, "P": 1 / 1.4, "b1": 0, "b2": 1, "B3": 0})
    code, out, _ = run(capsys, "pseudo", "--state", s, "--w", "1,0")
    rep = json.loads(out)
    assert code == 0
    assert rep["c_f"] == pytest.approx(np.sqrt(2)) and rep["c_s"] == 0.0
    assert rep["deviation"] < 1e-8 and rep["max_imag"] < 1e-8


def test_classify_interpolated_field(capsys, tmp_path):
    f = interpolated_v1_field()
    field = tmp_path / "f.csv"
    cfg = tmp_path / "c.toml"
    write_field_csv(field, f)
    cfg.write_text(INTERP_TOML)
    tm = tmp_path / "tm.csv"
    code, out, _ = run(capsys, "classify", "--field", str(field), "--config", str(cfg), "--out", str(tm))
    assert code == 0
    counts = json.loads(out)["counts"]
    assert counts["H"] > 0 and counts["E"] > 0
    assert tm.exists()


def test_residual_round_trip(capsys, tmp_path):
    f, _ = smooth_field(band_chart(), 12, 12)
    field = tmp_path / "f.csv"
    cfg = tmp_path / "c.toml"
    write_field_csv(field, f)
    cfg.write_text('[chart]\nkind = "spherical"\ntheta = [0.7853981633974483, 2.356194490192345]\n')
    res = tmp_path / "r.csv"
    code, out, _ = run(capsys, "residual", "--field", str(field), "--config", str(cfg), "--out", str(res))
    assert code == 0
    _, _, R = read_residual_csv(res)
    assert np.max(np.abs(R - assemble_residual(f))) <= 1e-15
    assert set(json.loads(out)["max_norm"]) == {"r_mass", "r_mom1", "r_mom2", "r_mom3",
                                               "r_energy", "r_mag1", "r_mag2", "r_mag3"}


def test_residual_from_freestream_config(capsys, tmp_path):
    cfg = tmp_path / "c.toml"
    cfg.write_text('[chart]\ntheta = [0.7853981633974483, 2.356194490192345]\n'
                   '[grid]\nn1 = 16\nn2 = 16\n[freestream]\nV = [1.0, 0.0, 0.2]\n')
    code, out, _ = run(capsys, "residual", "--config", str(cfg), "--out", str(tmp_path / "r.csv"))
    assert code == 0
    assert max(json.loads(out)["max_norm"].values()) < 0.5


def test_verify_subset_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "verify", "--seed", "42", "--suites", "eigen_match,mixed_type", "--out", str(a))[0] == 0
    assert run(capsys, "verify", "--seed", "42", "--suites", "eigen_match,mixed_type", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["seed"] == 42


def test_options_table_supplies_seed(capsys, tmp_path):
    cfg = tmp_path / "c.toml"
    cfg.write_text("[options]\nseed = 7\n")
    out = tmp_path / "v.json"
    code, _, _ = run(capsys, "verify", "--config", str(cfg), "--suites", "mixed_type", "--out", str(out))
    assert code == 0 and json.loads(out.read_text())["seed"] == 7


@pytest.mark.parametrize("argv", [
    ["speeds", "--state", "{not json"],
    ["speeds"],
    ["speeds", "--state", SUBSONIC, "--xi", "1.0"],
    ["speeds", "--state", json.dumps({"rho": -1, "v1": 0, "v2": 0, "V3": 0, "P": 1, "b1": 0, "b2": 0, "B3": 0})],
    ["pseudo", "--state", SUBSONIC],
    ["pseudo", "--state", SUBSONIC, "--w", "0,0"],
    ["classify", "--field", "/nonexistent/field.csv"],
    ["verify", "--suites", "nope"],
    ["speeds", "--state", SUBSONIC, "--tol-imag", "-1"],
    ["speeds", "--state", SUBSONIC, "--xi", "0.001,0.0"],
])
def test_input_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("conimhd: input error in ")


def test_bad_config_exit_2(capsys, tmp_path):
    cfg = tmp_path / "c.toml"
    cfg.write_text("[grid]\nn1 = 2\n")
    assert run(capsys, "verify", "--config", str(cfg))[0] == 2
    cfg.write_text("[bogus]\n")
    assert run(capsys, "verify", "--config", str(cfg))[0] == 2
    cfg.write_text("not toml =")
    assert run(capsys, "verify", "--config", str(cfg))[0] == 2


def test_numerical_error_exit_3(capsys):
    code, _, err = run(capsys, "speeds", "--state", SUBSONIC, "--metric", "1,1,1")
    assert code == 3
    assert "numerical error" in err


def test_unknown_command():
    with pytest.raises(SystemExit):
        main(["frobnicate"])
