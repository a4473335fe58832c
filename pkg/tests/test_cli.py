import io
import json
import math
import subprocess
import sys

import pytest

from memsmic.cli import log_grid, main
from memsmic.design import design_to_dict, table1_design

from conftest import DATA, GOLDEN


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(map(str, argv)), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def csv_rows(text):
    lines = text.splitlines()
    return lines[0], [tuple(float(x) for x in line.split(",")) for line in lines[1:]]


@pytest.fixture
def write_json(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return p

    return write


# --- analyze ---------------------------------------------------------------------------------

def test_analyze_matches_golden(table1_path):
    code, out, _ = run("analyze", table1_path, "--bias", "12")
    assert code == 0
    got, golden = json.loads(out), json.loads((GOLDEN / "analyze_table1.json").read_text())
    assert list(got) == list(golden)
    for key, value in golden.items():
        if isinstance(value, float):
            assert got[key] == pytest.approx(value, rel=1e-9), key
        else:
            assert got[key] == value, key
    assert got["c0_f"] == pytest.approx(2.51e-12, rel=5e-3)
    assert got["s_o_db"] == pytest.approx(-33.8, abs=0.05)
    assert got["v_p_closed_form_v"] == pytest.approx(44.4, rel=2e-2)


def test_analyze_is_byte_deterministic(table1_path):
    assert run("analyze", table1_path)[1] == run("analyze", table1_path)[1]


def test_analyze_text(table1_path):
    code, out, _ = run("analyze", table1_path, "--format", "text", "--bias", "12 V")
    assert code == 0
    assert "-33.81 dB re 1 V/Pa" in out and "-50.2 dB at 12 V" in out
    assert "44.3678 V" in out and "2.5104 pF" in out


def test_analyze_reported_stress_fixture_prints_discrepancy():
    code, out, _ = run("analyze", DATA / "table1_reported_stress.json", "--format", "text")
    assert code == 0
    assert "implies 11.06 MPa" in out and "6.64 MPa was reported" in out


def test_analyze_malformed_json(write_json):
    code, _, err = run("analyze", write_json("bad.json", "{not json"))
    assert code == 2 and "malformed JSON" in err


def test_analyze_missing_file(tmp_path):
    assert run("analyze", tmp_path / "nope.json")[0] == 2


def test_analyze_invalid_design(write_json):
    data = design_to_dict(table1_design())
    data["gap_m"] = 0.0
    code, _, err = run("analyze", write_json("d.json", data))
    assert code == 2 and "gap must be > 0" in err


def test_analyze_above_pull_in(table1_path):
    code, out, err = run("analyze", table1_path, "--bias", "50")
    assert code == 3 and out == ""
    assert "44.4 V" in err


def test_analyze_bad_bias_unit(table1_path):
    assert run("analyze", table1_path, "--bias", "12 mm")[0] == 2


# --- freq ------------------------------------------------------------------------------------

def test_freq_defaults(table1_path):
    code, out, _ = run("freq", table1_path)
    assert code == 0
    header, rows = csv_rows(out)
    assert header == "frequency_hz,magnitude_db_re_v_pa,phase_deg"
    assert rows[0][0] == 20.0 and rows[-1][0] == 100e3
    assert len(rows) == 186  # 50 points/decade over log10(5000) decades, plus the end point
    so = 1.7000075346594335e-08 * 12 / 10e-6
    assert rows[0][1] == pytest.approx(20 * math.log10(so), abs=0.05)
    assert all(b[0] > a[0] for a, b in zip(rows, rows[1:]))
    assert "\r" not in out and out.endswith("\n")


def test_freq_bias_doubling(table1_path):
    _, a = csv_rows(run("freq", table1_path, "--bias", "12")[1])
    _, b = csv_rows(run("freq", table1_path, "--bias", "24")[1])
    assert all(abs((y[1] - x[1]) - 6.0206) < 1e-3 for x, y in zip(a, b))


@pytest.mark.parametrize(
    "args",
    [("--fmin", "1000", "--fmax", "1000"), ("--fmin", "2000", "--fmax", "1000"), ("--points-per-decade", "0"), ("--fmin", "-1")],
)
def test_freq_bad_range(table1_path, args):
    assert run("freq", table1_path, *args)[0] == 2


def test_freq_units(table1_path):
    code, out, _ = run("freq", table1_path, "--fmin", "1 kHz", "--fmax", "10 kHz", "--points-per-decade", "1")
    assert code == 0
    assert [r[0] for r in csv_rows(out)[1]] == [1000.0, 10000.0]


def test_log_grid():
    assert log_grid(10.0, 1000.0, 2) == pytest.approx([10, 31.6227766, 100, 316.227766, 1000])
    assert log_grid(10.0, 50.0, 1) == [10.0, 50.0]


# --- sweep -----------------------------------------------------------------------------------

def test_sweep_thickness_sm(table1_path):
    code, out, _ = run("sweep", table1_path, "--param", "thickness", "--from", "0.6e-6", "--to", "1.0e-6", "--steps", "5", "--metric", "S_m")
    assert code == 0
    header, rows = csv_rows(out)
    assert header == "param_value,metric_value"
    assert rows[0][0] == 0.6e-6 and rows[-1][0] == 1.0e-6
    assert all(b[1] < a[1] for a, b in zip(rows, rows[1:]))


def test_sweep_hole_fraction_cutoff(table1_path):
    code, out, _ = run("sweep", table1_path, "--param", "hole_fraction", "--from", "0.05", "--to", "0.45", "--steps", "11", "--metric", "cutoff")
    assert code == 0
    vals = [r[1] for r in csv_rows(out)[1]]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_sweep_infeasible_rows_are_nan(table1_path):
    # V_p scales as d**1.5: 15.7 V at 5 um, 44.4 V at 10 um
    code, out, err = run("sweep", table1_path, "--param", "gap", "--from", "5e-6", "--to", "15e-6", "--steps", "3", "--metric", "S_o_db", "--bias", "40")
    assert code == 0
    rows = csv_rows(out)[1]
    assert math.isnan(rows[0][1]) and math.isfinite(rows[1][1]) and math.isfinite(rows[2][1])
    assert err.count("warning") == 1 and "pull-in" in err


def test_sweep_invalid_point_is_nan(table1_path):
    code, out, err = run("sweep", table1_path, "--param", "hole_fraction", "--from", "0.5", "--to", "1.0", "--steps", "2", "--metric", "R_total")
    assert code == 0
    rows = csv_rows(out)[1]
    assert math.isfinite(rows[0][1]) and math.isnan(rows[1][1])
    assert "hole_fraction in (0,1)" in err


@pytest.mark.parametrize("metric", ["S_m", "S_o_db", "V_p", "C0", "cutoff", "R_total"])
def test_sweep_all_metrics(table1_path, metric):
    code, out, _ = run("sweep", table1_path, "--param", "gap", "--from", "8e-6", "--to", "12e-6", "--steps", "3", "--metric", metric)
    assert code == 0 and all(math.isfinite(r[1]) for r in csv_rows(out)[1])


@pytest.mark.parametrize(
    "args",
    [
        ("--param", "colour", "--from", "1", "--to", "2", "--steps", "3", "--metric", "S_m"),
        ("--param", "gap", "--from", "1", "--to", "2", "--steps", "3", "--metric", "loudness"),
        ("--param", "gap", "--from", "1e-6", "--to", "2e-6", "--steps", "1", "--metric", "S_m"),
        ("--param", "gap", "--from", "inf", "--to", "2e-6", "--steps", "3", "--metric", "S_m"),
    ],
)
def test_sweep_bad_args(table1_path, args):
    assert run("sweep", table1_path, *args)[0] == 2


# --- pullin ----------------------------------------------------------------------------------

def test_pullin(table1_path):
    code, out, _ = run("pullin", table1_path)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "closed_form_v,numeric_v,relative_difference" and len(lines) == 2
    closed, numeric, rel = map(float, lines[1].split(","))
    assert closed == pytest.approx(44.4, rel=1e-3) and numeric == pytest.approx(closed, rel=1e-3) and rel < 1e-3


def test_pullin_gap_scaling(write_json):
    data = design_to_dict(table1_design())
    base = float(run("pullin", write_json("a.json", data))[1].splitlines()[1].split(",")[0])
    data["gap_m"] = 40e-6
    four = float(run("pullin", write_json("b.json", data))[1].splitlines()[1].split(",")[0])
    assert four / base == pytest.approx(8.0, rel=1e-8)


def test_pullin_degenerate_design(write_json):
    data = design_to_dict(table1_design())
    data["diaphragm"]["residual_stress_pa"] = 1e308
    data["diaphragm"]["thickness_m"] = 1e-2
    assert run("pullin", write_json("d.json", data))[0] == 2


def test_pullin_self_check_failure(table1_path, monkeypatch):
    from memsmic import statics

    monkeypatch.setattr(statics, "pull_in_numeric", lambda design: 50.0)
    code, out, err = run("pullin", table1_path)
    assert code == 4 and "self-check" in err


# --- optimize --------------------------------------------------------------------------------

def test_optimize_degenerate_space(write_json, tmp_path):
    space = write_json("space.json", {"base": design_to_dict(table1_design()), "axes": {}})
    cons = write_json("c.json", {})
    out_file = tmp_path / "result.json"
    code, out, _ = run("optimize", space, cons, "--out", out_file)
    assert code == 0 and out == ""
    result = json.loads(out_file.read_text())
    assert result["best_design"] == design_to_dict(table1_design())
    assert result["best_objective_v_pa"] == pytest.approx(2.04e-2, rel=1e-4)


def test_optimize_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run("optimize", DATA / "space_table1.json", DATA / "constraints_default.json", "--rounds", "2", "--out", p)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_optimize_infeasible(write_json):
    cons = write_json("c.json", {"min_cutoff_hz": 10e6})
    code, _, err = run("optimize", DATA / "space_table1.json", cons)
    assert code == 3 and "no feasible design" in err


@pytest.mark.parametrize("cons", ['{"bias": 12}', "[", '{"max_bias_fraction_of_pullin": 2}'])
def test_optimize_bad_constraints(write_json, cons):
    assert run("optimize", DATA / "space_table1.json", write_json("c.json", cons))[0] == 2


def test_optimize_negative_rounds():
    assert run("optimize", DATA / "space_table1.json", DATA / "constraints_default.json", "--rounds", "-1")[0] == 2


# --- process level ---------------------------------------------------------------------------

def test_module_entry_point(table1_path):
    proc = subprocess.run([sys.executable, "-m", "memsmic", "pullin", str(table1_path)], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("closed_form_v")
    proc = subprocess.run([sys.executable, "-m", "memsmic", "analyze"], capture_output=True, text=True)
    assert proc.returncode == 2


def test_no_subcommand():
    assert run()[0] == 2
