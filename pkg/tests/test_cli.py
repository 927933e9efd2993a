import json
import math
import subprocess
import sys

import pytest

from hartman_watson.cli import (
    OutputRecord,
    cmd_density,
    cmd_errorsweep,
    cmd_plotdata,
    cmd_theta,
    main,
    parse_grid,
    read_csv,
    to_csv,
    to_json,
)
from hartman_watson.errors import DomainError


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_theta_all_row_values(capsys):
    code, out, err = run_cli(capsys, "theta", "-r", "0.5", "-t", "1.0", "--method", "all")
    assert code == 0
    _, cols, rows = read_csv(out)
    by_method = {row[0]: dict(zip(cols, row)) for row in rows}
    assert by_method["asym"]["value"] == pytest.approx(0.2722, abs=1e-4)
    assert by_method["gerhold"]["value"] == pytest.approx(0.3062, abs=1e-4)
    assert by_method["numeric"]["value"] == pytest.approx(0.2685, abs=1e-4)
    assert by_method["asym"]["error_bound"] == pytest.approx(1 / 70)
    assert by_method["numeric"]["abs_err_est"] < 1e-10
    assert err == ""


def test_theta_gerhold_invalid(capsys):
    code, out, err = run_cli(capsys, "theta", "-r", "0.5", "-t", "2.6", "--method", "gerhold")
    assert code == 0
    comments, _, rows = read_csv(out)
    assert rows == [("gerhold", None, None, None, "false")]
    assert any("domain-invalid" in c for c in comments)
    assert "domain-invalid" in err


def test_theta_asym2_at_rho_one():
    rec = cmd_theta(1.0, 1.0, "asym2")
    asym = cmd_theta(1.0, 1.0, "asym").rows[0][1]
    assert rec.rows[0][1] == pytest.approx(asym * (1 - 1 / 70), rel=1e-14)


def test_table1_golden(capsys):
    code, out, _ = run_cli(capsys, "table1")
    assert code == 0
    comments, cols, rows = read_csv(out)
    assert cols == ["t", "rho", "x1_or_y1", "F", "theta_hat", "u0", "theta_G", "theta_num"]
    assert "# schema_version: 1" in comments
    rows = {row[0]: dict(zip(cols, row)) for row in rows}
    r03 = rows[0.3]
    assert (r03["rho"], round(r03["x1_or_y1"], 4), round(r03["F"], 2)) == (0.15, 3.9692, 8.84)
    assert r03["theta_hat"] == pytest.approx(2.713e-6, rel=5e-4)
    assert r03["u0"] == pytest.approx(89.713, abs=1e-3)
    assert r03["theta_G"] == pytest.approx(2.738e-6, rel=5e-4)
    assert r03["theta_num"] == pytest.approx(2.704e-6, rel=5e-4)
    assert round(rows[2.5]["x1_or_y1"], 4) == 2.0105 and round(rows[2.5]["F"], 4) == 3.7630
    assert rows[3.0]["theta_G"] is None
    assert rows[0.1]["theta_num"] is None
    assert any("precision-loss" in c and "t=0.1" in c for c in comments)


def test_density_rows():
    rec = cmd_density("0.5,1.0,2.0", 0.0, 0.1)
    rows = {row[0]: dict(zip(rec.columns, row)) for row in rec.rows}
    assert rows[1.0]["J"] == 0.0
    assert rows[1.0]["g"] == pytest.approx(math.sqrt(3) / 2)
    assert rows[1.0]["density"] == pytest.approx(math.exp(rows[1.0]["log_density"]))


def test_density_quadrature_columns():
    rec = cmd_density("1.0:2.0:3:lin", 1.0, 0.2, method="quadrature")
    assert rec.columns[-2:] == ["density_quadrature", "rel_gap"]
    assert all(abs(row[-1]) <= 0.2 for row in rec.rows)


def test_density_J_monotone_through_one():
    rec = cmd_density("0.3:3:21:log", 0.0, 0.1)
    J = [row[1] for row in rec.rows]
    i = J.index(min(J))
    assert all(x > y for x, y in zip(J[:i], J[1 : i + 1]))
    assert all(x < y for x, y in zip(J[i:], J[i + 1 :]))


def test_errorsweep_passes():
    rec = cmd_errorsweep("0.5,1.0", "0.5,1.0")
    assert rec.columns[-1] == "pass"
    assert all(row[-1] is True for row in rec.rows)
    row = dict(zip(rec.columns, rec.rows[1]))
    assert row["observed"] == pytest.approx(0.2685 / 0.2722 - 1, abs=2e-3)


def test_errorsweep_rho_one_line():
    rec = cmd_errorsweep("1.0", "1.0")
    row = dict(zip(rec.columns, rec.rows[0]))
    assert row["observed"] == pytest.approx(-1 / 70, abs=1e-3)


def test_errorsweep_rejects_small_t(capsys):
    code, _, err = run_cli(capsys, "errorsweep", "--t-grid", "0.1,0.5")
    assert code == 2 and "t >= 0.2" in err


def test_plotdata_F_minimum():
    rec = cmd_plotdata("F", "1.2:2.0:801:lin")
    i = min(range(len(rec.rows)), key=lambda k: rec.rows[k][1])
    assert rec.rows[i][0] == pytest.approx(math.pi / 2, abs=1e-3)
    assert rec.rows[i][1] == pytest.approx(3 * math.pi**2 / 8, abs=1e-6)


def test_plotdata_g2_extremum():
    rec = cmd_plotdata("g2tilde", "0.5:2:301:lin")
    low = min(rec.rows, key=lambda row: row[1])
    assert low[0] == pytest.approx(1.0, abs=5e-3)
    assert low[1] == pytest.approx(-1 / 35, abs=1e-8)


def test_plotdata_theta_band():
    rec = cmd_plotdata("theta_vs_t", "0.1:5:5:log")
    assert {row[0] for row in rec.rows} == {0.5, 1.0, 1.5}
    assert all(row[3] <= row[2] <= row[4] for row in rec.rows)


def test_plotdata_unknown_figure(capsys):
    code, _, err = run_cli(capsys, "plotdata", "--figure", "nope")
    assert code == 2 and "unknown figure" in err


@pytest.mark.parametrize(
    "spec,expected",
    [("1:100:3:log", [1.0, 10.0, 100.0]), ("0:1:3:lin", [0.0, 0.5, 1.0]), ("0.5,1.5", [0.5, 1.5])],
)
def test_parse_grid(spec, expected):
    assert parse_grid(spec) == pytest.approx(expected)


@pytest.mark.parametrize("spec", ["1:2:3", "1:2:x:log", "0:1:3:log", "1:2:0:lin", "a,b"])
def test_parse_grid_errors(spec):
    with pytest.raises(DomainError):
        parse_grid(spec)


def test_csv_round_trip_is_bit_exact():
    values = (math.pi, 2.0986631548501136e-39, 1 / 3, 1e300 * 7.7, 5e-324)
    rec = OutputRecord("test", {}, ["a", "b", "c", "d", "e"])
    rec.add_row(*values)
    _, _, rows = read_csv(to_csv(rec))
    assert rows[0] == values


def test_nan_replaced_and_flagged():
    rec = OutputRecord("test", {}, ["x", "y"])
    rec.add_row(1.0, math.nan)
    assert rec.rows == [(1.0, None)]
    assert rec.flags and "column y" in rec.flags[0]
    with pytest.raises(ValueError):
        rec.add_row(1.0)


def test_json_output(capsys):
    code, out, _ = run_cli(capsys, "--format", "json", "theta", "-r", "0.5", "-t", "0.1", "--method", "asym")
    assert code == 0
    obj = json.loads(out)
    assert obj["schema_version"] == "1" and obj["command"] == "theta"
    assert obj["columns"][:2] == ["method", "value"]
    assert obj["rows"][0][1] == pytest.approx(2.0987e-39, rel=1e-4)


def test_json_extreme_exponents_as_strings():
    rec = OutputRecord("test", {}, ["tiny", "small", "huge"])
    rec.add_row(3.5e-305, 2.1e-39, 1.0e301)
    row = json.loads(to_json(rec))["rows"][0]
    assert row[0] == "3.5e-305" and row[2] == "1e+301"
    assert row[1] == 2.1e-39


def test_global_flags_after_subcommand(capsys):
    code, out, _ = run_cli(capsys, "theta", "-r", "1", "-t", "1", "--method", "asym", "--format", "json")
    assert code == 0 and json.loads(out)["inputs"]["tol"] == 1e-10


def test_out_file(tmp_path, capsys):
    path = tmp_path / "theta.csv"
    code, out, _ = run_cli(capsys, "--out", str(path), "theta", "-r", "1", "-t", "1", "--method", "asym")
    assert code == 0 and out == ""
    assert path.read_text().startswith("# schema_version: 1\n")


def test_exit_codes(capsys):
    assert run_cli(capsys, "theta", "-r", "-1", "-t", "1")[0] == 2
    assert run_cli(capsys, "--tol", "0", "theta", "-r", "1", "-t", "1")[0] == 2
    assert run_cli(capsys, "theta", "-r", "0.5", "-t", "0.1", "--method", "numeric")[0] == 3


def test_precision_loss_flag_in_all_mode():
    rec = cmd_theta(0.5, 0.1, "all")
    numeric = [row for row in rec.rows if row[0] == "numeric"][0]
    assert numeric[1] is None
    assert any(f.startswith("precision-loss") for f in rec.flags)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "hartman_watson", "theta", "-r", "1", "-t", "1", "--method", "asym"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1].startswith("asym,0.7493")


def test_to_json_infinite_as_string():
    rec = OutputRecord("test", {}, ["x"])
    rec.add_row(math.inf)
    assert json.loads(to_json(rec))["rows"] == [["inf"]]
