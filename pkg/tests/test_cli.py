import csv
import io
import json
import subprocess
import sys

import pytest

from eprbias import figures
from eprbias.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_fig1_anchor_values(capsys):
    code, out, _ = run(capsys, "fig1", "--range", "0.25:1:4")
    assert code == 0
    rows = rows_of(out)
    assert rows[1] == {"s": "0.5", "product_two_beams": "0.64", "product_one_beam": "0.888889"}
    assert rows[-1]["product_two_beams"] == "1" and rows[-1]["product_one_beam"] == "1"


def test_fig1_monotone_and_two_beams_stronger(capsys):
    _, out, _ = run(capsys, "fig1")
    rows = rows_of(out)
    assert len(rows) == 20
    two = [float(r["product_two_beams"]) for r in rows]
    one = [float(r["product_one_beam"]) for r in rows]
    assert two == sorted(two) and one == sorted(one)
    assert all(a <= b for a, b in zip(two, one))


def test_fig3_values(capsys):
    _, out, _ = run(capsys, "fig3", "--range", "0.25:1:4")
    rows = rows_of(out)
    assert rows[1]["F_no_opa"] == "0.57735" and rows[1]["F_opa"] == "0.585786"
    assert rows[-1]["F_no_opa"] == "0.5" and rows[-1]["F_opa"] == "0.5"
    _, out, _ = run(capsys, "fig3")
    f0 = [float(r["F_no_opa"]) for r in rows_of(out)]
    f1 = [float(r["F_opa"]) for r in rows_of(out)]
    assert f0 == sorted(f0, reverse=True) and f1 == sorted(f1, reverse=True)
    assert all(b >= a for a, b in zip(f0, f1))


def test_fig4_values(capsys):
    _, out, _ = run(capsys, "fig4", "--range", "0.5:1:2")
    rows = rows_of(out)
    assert rows[0]["F_opa"] == "0.666667"
    assert rows[1]["F_opa"] == "0.5"
    assert float(rows[1]["F_no_opa"]) == pytest.approx(1 / 12.1**0.5, abs=1e-6)
    _, out, _ = run(capsys, "fig4")
    f1 = [float(r["F_opa"]) for r in rows_of(out)]
    assert f1 == sorted(f1, reverse=True)


def test_fig_db_and_json(capsys):
    _, out, _ = run(capsys, "fig1", "--range", "0.1:1:2", "--db")
    rows = rows_of(out)
    assert rows[0]["squeezing_db"] == "10" and rows[1]["squeezing_db"] == "0"
    _, out, _ = run(capsys, "fig1", "--range", "0.5:1:2", "--format", "json")
    data = json.loads(out)
    assert data[0] == {"s": 0.5, "product_two_beams": 0.64, "product_one_beam": 0.888889}


@pytest.mark.parametrize("cmd", ["fig1", "fig3", "fig4"])
def test_figures_byte_stable(tmp_path, capsys, cmd):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main([cmd, "--seed", "3", "--out", str(a)]) == 0
    assert main([cmd, "--seed", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert capsys.readouterr().out == ""


@pytest.mark.parametrize(
    "argv",
    [
        ["fig1", "--range", "bad"],
        ["fig1", "--range", "0.5:0.2:3"],
        ["fig1", "--range", "0:1:3"],
        ["fig1", "--range", "0.1:1:1"],
        ["fig1", "--format", "xml"],
        ["epr-report", "--v1", "-1"],
        ["epr-report", "--recipe", "{\"v1_plus\": 0.5, \"v1_minus\": 3, \"v2_plus\": 1, \"v2_minus\": 1}"],
        ["epr-report", "--recipe", "/nonexistent/recipe.json"],
        ["teleport", "--v1", "0", "--v2", "1"],
        ["teleport", "--signal", "1"],
        ["teleport", "--range", "0:2:3"],
        ["nonsense"],
    ],
)
def test_invalid_arguments_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(main(argv))
    assert exc.value.code == 1
    assert "error" in capsys.readouterr().err


def test_epr_report(capsys):
    code, out, _ = run(capsys, "epr-report", "--v1", "0.25")
    assert code == 0
    rep = json.loads(out)
    assert rep["gain"] == pytest.approx(2.0)
    assert rep["before"]["lambda"] == pytest.approx(0.444444, abs=1e-6)
    assert rep["after"]["lambda"] == pytest.approx(1.0, abs=1e-9)
    assert rep["after"]["product"] == pytest.approx(rep["before"]["product"], abs=1e-12)


def test_epr_report_vacuum_has_null_lambda(capsys):
    _, out, _ = run(capsys, "epr-report", "--v1", "1", "--v2", "1")
    assert json.loads(out)["before"]["lambda"] is None
    assert "null" in out


def test_epr_report_recipe_file(tmp_path, capsys):
    p = tmp_path / "r.json"
    p.write_text(json.dumps({"v1_plus": 0.5, "v2_plus": 2.0}))
    _, out, _ = run(capsys, "epr-report", "--recipe", str(p), "--gain", "1.5")
    rep = json.loads(out)
    assert rep["gain"] == 1.5 and rep["recipe"]["v2_minus"] == 0.5


def test_ghz_report(capsys):
    code, out, _ = run(capsys, "ghz-report", "--v1", "0.25")
    assert code == 0
    rep = json.loads(out)
    assert rep["gain"] == pytest.approx(0.942809, abs=1e-6)
    assert rep["before"]["targets"][0]["violation"]
    assert not rep["after"]["unbiased"]
    assert rep["after_balanced"]["unbiased"] and rep["after_balanced"]["maximal"]


def test_teleport(capsys):
    code, out, _ = run(capsys, "teleport", "--v1", "0.25", "--v2", "1", "--signal", "1.5,-2")
    assert code == 0
    res = json.loads(out)
    assert res["report"]["fidelity"] == pytest.approx(res["closed_form"]["fidelity"], abs=1e-12)
    assert res["report"]["fidelity"] == pytest.approx(1 / 1.5, abs=1e-12)
    assert res["output_mean"] == pytest.approx([1.5, -2.0], abs=1e-10)


def test_teleport_ideal_limit(capsys):
    _, out, _ = run(capsys, "teleport", "--v1", "1", "--v2", "0", "--gain", "1")
    res = json.loads(out)
    assert res["report"] is None
    assert res["closed_form"]["fidelity"] == pytest.approx(2**-0.5, abs=1e-12)


def test_teleport_sweep(capsys):
    _, out, _ = run(capsys, "teleport", "--v1", "1", "--v2", "1", "--vsqz", "0.1", "--range", "0.1:1:10")
    rows = rows_of(out)
    assert list(rows[0]) == ["v1_plus", "v2_minus", "gain", "v_sqz", "fidelity"]
    assert float(rows[-1]["fidelity"]) == pytest.approx(1 / 12.1**0.5, abs=1e-6)
    assert float(rows[0]["fidelity"]) == pytest.approx(0.5, abs=1e-6)


def test_verify_passes_and_is_deterministic(capsys):
    code, a, _ = run(capsys, "verify", "--samples", "200000", "--mc-tol", "0.02")
    assert code == 0
    _, b, _ = run(capsys, "verify", "--samples", "200000", "--mc-tol", "0.02")
    assert a == b
    assert json.loads(a)["pass"] is True


def test_verify_failure_exit_2(capsys):
    code, out, _ = run(capsys, "verify", "--samples", "1000", "--mc-tol", "1e-9")
    assert code == 2
    assert json.loads(out)["failed"]


def test_cross_check_failure_exit_2(capsys, monkeypatch):
    monkeypatch.setattr(figures, "CROSS_CHECK_TOL", -1.0)
    code, _, err = run(capsys, "fig1")
    assert code == 2 and "cross-check" in err


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "eprbias", "fig1", "--range", "0.5:1:2"], capture_output=True, text=True, check=False
    )
    assert res.returncode == 0
    assert res.stdout.splitlines()[1] == "0.5,0.64,0.888889"
