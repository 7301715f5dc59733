from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from conftest import EXAMPLE_FILE
from gsruin.cli import main
from gsruin.exppoly import ExpPoly


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


@pytest.fixture
def model_file(tmp_path):
    def write(text):
        p = tmp_path / "m.ini"
        p.write_text(text)
        return p

    return write


def test_validate_reports_loading():
    code, text = run("validate", EXAMPLE_FILE)
    assert code == 0
    assert "loading = 0.125" in text
    code, text = run("validate", EXAMPLE_FILE, "--format", "json")
    assert json.loads(text)["loading"] == pytest.approx(0.125)


def test_exit_codes(model_file, capsys):
    bad_loading = EXAMPLE_FILE.read_text().replace("c = 1", "c = 0.5")
    assert run("validate", model_file(bad_loading))[0] == 2
    assert "positive safety loading violated" in capsys.readouterr().err
    assert run("validate", model_file("garbage"))[0] == 3
    with pytest.raises(SystemExit) as exc:
        run("solve", EXAMPLE_FILE, "--u-grid", "0:1")
    assert exc.value.code == 3
    with pytest.raises(SystemExit) as exc:
        run("frobnicate", EXAMPLE_FILE)
    assert exc.value.code == 3


def test_roots_text_and_json():
    code, text = run("roots", EXAMPLE_FILE)
    assert code == 0 and "rho_2" in text and "R_3" in text
    doc = json.loads(run("roots", EXAMPLE_FILE, "--format", "json")[1])
    Rs = sorted(r[0] for r in doc["Rs"])
    np.testing.assert_allclose(Rs, [0.0806231, 3.0744047, 3.9090873], atol=1e-6)


def test_discounted_roots_exclude_zero(model_file):
    f = model_file(EXAMPLE_FILE.read_text().replace("delta = 0", "delta = 0.2"))
    doc = json.loads(run("roots", f, "--format", "json")[1])
    assert all(r[0] > 1e-6 for r in doc["rhos"])


def test_solve_csv_layout():
    code, text = run("solve", EXAMPLE_FILE, "--u-grid", "0:2:0.5", "--format", "csv", "--phases")
    assert code == 0
    assert text.startswith("u,phi_w,phi_d,phi,phi_w_1,phi_d_1,phi_w_2,phi_d_2\r\n")
    rows = list(csv.reader(io.StringIO(text)))
    assert len(rows) == 6
    assert float(rows[1][2]) == pytest.approx(1.0, abs=1e-12)


def test_solve_json_closed_form_round_trip():
    doc = json.loads(run("solve", EXAMPLE_FILE, "--u-grid", "0:10:0.5", "--format", "json", "--explain")[1])
    us = np.array([r[0] for r in doc["rows"]])
    for k, key in enumerate(("phi_w", "phi_d", "phi"), start=1):
        f = ExpPoly.from_json(doc["closed_form"][key])
        np.testing.assert_allclose(f.real(us), [r[k] for r in doc["rows"]], atol=1e-12, rtol=0)
    assert len(doc["explain"]["G"]) == 3


def test_solve_text_explain():
    code, text = run("solve", EXAMPLE_FILE, "--explain", "--u-grid", "0:1:1")
    assert code == 0 and "# phi(u) =" in text and "G =" in text


def test_laplace_curves_decrease_in_delta():
    doc = json.loads(run("laplace", EXAMPLE_FILE, "--delta-list", "0.05,0.1,0.5", "--format", "json")[1])
    c = [np.array(doc["curves"][k]) for k in ("0.05", "0.1", "0.5")]
    assert np.all(c[0] >= c[1] - 1e-12) and np.all(c[1] >= c[2] - 1e-12)
    assert c[0][0] == pytest.approx(1.0, abs=1e-10)
    assert np.all(np.diff(c[1]) <= 1e-12)


def test_laplace_rejects_nonpositive_delta():
    assert run("laplace", EXAMPLE_FILE, "--delta-list", "0")[0] == 2


def test_compare_is_deterministic_and_passes():
    args = ("compare", EXAMPLE_FILE, "--u-list", "1", "--paths", "5000", "--seed", "3", "--format", "json")
    a, b = run(*args), run(*args)
    assert a == b
    doc = json.loads(a[1])
    assert a[0] == 0 and doc["ok"]


def test_compare_detects_wrong_analytic_values():
    code, text = run("compare", EXAMPLE_FILE, "--u-list", "1", "--paths", "5000", "--corrupt-analytic", "0.1")
    assert code == 5 and "FAIL" in text


def test_compare_start_phase():
    code, _ = run("compare", EXAMPLE_FILE, "--u-list", "1", "--paths", "5000", "--start-phase", "2")
    assert code == 0
    assert run("compare", EXAMPLE_FILE, "--paths", "10", "--start-phase", "3")[0] == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "gsruin", "validate", str(EXAMPLE_FILE)], capture_output=True, text=True)
    assert proc.returncode == 0 and "loading" in proc.stdout
