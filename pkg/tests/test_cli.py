import io
import json

import mpmath

from ramapi.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_pi_r2_50_digits():
    code, out, err = run("pi", "--r", "2", "--digits", "50")
    assert code == 0
    mpmath.mp.dps = 60
    assert out.strip() == mpmath.nstr(mpmath.pi, 51, strip_zeros=False)
    assert err.startswith("terms: ")


def test_pi_flagship_terms_on_stderr():
    code, out, err = run("pi", "--digits", "500")
    assert code == 0
    assert int(err.split()[1]) <= 7
    assert out.startswith("3.14159265358979")


def test_pi_json():
    code, out, _ = run("pi", "--r", "4", "--digits", "30", "--output", "json")
    rec = json.loads(out)
    assert code == 0
    assert rec["check"] == "pass"
    assert isinstance(rec["value"], str) and rec["value"].startswith("3.1415926535")


def test_pi_r_below_one_is_numeric_failure():
    code, _, err = run("pi", "--r", "0.5", "--digits", "50")
    assert code == 2
    assert "numeric failure" in err


def test_usage_errors():
    assert run("pi", "--digits", "5")[0] == 1
    assert run("pi", "--r", "abc")[0] == 1
    assert run("pi", "--r", "-2")[0] == 1
    assert run("bogus")[0] == 1
    assert run()[0] == 1
    assert run("modulus")[0] == 1


def test_env_precision(monkeypatch):
    monkeypatch.setenv("RAMAPI_PRECISION", "20")
    code, out, _ = run("modulus", "--r", "1", "--output", "json")
    assert code == 0
    assert json.loads(out)["precision"] == 20
    monkeypatch.setenv("RAMAPI_PRECISION", "lots")
    assert run("modulus", "--r", "1")[0] == 1


def test_modulus_r1():
    code, out, _ = run("modulus", "--r", "1", "--output", "json")
    rec = json.loads(out)
    assert code == 0
    for key in ("m", "alpha", "beta"):
        assert rec[key] == "0.5"
    assert set(rec) >= {"r", "m", "k", "alpha", "beta", "a_elliptic", "residuals", "precision"}


def test_modulus_alpha_values():
    # alpha_3 = (3 sqrt 3 - 5)/4, alpha_6 = (68 - 27 sqrt 6)/500
    _, out, _ = run("modulus", "--r", "3", "--output", "json")
    assert json.loads(out)["alpha"].startswith("0.0490381")
    _, out, _ = run("modulus", "--r", "6", "--output", "json")
    assert json.loads(out)["alpha"].startswith("0.00372755388")


def test_params_text():
    code, out, _ = run("params", "--r", "2", "--digits", "30")
    assert code == 0
    lines = dict(line.split(": ", 1) for line in out.splitlines())
    assert lines["J"].startswith("0.216")
    assert lines["j"].startswith("8000.0")


def test_verify_alpha_filter():
    code, out, _ = run("verify", "--filter", "alpha_*", "--output", "json")
    rows = [json.loads(line) for line in out.splitlines()]
    summary = rows.pop()["summary"]
    assert code == 0
    assert summary["pass"] == 41
    assert summary["known-erratum-confirmed"] == 3
    assert all(isinstance(r["rel_residual"], str) for r in rows)


def test_verify_series_base_r2():
    code, out, _ = run("verify", "--filter", "pi_series_r2*", "--output", "json")
    rows = [json.loads(line) for line in out.splitlines()[:-1]]
    assert code == 0
    assert {r["id"]: r["status"] for r in rows} == {"pi_series_r2": "pass", "pi_series_r2_as_printed": "known-erratum-confirmed"}


def test_verify_no_match_is_usage_error():
    assert run("verify", "--filter", "nothing_here*")[0] == 1


def test_verify_all_text_summary():
    code, out, _ = run("verify")
    assert code == 0
    assert "0 unexpected failures" in out.splitlines()[-1]


def test_table_subset():
    code, out, _ = run("table", "--r", "1,2,4", "--digits", "20")
    assert code == 0
    assert len(out.splitlines()) == 4


def test_help_exits_zero():
    assert run("--help")[0] == 0
