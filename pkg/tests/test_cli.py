import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from webflat.cli import EXIT_INPUT, EXIT_USAGE, main


def run(capsys, *argv, environ=None):
    code = main(list(argv), environ=environ or {})
    out = capsys.readouterr()
    return code, out.out, out.err


def report(text):
    doc = json.loads(text)
    assert doc["schema"] == "webflat-report/1"
    assert doc["tool"]["name"] == "webflat"
    return doc


def test_analyze_fermat2(capsys):
    code, out, _ = run(capsys, "analyze", "fermat:2")
    assert code == 0
    r = report(out)["result"]
    assert r["inflection"]["degree"] == 6 and r["inflection"]["fully_split"]
    assert sorted(f["line"] for f in r["inflection"]["linear_factors"]) == ["x", "x - y", "x - z", "y", "y - z", "z"]
    assert sum(1 for s in r["singularities"] if s["radial_order"] is not None) == 4


def test_analyze_homog3_and_random(capsys):
    r = report(run(capsys, "analyze", "homog:3")[1])["result"]
    origin = [s for s in r["singularities"] if s["point"] == "[0:0:1]"][0]
    assert r["convexity"]["convex"] is True and origin["nu"] == 3 and origin["special"]
    r = report(run(capsys, "analyze", "rand:2:42")[1])["result"]
    assert r["convexity"]["convex"] is False and r["convexity"]["witness"]


def test_legendre_fermat2(capsys):
    code, out, _ = run(capsys, "legendre", "fermat:2")
    r = report(out)["result"]
    assert code == 0
    assert r["dual"] == "p^2*x^2 + 2*p*q*x - p*x^2 + q^2 - q"
    assert r["discriminant"]["resultant"] == "p^2*q + p*q^2 - p*q"
    assert r["discriminant"]["agreement"] is True


def test_legendre_degree(capsys):
    r = report(run(capsys, "legendre", "line:1,-1,0", "fermat:2", "fermat:3")[1])["result"]
    assert r["degree"]["directions"] == 6


@pytest.mark.parametrize("argv,msg", [
    (["legendre", "fermat:2", "fermat:2"], "identically zero discriminant"),
    (["analyze", "foliation { a = y^2; b = ; }"], ""),
    (["flatness", "nope:3"], "unknown family"),
    (["analyze", "fermat:2", "fermat:3"], "exactly one foliation"),
])
def test_input_errors(capsys, argv, msg):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT and code > 2
    assert msg in err


@pytest.mark.parametrize("argv,env", [
    (["flatness", "--samples", "0", "ex3:2"], {}),
    (["flatness", "--flat-tol", "1e-3", "--nonflat-floor", "1e-4", "ex3:2"], {}),
    (["flatness", "ex3:2"], {"WEBFLAT_SAMPLES": "many"}),
    (["paper-suite", "--only", "12"], {}),
])
def test_usage_errors(capsys, argv, env):
    assert run(capsys, *argv, environ=env)[0] == EXIT_USAGE


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(["--samples", "--seed", "--precision", "--probes"]), st.text(min_size=1, max_size=5))
def test_malformed_flag_values_are_usage_errors(flag, value):
    try:
        int(value)
        return
    except ValueError:
        pass
    with pytest.raises(SystemExit) as e:
        main(["flatness", flag, value, "ex3:2"], environ={})
    assert e.value.code == EXIT_USAGE


@pytest.mark.parametrize("argv,code", [
    (["flatness", "--samples", "40", "ex3:2"], 1),
    (["flatness", "--samples", "40", "fermat:3", "fermat:5"], 0),
    (["flatness", "--samples", "40", "rand:2:7", "line:1,2,3"], 1),
    (["flatness", "--samples", "40", "--flat-tol", "1e-14", "fermat:2", "fermat:3"], 2),
])
def test_flatness_exit_codes(capsys, argv, code):
    c, out, _ = run(capsys, *argv)
    assert c == code
    assert report(out)["result"]["verdict"]["status"] == {0: "flat-consistent", 1: "non-flat", 2: "inconclusive"}[code]


def test_env_and_flag_precedence(capsys):
    doc = report(run(capsys, "flatness", "ex3:2", environ={"WEBFLAT_SAMPLES": "12", "WEBFLAT_SEED": "4"})[1])
    assert doc["config"]["samples"] == 12 and doc["config"]["seed"] == 4
    doc = report(run(capsys, "flatness", "--samples", "10", "ex3:2", environ={"WEBFLAT_SAMPLES": "12"})[1])
    assert doc["config"]["samples"] == 10


def test_report_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "flatness", "--samples", "20", "--out", str(a), "ex3:2")
    run(capsys, "flatness", "--samples", "20", "--out", str(b), "ex3:2")
    assert a.read_bytes() == b.read_bytes()


def test_paper_suite_subset(capsys):
    code, out, err = run(capsys, "paper-suite", "--only", "1", "--only", "3")
    assert code == 0
    assert "criterion  1 PASS" in err and "criterion  3 PASS" in err
    assert [c["criterion"] for c in report(out)["result"]["criteria"]] == [1, 3]


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "webflat.cli", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("webflat ")
