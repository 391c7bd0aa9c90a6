import json
import subprocess
import sys

import pytest

from ncsaito import __version__
from ncsaito.cli import main
from ncsaito.cyclic import canonicalize
from ncsaito.expr import parse


def run_cli(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, json.loads(out), err


def test_quasi_example(capsys):
    status, doc, _ = run_cli(capsys, "quasi", "--vars", "x", "--trunc", "8", "x^3")
    assert status == 0 and doc["quasi_homogeneous"] is True
    assert doc["version"] == __version__ and doc["command"] == "quasi"
    assert doc["config"]["trunc"] == 8 and doc["truncation"] == 8 and doc["input"] == "x^3"
    assert "certified_mod_degree" in doc


def test_weights_example(capsys):
    status, doc, _ = run_cli(capsys, "weights", "--vars", "x", "x^4")
    assert status == 0 and doc["weights"] == ["1/4"]


def test_jacobi_inconclusive_example(capsys):
    status, doc, _ = run_cli(capsys, "jacobi", "--vars", "x,y", "--nmax", "6", "x^3+y^3")
    assert status == 0 and doc["finite"] is False and doc["searched_to"] == 6


def test_jacobi_finite(capsys):
    status, doc, _ = run_cli(capsys, "jacobi", "--vars", "x", "x^5")
    assert doc["finite"] and doc["nil_degree"] == 4 and doc["dimension"] == 4
    assert doc["normal_words"] == ["1", "x", "x*x", "x*x*x"]


def test_canon_round_trip(capsys):
    status, doc, _ = run_cli(capsys, "canon", "--vars", "x,y", "--trunc", "6", "x*y + 2*y*x - x*y*y + y*x*y")
    assert status == 0
    expr = doc["canonical"]["expr"]
    assert doc["canonical"]["terms"] == [{"coeff": "3/1", "word": "y*x"}]
    again = canonicalize(parse(expr, ("x", "y"), 6))
    assert again.rep == parse(expr, ("x", "y"), 6)
    _, doc2, _ = run_cli(capsys, "canon", "--vars", "x,y", "--trunc", "6", expr)
    assert doc2["canonical"] == doc["canonical"]


def test_other_commands(capsys):
    _, doc, _ = run_cli(capsys, "order", "--vars", "x,y", "x^5 + y*x")
    assert doc["order"] == 2
    _, doc, _ = run_cli(capsys, "cyc-diff", "--vars", "x,y", "--var", "x", "x*y*x*y")
    assert doc["derivative"]["terms"] == [{"coeff": "2/1", "word": "y*x*y"}]
    _, doc, _ = run_cli(capsys, "class", "--vars", "x", "--theta", "x", "x^3")
    assert doc["zero"] is False and doc["residue"]["expr"] == "x"
    _, doc, _ = run_cli(capsys, "abelianize", "--vars", "x,y", "x*y*x - y*x*x + x*y")
    assert doc["abelianization"]["expr"] == "x*y"
    _, doc, _ = run_cli(capsys, "normalize", "--vars", "x", "--trunc", "7", "x^3 + 3*x^4 + 3*x^5 + x^6")
    assert doc["weights"] == ["1/3"] and doc["normal_form"]["expr"] == "x^3"


def test_jc_resonant(capsys):
    status, doc, _ = run_cli(capsys, "jc", "--vars", "x,y", "--trunc", "6", "--derivation", "x=x; y=2*y+x^2")
    assert status == 0
    assert doc["eigenvalues"] == ["1/1", "2/1"]
    assert doc["nilpotent"]["y"]["expr"] == "x^2"
    assert doc["semisimple"]["y"]["expr"] == "2*y"
    assert doc["input"] == "x=x; y=2*y+x^2"


@pytest.mark.parametrize(
    "argv, status, code",
    [
        (["canon", "--vars", "x", "x +"], 2, "parse_error"),
        (["canon", "--vars", "x", "x + z"], 2, "unknown_variable"),
        (["canon", "--vars", "x,x", "x"], 2, "config_error"),
        (["canon", "--vars", "x", "--trunc", "1", "x"], 2, "config_error"),
        (["frobnicate", "--vars", "x", "x"], 2, "config_error"),
        (["order", "--vars", "x,y", "x*y - y*x"], 2, "zero_potential"),
        (["quasi", "--vars", "x,y", "--nmax", "4", "x^3 + y^3"], 3, "not_certified_finite"),
        (["weights", "--vars", "x,y", "y^2*x + x^4 + y*x^3"], 3, "not_quasi_homogeneous"),
        (["jc", "--vars", "x,y", "--trunc", "4", "--derivation", "x=y;y=-x"], 3, "non_rational_spectrum"),
        (["jc", "--vars", "x,y", "--derivation", "x=x"], 2, "config_error"),
        (["jacobi", "--vars", "x,y", "--size-guard", "50", "x^3"], 4, "level_too_large"),
        (["weights", "--vars", "x,y,z", "--size-guard", "1000", "x^3"], 4, "level_too_large"),
    ],
)
def test_error_exit_codes(capsys, argv, status, code):
    got, doc, err = run_cli(capsys, *argv)
    assert got == status
    assert doc["error"]["code"] == code and doc["error"]["exit_status"] == status
    assert err.startswith("ncsaito: ")


def test_threads_env_is_validated(capsys, monkeypatch):
    monkeypatch.setenv("NCSAITO_THREADS", "two")
    status, doc, _ = run_cli(capsys, "order", "--vars", "x", "x^3")
    assert status == 2
    monkeypatch.setenv("NCSAITO_THREADS", "2")
    status, doc, _ = run_cli(capsys, "order", "--vars", "x", "x^3")
    assert status == 0 and doc["config"]["threads"] == 2


def test_text_output(capsys):
    assert main(["weights", "--vars", "x", "--output", "text", "x^4"]) == 0
    out = capsys.readouterr().out
    assert "weights: 1/4" in out


def reject_float(text):
    raise AssertionError(f"floating-point value {text} in output")


def test_console_script_is_deterministic():
    # the image of y^2*x + x^4 under y -> y - x^2/2
    cmd = [sys.executable, "-m", "ncsaito.cli", "normalize", "--vars", "x,y", "--trunc", "7",
           "y^2*x + x^4 - y*x^3 + 1/4*x^5"]
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    assert first.returncode == 0 and first.stdout == second.stdout
    doc = json.loads(first.stdout, parse_float=reject_float)
    assert doc["weights"] == ["1/4", "3/8"]
    assert doc["normal_form"]["expr"] == "y^2*x + x^4"
