"""Mapspec round-trips and the command line interface."""

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from plcert.errors import ParseError, ValidationError
from plcert.mapspec import MapSpec, parse_mapspec, resolve, serialize_mapspec


def run_cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "plcert.cli", *argv],
        capture_output=True, text=True,
    )


def test_parse_family():
    spec = parse_mapspec('{"family":"F","lambda":"16/5"}')
    assert spec == MapSpec(family="F", lam=Fraction(16, 5), nodes=None)
    em = resolve(spec)
    assert em.map_id == "F[16/5]"
    assert em(Fraction(-3, 2)) == Fraction(3, 2)


def test_parse_plmap():
    spec = parse_mapspec('{"plmap":{"nodes":[["0","0"],["1/2","1"],["1","0"]]}}')
    em = resolve(spec)
    assert em.map_id.startswith("plmap#") and len(em.map_id) == len("plmap#") + 12
    assert em(Fraction(1, 4)) == Fraction(1, 2)


def test_round_trip():
    for text in (
        '{"family":"psi","lambda":"7/2"}',
        '{"plmap":{"nodes":[["0","1"],["2","0"]]}}',
    ):
        spec = parse_mapspec(text)
        assert parse_mapspec(serialize_mapspec(spec)) == spec


def test_parse_error_has_location():
    with pytest.raises(ParseError) as exc_info:
        parse_mapspec('{"family": }')
    assert "line 1, column 12" in str(exc_info.value)


@pytest.mark.parametrize("text, needle", [
    ('{"family":"phi","lambda":"3"}', '"lambda"'),
    ('{"family":"phi","lambda":"0.5"}', '"lambda"'),
    ('{"family":"nope","lambda":"4"}', "unknown family 'nope'"),
    ('{"family":"phi","lambda":"4","x":1}', "unknown fields"),
    ('{"plmap":{"nodes":[["0","0"]]}}', "nodes"),
    ('{}', ""),
])
def test_validation_errors(text, needle):
    with pytest.raises(ValidationError) as exc_info:
        parse_mapspec(text)
    assert needle in str(exc_info.value)


def test_cli_fixed_points_report():
    p = run_cli("fixed-points", "--map", "F", "--lambda", "16/5",
                "--window", "-10:10")
    assert p.returncode == 0
    rep = json.loads(p.stdout)
    assert rep["fixed_points"] == [["0", "0"]]
    assert rep["map_id"] == "F[16/5]"
    # key-sorted determinism
    assert p.stdout == run_cli(
        "fixed-points", "--map", "F", "--lambda", "16/5", "--window", "-10:10"
    ).stdout


def test_cli_plot_svg(tmp_path):
    out = tmp_path / "F.svg"
    p = run_cli("plot", "--map", "F", "--lambda", "16/5", "--window", "-2:2",
                "--iterate", "2", "--out", str(out))
    assert p.returncode == 0
    text = out.read_text()
    assert text.startswith("<svg ") and text.rstrip().endswith("</svg>")


def test_cli_find_and_verify_horseshoe(tmp_path):
    mapfile = tmp_path / "tent.json"
    mapfile.write_text('{"plmap":{"nodes":[["0","0"],["1/2","1"],["1","0"]]}}')
    p = run_cli("find-horseshoe", "--map", str(mapfile))
    assert p.returncode == 0
    rep = json.loads(p.stdout)
    assert rep["found"] and rep["kind"] == "tight"

    cert = tmp_path / "cert.json"
    cert.write_text(json.dumps({
        "base": ["0", "1"],
        "pieces": [[["0", "1/2"]], [["1/2", "1"]]],
        "iterate": 1,
    }))
    p = run_cli("verify-horseshoe", "--map", str(mapfile), "--cert", str(cert))
    assert p.returncode == 0
    assert json.loads(p.stdout)["ok"]

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "base": ["0", "1"],
        "pieces": [[["0", "1/2"]], [["1/4", "1"]]],
        "iterate": 1,
    }))
    p = run_cli("verify-horseshoe", "--map", str(mapfile), "--cert", str(bad))
    assert p.returncode == 1
    rep = json.loads(p.stdout)
    assert not rep["ok"] and rep["witness"] is not None


def test_cli_entropy_report():
    p = run_cli("entropy", "--map", "H", "--lambda", "16/5")
    assert p.returncode == 0
    rep = json.loads(p.stdout)
    assert rep["bounds"]["lower"]["symbolic"] == "log(3)"
    assert rep["bounds"]["upper"]["symbolic"] == "log(16/5)"
    assert rep["covering_matrix"]["classification"] == "primitive"


def test_cli_spec_refute_exit_codes():
    p = run_cli("spec-refute", "--map", "F", "--lambda", "16/5")
    assert p.returncode == 0
    rep = json.loads(p.stdout)
    assert rep["refuted"]

    p = run_cli("spec-refute", "--map", "fbar", "--lambda", "16/5")
    assert p.returncode == 0
    assert not json.loads(p.stdout)["refuted"]

    p = run_cli("spec-refute", "--map", "G", "--lambda", "16/5")
    assert p.returncode == 1
    assert json.loads(p.stderr)["error"] == "not_applicable"


def test_cli_acceptance_subset():
    p = run_cli("acceptance", "--n", "1..3")
    assert p.returncode == 0
    rep = json.loads(p.stdout)
    assert rep["all_passed"]
    assert [r["num"] for r in rep["results"]] == [1, 2, 3]


@pytest.mark.parametrize("argv", [
    ("fixed-points", "--map", "phi", "--lambda", "3", "--window", "0:1"),
    ("fixed-points", "--map", "missing.json", "--window", "0:1"),
    ("fixed-points", "--map", "F", "--window", "0:1"),
    ("fixed-points", "--map", "F", "--lambda", "16/5", "--window", "oops"),
    ("acceptance", "--n", "banana"),
])
def test_cli_usage_errors_exit_2(argv):
    assert run_cli(*argv).returncode == 2
