"""End-to-end runs of the command-line interface."""

import json
import math
import subprocess
import sys

import pytest

from hyperiso.cli import main

V_BALL = 4.188790204786391


@pytest.fixture
def zero_density(tmp_path):
    path = tmp_path / "zero.json"
    path.write_text('{"lambda_nodes": [[0.0, 0.0]]}')
    return str(path)


@pytest.fixture
def bump_density(tmp_path):
    path = tmp_path / "bump.json"
    path.write_text('{"lambda_nodes": [[0.0, 0.0], [0.25, 0.0], [0.6, 1.0]]}')
    return str(path)


@pytest.fixture
def r03_density(tmp_path):
    path = tmp_path / "r03.json"
    path.write_text('{"lambda_nodes": [[0.0, 0.0], [0.3, 0.0], [0.9, 2.0]]}')
    return str(path)


def run_cli(args):
    return main(args)


def test_profile_singleton_row(zero_density, capsys):
    code = run_cli([
        "profile", "--density", zero_density,
        "--vmin", repr(V_BALL), "--vmax", repr(V_BALL), "--steps", "1",
    ])
    assert code == 0
    assert capsys.readouterr().out == "v,r,I_v\n4.18879020479,0.5,8.37758040957\n"


def test_profile_writes_file(zero_density, tmp_path, capsys):
    out = tmp_path / "table.csv"
    code = run_cli([
        "profile", "--density", zero_density,
        "--vmin", "1.0", "--vmax", "2.0", "--steps", "3", "--out", str(out),
    ])
    assert code == 0
    assert capsys.readouterr().out == ""
    lines = out.read_text().splitlines()
    assert lines[0] == "v,r,I_v"
    assert len(lines) == 4
    assert lines[2].startswith("1.5,")


def test_profile_low_volume_identity(r03_density, capsys):
    code = run_cli([
        "profile", "--density", r03_density,
        "--vmin", "0.1", "--vmax", "1.2", "--steps", "8",
    ])
    assert code == 0
    for line in capsys.readouterr().out.splitlines()[1:]:
        v, _, iv = (float(x) for x in line.split(","))
        assert iv * iv == pytest.approx(v * v + 4.0 * math.pi * v, rel=1e-9)


def test_profile_input_errors(zero_density, capsys):
    assert run_cli([
        "profile", "--density", zero_density,
        "--vmin", "1", "--vmax", "2", "--steps", "0",
    ]) == 2
    assert run_cli([
        "profile", "--density", zero_density,
        "--vmin", "2", "--vmax", "1", "--steps", "5",
    ]) == 2
    assert run_cli([
        "profile", "--density", zero_density,
        "--vmin", "1", "--vmax", "2", "--steps", "1",
    ]) == 2
    assert run_cli([
        "profile", "--density", zero_density,
        "--vmin", "-1", "--vmax", "2", "--steps", "5",
    ]) == 2
    capsys.readouterr()


def test_profile_missing_file(tmp_path, capsys):
    code = run_cli([
        "profile", "--density", str(tmp_path / "absent.json"),
        "--vmin", "1", "--vmax", "2", "--steps", "3",
    ])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_ode_linear_header_and_rows(zero_density, capsys):
    code = run_cli([
        "ode", "--density", zero_density,
        "--a", "0.2", "--b", "0.5", "--eta=1,-1", "--samples", "5",
    ])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "# a=0.20000000000000001, b=0.5, eta=(1,-1), lambda=3"
    assert lines[1] == "tau,u"
    assert len(lines) == 7
    first = lines[2].split(",")
    assert float(first[0]) == 0.2 and float(first[1]) == 1.0


def test_ode_riccati_header_and_winding(zero_density, capsys):
    code = run_cli([
        "ode", "--density", zero_density,
        "--a", "0.2", "--b", "0.5", "--riccati", "--samples", "3", "--winding",
    ])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("# a=0.2")
    assert "eta=riccati" in lines[0]
    assert "lambda=1.5714285714285712" in lines[0]
    assert lines[1] == "tau,w"
    winding = float(lines[-1].split("=")[1])
    assert winding == pytest.approx(math.pi, abs=1e-6)


def test_ode_from_zero_winding(zero_density, capsys):
    code = run_cli([
        "ode", "--density", zero_density,
        "--b", "0.5", "--from-zero", "--samples", "3", "--winding",
    ])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    assert "eta=(0,1)" in lines[0]
    delta = float(lines[-1].split("=")[1])
    assert delta == pytest.approx(-math.pi / 2.0, abs=1e-6)


def test_ode_linear_winding_inside_flat_region(r03_density, capsys):
    # The slope vanishes below radius 0.3, so this interval behaves
    # exactly like the unweighted one.
    code = run_cli([
        "ode", "--density", r03_density,
        "--a", "0.1", "--b", "0.28", "--eta=1,1", "--winding",
    ])
    assert code == 0
    lines = capsys.readouterr().out.splitlines()
    delta = float(lines[-1].split("=")[1])
    assert delta == pytest.approx(-math.pi, abs=1e-6)


def test_ode_input_errors(zero_density, capsys):
    assert run_cli([
        "ode", "--density", zero_density,
        "--a", "0", "--b", "0.5", "--eta=1,1",
    ]) == 2
    assert run_cli([
        "ode", "--density", zero_density,
        "--a", "0.3", "--b", "0.5", "--eta=2,1",
    ]) == 2
    assert run_cli([
        "ode", "--density", zero_density,
        "--a", "0.3", "--b", "0.5", "--eta=nope",
    ]) == 2
    assert run_cli([
        "ode", "--density", zero_density, "--b", "0.5", "--riccati",
    ]) == 2
    assert run_cli([
        "ode", "--density", zero_density,
        "--a", "0.2", "--b", "0.5", "--from-zero",
    ]) == 2
    assert run_cli([
        "ode", "--density", zero_density,
        "--a", "0.2", "--b", "0.5", "--riccati", "--samples", "1",
    ]) == 2
    capsys.readouterr()


def test_verify_single_interval_hh(bump_density, capsys):
    code = run_cli([
        "verify", "--density", bump_density,
        "--a", "0.2", "--b", "0.5", "--suite", "hh",
    ])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    names = [c["name"] for c in doc["checks"]]
    assert names == [
        "reverse-hh(0.2,0.5)",
        "reverse-hh(0.2,0.5)/equality",
        "mhat-lower(0.2,0.5)",
        "m-bound(0.2,0.5)",
        "m-bound(0.2,0.5)/equality",
        "m-lower(0.2,0.5)",
    ]
    assert all(c["verdict"] in ("pass", "report-only") for c in doc["checks"])


def test_verify_single_interval_mu(zero_density, capsys):
    code = run_cli([
        "verify", "--density", zero_density,
        "--a", "0.2", "--b", "0.5", "--suite", "mu",
    ])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    names = [c["name"] for c in doc["checks"]]
    assert "mu-linear(0.2,0.5)/separation" in names
    assert "riccati(0.2,0.5)/norm" in names
    assert all(c["verdict"] != "fail" for c in doc["checks"])


def test_verify_ode_suite_lattice(zero_density, capsys):
    code = run_cli(["verify", "--density", zero_density, "--suite", "ode"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["checks"]) == 36
    for c in doc["checks"]:
        assert c["rhs"] == pytest.approx(math.pi, abs=1e-6)
        assert c["verdict"] == "pass"


def test_verify_profile_suite(r03_density, capsys):
    code = run_cli(["verify", "--density", r03_density, "--suite", "profile"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    names = [c["name"] for c in doc["checks"]]
    assert names[0] == "alternating-sum"
    assert "scaling[c=2]" in names
    assert "uniqueness-threshold" in names
    assert sum(1 for n in names if n.startswith("low-volume[")) == 10
    assert all(c["verdict"] == "pass" for c in doc["checks"])
    threshold = next(c for c in doc["checks"] if c["name"] == "uniqueness-threshold")
    assert threshold["lhs"] == pytest.approx(
        2.0 * math.pi * (2.0 / 0.91 - 2.0), rel=1e-9
    )


def test_verify_hypothesis_rows_do_not_fail(bump_density, capsys):
    code = run_cli([
        "verify", "--density", bump_density,
        "--a", "0.3", "--b", "0.5", "--suite", "mu",
    ])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    verdicts = {c["name"]: c["verdict"] for c in doc["checks"]}
    assert verdicts["riccati(0.3,0.5)/hypothesis"] == "hypothesis-violated"


def test_verify_one_sided_interval_rejected(zero_density, capsys):
    assert run_cli(["verify", "--density", zero_density, "--a", "0.2"]) == 2
    capsys.readouterr()


def test_verify_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run_cli(["verify", "--density", str(bad)]) == 2
    assert "invalid density JSON" in capsys.readouterr().err


def test_verify_deterministic_output(zero_density, tmp_path):
    out1 = tmp_path / "one.json"
    out2 = tmp_path / "two.json"
    for out in (out1, out2):
        assert run_cli([
            "verify", "--density", zero_density,
            "--a", "0.2", "--b", "0.5", "--suite", "hh", "--out", str(out),
        ]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_compete_control_and_rows(zero_density, capsys):
    code = run_cli([
        "compete", "--density", zero_density, "--volume", "3.4695",
        "--trials", "10", "--max-annuli", "4", "--seed", "42",
    ])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["seed"] == 42
    rows = doc["checks"]
    assert len(rows) == 13
    assert rows[0]["name"] == "competitor[0]:annuli"
    assert abs(rows[0]["slack"]) <= 1e-8
    kinds = {r["name"].split(":")[-1] for r in rows[1:11]}
    assert kinds == {"annuli", "cap"}
    control = next(r for r in rows if r["name"] == "ball-control")
    assert control["verdict"] == "pass"
    summary = next(r for r in rows if r["name"] == "min-slack")
    assert summary["verdict"] == "report-only"
    assert summary["slack"] >= -1e-8


def test_compete_weighted_no_failures(bump_density, capsys):
    code = run_cli([
        "compete", "--density", bump_density, "--volume", "5.0",
        "--trials", "12", "--max-annuli", "3", "--seed", "7",
    ])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert all(r["verdict"] != "fail" for r in doc["checks"])


def test_compete_deterministic(zero_density, tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        assert run_cli([
            "compete", "--density", zero_density, "--volume", "2.0",
            "--trials", "8", "--max-annuli", "2", "--seed", "1234",
            "--out", str(out),
        ]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_compete_input_errors(zero_density, capsys):
    assert run_cli([
        "compete", "--density", zero_density, "--volume", "3.0",
        "--trials", "0", "--max-annuli", "4", "--seed", "42",
    ]) == 2
    assert run_cli([
        "compete", "--density", zero_density, "--volume", "-1.0",
        "--trials", "5", "--max-annuli", "4", "--seed", "42",
    ]) == 2
    assert run_cli([
        "compete", "--density", zero_density, "--volume", "3.0",
        "--trials", "5", "--max-annuli", "0", "--seed", "42",
    ]) == 2
    capsys.readouterr()


def test_module_entry_point(zero_density):
    proc = subprocess.run(
        [sys.executable, "-m", "hyperiso.cli", "profile",
         "--density", zero_density,
         "--vmin", repr(V_BALL), "--vmax", repr(V_BALL), "--steps", "1"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "v,r,I_v\n4.18879020479,0.5,8.37758040957\n"
