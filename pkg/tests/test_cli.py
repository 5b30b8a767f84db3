import json

import pytest

from hopfmirror import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--output", "json")
    return code, json.loads(out)


def test_surface_command(capsys):
    code, doc = run_json(capsys, "surface", "--A", "2,1,1,1")
    assert code == 0
    assert set(doc) == {"config", "cases", "summary"}
    case = doc["cases"][0]
    assert case["n"] == 3 and case["pi1"] == {"free_rank": 1, "torsion": [3]}


def test_algebraic_surface_is_reported(capsys):
    code, doc = run_json(capsys, "surface", "--A", "1,0,1,0")
    assert code == 0 and doc["cases"][0]["algebraic"] is True


def test_compact_homs(capsys):
    code, doc = run_json(capsys, "homs", "compact", "--A", "1,0,1,1", "--char", "0,0,-3,0")
    case = doc["cases"][0]
    assert code == 0 and case["cohomology"] == [0, 2, 2] and case["floer_degrees"] == [0, 2, 2]


def test_open_homs_both_sides(capsys):
    _, b = run_json(capsys, "homs", "open", "--side", "B", "--L0", "1,0,0", "--L1", "1,0,2", "--window", "3")
    _, a = run_json(capsys, "homs", "open", "--side", "A", "--L0", "1,0,0", "--L1", "1,0,2", "--window", "3")
    assert b["cases"][0]["count"] == a["cases"][0]["count"] > 0
    assert all(g["degree"] == 0 for g in a["cases"][0]["generators"])


def test_rationals_serialised_as_strings(capsys):
    _, doc = run_json(capsys, "homs", "open", "--side", "A", "--L0", "1,0,0", "--L1", "2,1,1,1/2", "--window", "2")
    pt = doc["cases"][0]["generators"][0]["point"]
    assert all(isinstance(c, str) for c in pt)
    assert any("/" in c for g in doc["cases"][0]["generators"] for c in g["point"])


def test_product_all_sides(capsys):
    code, doc = run_json(capsys, "product", "--L0", "1,0,-1", "--L1", "1,0,0", "--L2", "1,-1,1", "--window", "4")
    assert code == 0 and doc["summary"]["fail"] == 0
    assert doc["cases"][0]["max_abs_diff"] < 1e-12


@pytest.mark.parametrize("side", ["A", "B", "oracle"])
def test_product_single_side(capsys, side):
    code, doc = run_json(capsys, "product", "--side", side, "--L0", "1,0,-1", "--L1", "1,0,0", "--L2", "1,-1,1")
    assert code == 0
    assert doc["cases"][0]["coefficients"]["(0,0)"] == pytest.approx([1.0, 0.0])


def test_tau_flag_and_environment(capsys, monkeypatch):
    _, flag = run_json(capsys, "repro", "example-8", "--tau", "0.3+0.8i")
    monkeypatch.setenv("HMS_TAU", "0.3+0.8i")
    _, env = run_json(capsys, "repro", "example-8")
    assert flag == env
    assert flag["config"]["tau"] == [0.3, 0.8]


def test_output_is_deterministic(capsys):
    first = run(capsys, "verify", "open", "--trials", "3", "--seed", "5", "--output", "json")
    second = run(capsys, "verify", "open", "--trials", "3", "--seed", "5", "--output", "json")
    assert first == second and first[0] == 0


def test_table_output(capsys):
    code, out, _ = run(capsys, "repro", "hopf-cohomology", "--output", "table")
    assert code == 0
    assert out.count("PASS") == 8 and "FAIL" not in out
    assert out.strip().splitlines()[-1].startswith("pass 8  fail 0")


@pytest.mark.parametrize("suite", ["compact", "diagram", "perturbation", "associativity"])
def test_verify_suites(capsys, suite):
    code, doc = run_json(capsys, "verify", suite, "--trials", "2", "--seed", "1")
    assert code == 0 and doc["summary"]["fail"] == 0 and doc["summary"]["pass"] > 0


def test_failing_case_exits_one(capsys, monkeypatch):
    monkeypatch.setattr(cli, "hopf_cohomology", lambda cfg: [cli._case("broken", False)])
    code, doc = run_json(capsys, "repro", "hopf-cohomology")
    assert code == 1 and doc["summary"] == {"pass": 0, "fail": 1, "max_abs_diff": 0.0}


@pytest.mark.parametrize("argv", [
    ["surface", "--A", "2,2,1,1"],
    ["surface", "--A", "1,2"],
    ["repro", "example-8", "--tau=-1i"],
    ["homs", "open", "--side", "A", "--L0", "0,1,2"],
    ["product", "--L0", "0,1,2", "--L1", "1,0,0", "--L2", "1,0,1"],
    ["homs", "compact", "--char", "0,0,1/2,1/3", "--A", "1,0,1,0"],
    ["surface"],
    ["nonsense"],
])
def test_usage_errors_exit_two(capsys, argv):
    assert run(capsys, *argv)[0] == 2
