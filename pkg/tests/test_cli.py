import json

import pytest

from woodshole.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path, capsys):
    endo, vf = tmp_path / "endo.json", tmp_path / "vf.json"
    assert main(["random", "endo", "--n", "2", "--d", "2", "--seed", "4", "-o", str(endo)]) == 0
    assert main(["random", "vf", "--d", "2", "--seed", "4", "-o", str(vf)]) == 0
    capsys.readouterr()
    return endo, vf


def test_fixed_points_command(files, capsys):
    code, out, _ = run(capsys, "fixed-points", str(files[0]))
    assert code == 0 and "census: 7 found, 7 expected  PASS" in out
    code, out, _ = run(capsys, "fixed-points", str(files[0]), "--json")
    assert json.loads(out)["census"]["pass"]


@pytest.mark.parametrize("target", ["lefschetz", "guillot"])
def test_verify_endo_targets(files, capsys, target):
    code, out, _ = run(capsys, "verify", target, str(files[0]))
    assert code == 0 and "overall PASS" in out


def test_verify_all_json_deterministic(files, capsys):
    code, first, _ = run(capsys, "verify", "all", str(files[1]), "--json", "--seed", "7")
    assert code == 0
    _, second, _ = run(capsys, "verify", "all", str(files[1]), "--json", "--seed", "7")
    assert first == second
    data = json.loads(first)
    names = {e["relation"] for e in data["entries"]}
    assert names == {"Euler-Jacobi 1", "Euler-Jacobi 2", "Baum-Bott", "Camacho-Sad",
                     "Generalized Lefschetz", "Guillot's relations"}


def test_custom_invariant_and_g(files, tmp_path, capsys):
    inv = tmp_path / "b.json"
    inv.write_text(json.dumps({"n": 2, "monomials": [{"a": [1, 0], "re": 2.0}, {"a": [0, 1], "re": -1.0}]}))
    code, out, _ = run(capsys, "verify", "guillot", str(files[0]), "--invariant", str(inv))
    assert code == 0
    g = tmp_path / "g.json"
    g.write_text(json.dumps([{"exp": [0, 1, 0], "re": 0.3, "im": -0.2}, {"exp": [1, 0, 0], "re": 1.0}]))
    code, out, _ = run(capsys, "verify", "cs-woodshole", str(files[1]), "--g", str(g))
    assert code == 0 and out.count("PASS") >= 2


def test_failing_relation_exit_code(files, capsys):
    code, out, _ = run(capsys, "verify", "lefschetz", str(files[0]), "--tol", "1e-300")
    assert code == 1 and "FAIL" in out


def test_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "fixed-points", str(bad))[0] == 2
    assert run(capsys, "fixed-points", str(tmp_path / "missing.json"))[0] == 2
    bad.write_text(json.dumps({"n": 1, "components": [[{"exp": [2, 0], "re": 1}], [{"exp": [1, 0], "re": 1}]]}))
    assert run(capsys, "fixed-points", str(bad))[0] == 2
    assert run(capsys, "verify", "nonsense", str(bad))[0] == 2
    assert run(capsys, "random", "endo", "--d", "5")[0] == 2


def test_hypothesis_violation_exit_code(tmp_path, capsys):
    vf = tmp_path / "lin.json"
    vf.write_text(json.dumps({"P": [{"exp": [1, 0], "re": 1}], "Q": [{"exp": [0, 1], "re": 2}]}))
    code, _, err = run(capsys, "verify", "ej", str(vf))
    assert code == 3 and "HypothesisViolation" in err
    base = tmp_path / "base.json"
    base.write_text(json.dumps({"n": 1, "components": [[{"exp": [1, 1], "re": 1}], [{"exp": [0, 2], "re": 1}]]}))
    assert run(capsys, "fixed-points", str(base))[0] == 3
