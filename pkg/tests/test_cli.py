from __future__ import annotations

import json
import subprocess
import sys

import pytest

from supercasimir.algebra import builtin
from supercasimir.cli import main
from supercasimir.representations import natural_module

MOD = ["--factors", "natural,natural", "--builtin", "gl:2,1", "--points", "1,2"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out), out


def test_algebra_validate_and_info(capsys):
    code, rep, _ = run(capsys, "algebra", "validate", "--builtin", "osp12")
    assert code == 0 and rep["status"] == "pass"
    code, rep, _ = run(capsys, "algebra", "info", "--builtin", "gl:2,1")
    roots = [r["name"] for r in rep["results"][0]["positive_roots"]]
    assert sorted(roots) == ["alpha[1,2]", "alpha[1,3]", "alpha[2,3]"]
    assert rep["algebra"]["fingerprint"] == builtin("gl:2,1").fingerprint()


def test_corrupted_algebra_file(tmp_path, capsys):
    doc = builtin("sl2").to_dict()
    doc["form"] = [[1, 1, "3"]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, rep, _ = run(capsys, "algebra", "validate", "--algebra", str(path))
    assert code == 2 and rep["status"] == "error"
    assert "form" in rep["error"]


def test_verify_exit_codes(capsys):
    assert run(capsys, "verify", "--builtin", "sl2", "--op", "Omega", "--mode", "central")[0] == 0
    assert run(capsys, "verify", "--builtin", "gl:2,1", "--op", "T[2](p1;p2)", "--points", "1,2")[0] == 0
    code, rep, _ = run(capsys, "verify", "--builtin", "gl:2,1", "--op", "D[1]", "--mode", "anti")
    assert code == 1
    res = rep["results"][0]["residuals"]
    assert res["E[1,3]"]["text"] == "-2*E[1,3] + 2*E[1,1]*E[1,3] + 2*E[2,2]*E[1,3] - 2*E[3,3]*E[1,3]"
    assert run(capsys, "verify", "--builtin", "osp12", "--op", "e f - f e + 1", "--mode", "anti")[0] == 0
    assert run(capsys, "verify", "--builtin", "gl:2,1", "--op", "S[2]", "--mode", "even-central")[0] == 0


def test_input_errors(capsys):
    assert run(capsys, "verify", "--builtin", "sl2", "--op", "e +")[0] == 2
    assert run(capsys, "verify", "--builtin", "sl2", "--op", "q")[0] == 2
    assert run(capsys, "module", "weights", "--factors", "natural,natural", "--builtin", "gl:2,1", "--points", "1,1")[0] == 2
    assert run(capsys, "module", "weights", "--factors", "natural", "--builtin", "gl:2,1", "--points", "0")[0] == 2
    assert run(capsys, "verify", "--builtin", "gl:9", "--op", "Omega")[0] == 2


def test_batch(tmp_path, capsys):
    path = tmp_path / "ops.txt"
    path.write_text("# invariants\nOmega\nT[2](t; t^-1)  # loop\n\nT[3]\n")
    code, rep, _ = run(capsys, "verify", "--builtin", "gl:2,1", "--batch", str(path))
    assert code == 0
    assert [r["expression"] for r in rep["results"]] == ["Omega", "T[2](t; t^-1)", "T[3]"]


def test_module_commands(capsys):
    code, rep, _ = run(capsys, "module", "hwv", *MOD, "--weight", "2,0,0")
    assert code == 0
    assert rep["results"][0]["hwv"][0]["basis"] == [["1"] + ["0"] * 8]
    assert run(capsys, "module", "gelfand-sum", "--k", "2", *MOD)[0] == 0
    assert run(capsys, "module", "stability", "--k", "2", "--tuple", "1,2", *MOD)[0] == 0
    assert run(capsys, "module", "stability", "--op", "E[2,1]", *MOD)[0] == 1
    code, rep, _ = run(capsys, "module", "act", "--op", "T[1]", *MOD)
    assert rep["results"][0]["matrix"][0][0] == "2"


def test_module_spec_and_loaded_factor(tmp_path, capsys):
    rep_path = tmp_path / "nat.json"
    rep_path.write_text(json.dumps(natural_module(builtin("gl:2,1")).to_dict()))
    spec = tmp_path / "mod.json"
    spec.write_text(json.dumps({"factors": ["natural", str(rep_path)], "points": ["1", "2"]}))
    code, rep, _ = run(capsys, "module", "weights", "--builtin", "gl:2,1", "--module", str(spec))
    assert code == 0
    assert rep["results"][0]["module"]["dimension"] == 9


def test_json_file_matches_stdout(tmp_path, capsys):
    out = tmp_path / "r.json"
    _, _, text = run(capsys, "verify", "--builtin", "sl2", "--op", "Omega", "--json", str(out))
    assert out.read_text() == text


@pytest.mark.parametrize("argv", [
    ["algebra", "info", "--builtin", "osp12"],
    ["verify", "--builtin", "gl:2,1", "--op", "D[2]", "--mode", "anti"],
    ["module", "even-hwv", *MOD],
])
def test_subprocess_determinism(argv):
    outs = {subprocess.run([sys.executable, "-m", "supercasimir.cli", *argv], capture_output=True).stdout for _ in range(2)}
    assert len(outs) == 1
