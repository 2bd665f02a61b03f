import json

import pytest

from fmcycles.cli import run
from fmcycles.serialize import descriptor_from_json, moduli_point_from_json


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


NODE_BLOCK = {
    "curve": {"type": "cycle", "components": 2},
    "summands": [
        {"kind": "nlf", "length": 1, "start": 0, "multidegree": [-1]},
        {"kind": "nlf", "length": 1, "start": 1, "multidegree": [-1]},
    ],
}


def test_reduce(capsys):
    assert run(["reduce", "--r", "6", "--d", "4", "--h", "1", "--trace"]) == 0
    out = capsys.readouterr().out
    assert "terminal (0, 2)" in out and "trace " in out


def test_reduce_json(capsys):
    assert run(["reduce", "--r", "3", "--d", "2", "--h", "3", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["terminal"] == [0, 1] and payload["capped"] is False
    assert run(["--json", "reduce", "--r", "5", "--d", "0", "--h", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["terminal"] == [5, 0]


def test_classify_node_block(tmp_path, capsys):
    path = _write(tmp_path, "d.json", NODE_BLOCK)
    assert run(["classify", path]) == 0
    out = capsys.readouterr().out
    assert "strictly semistable; graded = O_C1(-1) + O_C2(-1); moduli point = node" in out
    assert run(["classify", path, "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["verdict"] == "strictly semistable"
    assert descriptor_from_json(payload["descriptor"]) == descriptor_from_json(NODE_BLOCK)
    assert payload["moduli_point"] == {"points": [{"type": "node", "mult": 1}]}


def test_classify_unsupported_stability_still_reports(tmp_path, capsys):
    obj = {"curve": {"components": 2}, "summands": [{"kind": "vb", "m": 2, "multidegree": [1, 0]}]}
    assert run(["classify", _write(tmp_path, "d.json", obj)]) == 0
    assert "not decided" in capsys.readouterr().out


def test_cohomology(capsys):
    assert run(["cohomology", "--n", "2", "--multidegree", "2,-2", "--lambda", "1"]) == 0
    assert capsys.readouterr().out.strip() == "h0=1 h1=1"
    assert run(["cohomology", "--multidegree", "0,-1", "--chain", "--json"]) == 0
    assert json.loads(capsys.readouterr().out) == {"h0": 0, "h1": 0, "chi": 0}


def test_transform(capsys):
    assert run(["transform", "--seq", "phi,psi", "--r", "1", "--d", "0", "--h", "1"]) == 0
    assert capsys.readouterr().out.startswith("(1, 0) -> (-1, 0) -> (-1, -1)")
    assert run(["transform", "--seq", "phi", "--multirank", "1,1", "--chi", "0", "--json"]) == 0
    steps = json.loads(capsys.readouterr().out)["steps"]
    assert steps[-1] == {"multirank": [-1, -1], "chi": 0}
    assert run(["transform", "--seq", "phi"]) == 2


def test_graded(tmp_path, capsys):
    obj = {"curve": {"components": 2}, "summands": [{"kind": "vb", "m": 3, "multidegree": [0, 0]}]}
    assert run(["graded", _write(tmp_path, "f3.json", obj)]) == 0
    assert capsys.readouterr().out.strip() == "L(1)^3"


def test_moduli_point_and_inverse(tmp_path, capsys):
    path = _write(tmp_path, "d.json", NODE_BLOCK)
    assert run(["moduli-point", path]) == 0
    assert capsys.readouterr().out.strip() == "{node}"
    point = {"points": [{"type": "smooth", "lambda": {"num": 3, "den": 2}}, {"type": "node", "mult": 1}]}
    assert run(["moduli-point", "--inverse", "--n", "3", _write(tmp_path, "p.json", point)]) == 0
    desc = json.loads(capsys.readouterr().out)
    assert run(["moduli-point", _write(tmp_path, "back.json", desc), "--json"]) == 0
    assert moduli_point_from_json(json.loads(capsys.readouterr().out)) == moduli_point_from_json(point)


def test_orbit_and_dot(capsys):
    assert run(["orbit", "--r", "2", "--d", "1", "--h", "1", "--cap", "8"]) == 0
    assert "minimum (0, 1)" in capsys.readouterr().out
    assert run(["orbit", "--r", "2", "--d", "1", "--h", "1", "--cap", "4", "--dot"]) == 0
    assert capsys.readouterr().out.startswith("digraph orbit {")


def test_enumerate_stable(capsys):
    assert run(["enumerate-stable", "--n", "2", "--polarization", "1,2", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["stable_locus"]["3"].startswith("component")
    assert payload["stable_locus"]["2"] == "isolated points O_C2(-1)"
    assert run(["enumerate-stable", "--n", "1"]) == 1


def test_selftest_subset(capsys):
    assert run(["selftest", "--only", "1,5"]) == 0
    out = capsys.readouterr().out
    assert "2/2 criteria passed" in out


@pytest.mark.parametrize("argv,code", [
    (["reduce", "--r", "x", "--d", "1", "--h", "1"], 2),
    (["frobnicate"], 2),
    ([], 2),
    (["classify", "/nonexistent/file.json"], 2),
    (["reduce", "--r", "0", "--d", "0", "--h", "1"], 1),
    (["reduce", "--r", "2", "--d", "1", "--h", "0"], 1),
    (["cohomology", "--multidegree", "1,a"], 2),
    (["cohomology", "--multidegree", "1,1", "--lambda", "0"], 2),
])
def test_exit_codes(argv, code, capsys):
    assert run(argv) == code
    assert capsys.readouterr().err


def test_unstable_graded_is_domain_error(tmp_path, capsys):
    obj = {"curve": {"components": 2}, "summands": [{"kind": "vb", "multidegree": [2, -2]}]}
    assert run(["graded", _write(tmp_path, "u.json", obj)]) == 1
