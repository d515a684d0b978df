import io
import json
import subprocess
import sys

import jsonschema
import pytest

from levelcontract import formats, schemas
from levelcontract.cli import main
from levelcontract.oracle import canonical_form

from conftest import FIXTURES, load


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], stdout=out)
    return code, out.getvalue()


def fx(name):
    return str(FIXTURES / name)


def check_schema(name, text):
    docs = [json.loads(line) for line in text.splitlines() if line.strip()] if name != "graph" else [json.loads(text)]
    for doc in docs:
        schema = schemas.load("error" if "exit" in doc else name)
        jsonschema.validate(doc, schema)
    return docs


def test_validate():
    code, out = run("validate", fx("g1.graph"))
    assert code == 0 and out.strip().endswith("valid")
    code, out = run("validate", fx("g1-badlength.graph"))
    assert code == 1 and "SlopeLengthMismatch" in out


def test_validate_empty_file(tmp_path, capsys):
    empty = tmp_path / "empty.graph"
    empty.write_text("")
    code, _ = run("validate", empty)
    assert code == 2
    assert "expected 'graph'" in capsys.readouterr().err


def test_validate_batch_exit_is_max(capsys):
    code, out = run("validate", fx("g1.graph"), fx("g1-badlength.graph"), fx("g3.graph"))
    assert code == 1 and out.count(": valid") == 2


def test_validate_json_stdin(monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(formats.to_json(load("g1.graph"))))
    code, out = run("validate", "-", "--json")
    assert code == 0 and check_schema("validation", out)[0]["status"] == "valid"


def test_modify_g1(tmp_path):
    target = tmp_path / "g1p.graph"
    code, out = run("modify", fx("g1.graph"), "--level", -1, "--out", target)
    assert code == 0 and "d = 1" in out
    assert formats.parse(target.read_text()) == load("g1p.graph")


def test_modify_g2():
    code, out = run("modify", fx("g2.graph"), "--level", -1)
    assert code == 0
    assert "# base change d = 2 (t = s^2)" in out
    g = formats.parse(out)
    assert g.level_table == {0: 0, -1: 2, -2: 4}
    code, out = run("modify", fx("g2.graph"), "--level", -1, "--json")
    doc = check_schema("modification", out)[0]
    assert doc["report"]["d"] == 2 and formats.graph_from_dict(doc["graph"]) == g


def test_modify_marked_pole(capsys):
    code, _ = run("modify", fx("pole-above.graph"), "--level", -1)
    assert code == 3 and "p" in capsys.readouterr().err


def test_contract_g1p():
    code, out = run("contract", fx("g1p.graph"), "--level", -1)
    assert code == 0
    assert "n=2" in out and "delta=3" in out and "contacts 2,2" in out


def test_contract_obstructed_and_modify(capsys):
    code, _ = run("contract", fx("g1.graph"), "--level", -1)
    assert code == 3 and "MarkedZeroAbove z1" in capsys.readouterr().err
    code, out = run("contract", fx("g1.graph"), "--level", -1, "--modify")
    assert code == 0 and "n=2" in out and "delta=3" in out and "contacts 2,2" in out
    code, _ = run("contract", fx("g2.graph"), "--level", -1)
    err = capsys.readouterr().err
    assert code == 3 and "MarkedZeroAbove z0" in err and "LongEdgeCrossing e02" in err


def test_contract_json():
    code, out = run("contract", fx("g2.graph"), "--level", -1, "--modify", "--json")
    doc = check_schema("contraction", out)[0]
    assert code == 0 and doc["singularities"][0]["branches"] == 3 and doc["modification"]["d"] == 2
    code, out = run("contract", fx("g1.graph"), "--level", -1, "--json")
    doc = check_schema("contraction", out)[0]
    assert code == 3 and doc["error"] == "NotContractible"


def test_contract_unknown_level(capsys):
    code, _ = run("contract", fx("g1.graph"), "--level", -7)
    assert code == 1
    code, _ = run("contract", fx("g1.graph"), "--level", -7, "--modify")
    assert code == 1


def test_grc_solve():
    code, out = run("grc", fx("g3.graph"), "--level", -1, "--solve")
    assert code == 0 and "kernel dim: 0 (with GRC), 1 (without)" in out
    code, out = run("grc", fx("g3.graph"), "--level", -1, "--solve", "--json")
    doc = check_schema("residue-system", out)[0]
    assert (doc["with_grc"]["kernel_dim"], doc["without_grc"]["kernel_dim"]) == (0, 1)


def test_grc_residues():
    code, out = run("grc", fx("g3.graph"), "--level", -1, "--residues", fx("g3-residues.json"))
    assert code == 4 and out.count("GRC fails") == 2
    code, out = run("grc", fx("g3.graph"), "--level", -1, "--residues", fx("g3-residues.json"), "--json")
    assert code == 4 and len(check_schema("residue-report", out)[0]["grc_violations"]) == 2
    code, out = run("grc", fx("g1p.graph"), "--level", -1, "--residues", "zeros")
    assert code == 0 and "pass" in out


def test_grc_errors(tmp_path, capsys):
    code, _ = run("grc", fx("g2.graph"), "--level", -1, "--residues", "zeros")
    assert code == 3
    code, out = run("grc", fx("g2.graph"), "--level", -1, "--residues", "zeros", "--json")
    assert code == 3 and check_schema("residue-report", out)[0]["error"] == "LongEdgeCrossing"
    code, _ = run("grc", fx("g2.graph"), "--level", -1, "--residues", "zeros", "--modify")
    assert code == 0
    partial = tmp_path / "r.json"
    partial.write_text('{"edges": {"r1": 1}}')
    code, _ = run("grc", fx("g3.graph"), "--level", -1, "--residues", partial)
    assert code == 4 and "r2" in capsys.readouterr().err
    broken = tmp_path / "bad.json"
    broken.write_text('{"edges": {"r1": 0.5}}')
    code, _ = run("grc", fx("g3.graph"), "--level", -1, "--residues", broken)
    assert code == 2
    code, _ = run("grc", fx("pole-above.graph"), "--level", -1, "--solve")
    assert code == 4


def test_testconfig(tmp_path):
    code, out = run("testconfig", "--mu", "1,3")
    t = formats.parse(out)
    assert code == 0 and sorted((e.slope, e.length) for e in t.edges) == [(2, 2), (4, 1)] and t.ell(-1) == 4
    code, out = run("testconfig", "--mu", "0,0", "--json")
    g = formats.graph_from_dict(check_schema("graph", out)[0])
    assert code == 0 and g.ell(-1) == 1
    code, _ = run("testconfig", "--mu", "1,2")
    assert code == 1
    target = tmp_path / "t.graph"
    assert run("testconfig", "--mu", "2", "--out", target)[0] == 0 and formats.parse(target.read_text()).ell(-1) == 3


def test_export():
    g1 = load("g1.graph")
    assert run("export", fx("g1.graph"), "--dot") == (0, formats.to_dot(g1))
    assert run("export", fx("g1.graph"), "--json") == (0, formats.to_json(g1))
    assert run("export", fx("g1.graph"), "--text") == (0, formats.to_text(g1))
    code, out = run("export", fx("g1p.graph"), "--dot", "--twist-level", -1)
    assert "c=2" in out
    check_schema("graph", run("export", fx("g1.graph"), "--json")[1])


def test_enumerate(g1):
    code, out = run("enumerate", "--count", "--max-genus", 2)
    assert code == 0 and int(out) >= 1
    code, out = run("enumerate", "--json", "--max-genus", 2)
    docs = [json.loads(line) for line in out.splitlines()]
    for doc in docs:
        jsonschema.validate(doc, schemas.load("graph"))
    assert len(docs) == int(run("enumerate", "--count", "--max-genus", 2)[1])
    assert canonical_form(g1) in [canonical_form(formats.graph_from_dict(d)) for d in docs]


def test_parse_error_json(tmp_path):
    bad = tmp_path / "bad.graph"
    bad.write_text("graph { vertex v0 { genus 2, level 0 } edge e v0 -> vX { slope 1, length 1 } levels {0:0} }")
    code, out = run("validate", bad, "--json")
    doc = check_schema("validation", out)[0]
    assert code == 2 and doc["code"] == "UndeclaredVertex" and doc["line"] == 1


def test_out_with_batch(capsys):
    code, _ = run("modify", fx("g1.graph"), fx("g2.graph"), "--level", -1, "--out", "x")
    assert code == 2


def test_colour(monkeypatch):
    monkeypatch.setenv("LEVELCONTRACT_COLOR", "1")
    assert "\x1b[32m" in run("validate", fx("g1.graph"))[1]
    monkeypatch.setenv("LEVELCONTRACT_COLOR", "0")
    assert "\x1b[" not in run("validate", fx("g1.graph"))[1]


@pytest.mark.parametrize(
    "argv",
    [
        ["validate", "g1.graph", "--json"],
        ["modify", "g2.graph", "--level", "-1"],
        ["contract", "g2.graph", "--level", "-1", "--modify", "--json"],
        ["grc", "g3.graph", "--level", "-1", "--solve"],
        ["export", "g2.graph", "--dot"],
    ],
)
def test_deterministic_subprocess(argv):
    cmd = [sys.executable, "-m", "levelcontract", *argv]
    a = subprocess.run(cmd, cwd=FIXTURES, capture_output=True)
    b = subprocess.run(cmd, cwd=FIXTURES, capture_output=True)
    assert a.returncode == b.returncode == 0 and a.stdout == b.stdout and a.stdout
