import json

import pytest

from homres import serialize
from homres.cli import main
from homres.serialize import WorkspaceError, dumps, load_default, parse


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_bundled_workspace_round_trips_byte_for_byte():
    text = serialize.default_workspace_path().read_text(encoding="utf-8")
    assert dumps(parse(text)) == text


def test_round_trip_after_reordering_keys():
    text = serialize.default_workspace_path().read_text(encoding="utf-8")
    shuffled = json.dumps(json.loads(text), indent=4, sort_keys=False)
    assert dumps(parse(shuffled)) == text


def test_adhoc_subcategories_are_not_serialized():
    ws = load_default()
    before = dumps(ws)
    ws.subcategory("add(K1,K1REG1)")
    assert dumps(ws) == before


def test_unknown_names_raise():
    ws = load_default()
    with pytest.raises(WorkspaceError):
        ws.module("NOPE")
    with pytest.raises(WorkspaceError):
        ws.subcategory("add(NOPE)")


def test_validate_bundled_workspace(capsys):
    code, out = run(capsys, "validate")
    assert code == 0
    assert json.loads(out)["status"] == "pass"


def test_validate_truncated_file(tmp_path, capsys):
    p = tmp_path / "w.json"
    p.write_text(serialize.default_workspace_path().read_text()[:200])
    code, _ = run(capsys, "validate", str(p))
    assert code == 2


def test_validate_non_associative_algebra(tmp_path, capsys):
    # basis 1, x, y with xx = y, xy = 0, yx = x, yy = 0: (xx)x = x but x(xx) = 0
    mult = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for i in range(3):
        mult[0][i][i] = mult[i][0][i] = 1
    mult[1][1][2] = 1
    mult[2][1][1] = 1
    data = {"algebras": {"BAD": {"p": 2, "mult": mult, "unit": [1, 0, 0], "basis": ["1", "x", "y"]}},
            "modules": {}, "morphisms": {}, "subcategories": {}, "sequences": {}}
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(data))
    code, out = run(capsys, "validate", str(p))
    assert code == 1
    assert "(x, x, x)" in out


def test_compute_ext(capsys):
    code, out = run(capsys, "compute", "ext", "K1", "K1", "--upto", "3")
    assert code == 0
    assert json.loads(out)["result"]["dims"] == [1, 1, 1, 1]


def test_compute_membership_exit_codes(capsys):
    code, _ = run(capsys, "compute", "membership", "add(REG1)", "K1")
    assert code == 0
    code, _ = run(capsys, "compute", "membership", "add(REG1)", "K1", "--expect", "pass")
    assert code == 1
    code, _ = run(capsys, "compute", "membership", "add(REG1)", "K1", "--expect", "fail")
    assert code == 0


def test_unknown_module_is_malformed(capsys):
    code, _ = run(capsys, "compute", "hom", "K1", "NOPE")
    assert code == 2


def test_report_text(capsys):
    code, out = run(capsys, "report", "K1", "add(REG1)", "--bound", "5")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "C-dim of K1 in add(REG1)"
    assert "  upper: unknown beyond 5" in lines


def test_report_json_is_canonical(capsys):
    code, out = run(capsys, "report", "SA", "add(REGA2)", "--kind", "all", "--json")
    assert code == 0
    data = json.loads(out)
    assert [r["kind"] for r in data["reports"]] == ["C-dim", "C-codim", "G-dim", "G-codim"]
    assert out == serialize.dump_json(data)


def test_construct_with_descriptive_alias(capsys):
    args = ["--ses", "ses_K1", "--sub", "add(REG1)", "--res0", "res_REG1", "--res1", "res_K1", "--verify"]
    code, out = run(capsys, "construct", "resolve-left", *args)
    assert code == 0
    data = json.loads(out)
    assert data["construction"] == "3.2" and data["status"] == "pass"


def test_construct_reports_failed_hypothesis(capsys):
    args = ["--ses", "ses_K1", "--sub", "add(K1,REG1)", "--res0", "res_REG1", "--res1", "res_K1",
            "--want", "proper"]
    code, _ = run(capsys, "construct", "resolve-right", *args)
    assert code == 1
    code, _ = run(capsys, "construct", "resolve-right", *args, "--expect", "fail")
    assert code == 0


def test_construct_writes_dot(tmp_path, capsys):
    dot = tmp_path / "d.dot"
    code, _ = run(capsys, "construct", "collapse", "--sub", "add(REG1)", "--window", "outer",
                  "--inner", "W_K1,W_K1K1,W_K1K1,W_K1", "--dot", str(dot))
    assert code == 0
    text = dot.read_text()
    assert text.startswith("digraph")
    assert "rank" in text and "exact" in text


def test_two_runs_give_identical_output(capsys):
    argv = ["construct", "summand", "--sub", "add(REG1)", "--window", "W_K1REG1", "--idempotent", "e_K1"]
    _, first = run(capsys, *argv)
    _, second = run(capsys, *argv)
    assert first == second
    assert json.loads(first)["output"]["pattern"][:3] == [4, 6, 8]
