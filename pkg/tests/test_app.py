import json

import pytest

import app
from services import extremal_service


def run(capsys, *argv):
    code = app.main(list(argv))
    return code, capsys.readouterr().out


def test_construct_prints_generators(capsys):
    code, out = run(capsys, "construct", "CaseIV(3)", "--no-cache")
    assert code == 0
    assert out == "4\n0 3\n1 3\n0 1 2\n"


def test_construct_with_closure_and_out_file(tmp_path, capsys):
    target = tmp_path / "m32.txt"
    code, out = run(capsys, "construct", "Matching(3,2)", "--closure", "--out", str(target), "--no-cache")
    assert code == 0 and out == ""
    assert target.read_text(encoding="utf-8") == "6\n0 1 2\n3 4 5\n"


def test_formula_json(capsys):
    code, out = run(capsys, "formula", "zykov_count", "6", "3", "all", "--format", "json", "--no-cache")
    assert code == 0
    assert json.loads(out)["value"] == 26


def test_formula_keyword_parameters(capsys):
    code, out = run(capsys, "formula", "kmv_ell", "t=7", "--format", "json", "--no-cache")
    assert code == 0
    assert json.loads(out) == {"value": 3}


def test_formula_missing_parameter(capsys):
    code, _ = run(capsys, "formula", "binom", "5", "--no-cache")
    assert code == 2


def test_ex_on_a_named_pattern(capsys):
    code, out = run(capsys, "ex", "Complete(2,3)", "--n", "4", "--no-cache", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["optimum"] == 9
    assert payload["command"] == "ex"


def test_ex_cliques_from_a_file(tmp_path, capsys):
    pattern = tmp_path / "m22.txt"
    pattern.write_text("4 2\n0 1\n2 3\n", encoding="utf-8")
    code, out = run(capsys, "ex-cliques", "--n", "5", "--k", "2", "--forbidden", str(pattern), "--no-cache", "--format", "json")
    assert code == 0
    assert json.loads(out)["optimum"] == 4


def test_ex_copies(capsys):
    code, out = run(
        capsys, "ex-copies", "--n", "5", "--k", "2", "--target", "Complete(2,3)",
        "--forbidden", "Complete(2,4)", "--no-cache", "--format", "csv",
    )
    assert code == 0
    header, row = out.splitlines()
    assert header == "instance_key,command,optimum,status,nodes,seconds"
    assert row.split(",")[2] == "4"


def test_budget_exhaustion_exit_code(monkeypatch, capsys):
    monkeypatch.setattr(extremal_service, "DEADLINE_STRIDE", 1)
    code, out = run(
        capsys, "ex-cliques", "--n", "7", "--k", "3", "--forbidden", "Complete(3,4)",
        "--time-limit", "1e-9", "--threads", "1", "--strategy", "bnb", "--no-cache", "--format", "json",
    )
    assert code == 3
    assert json.loads(out)["status"] == "lower-bound-only"


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "dup.txt"
    bad.write_text("4 3\n0 1 2\n0 1 2\n", encoding="utf-8")
    code, _ = run(capsys, "cliques", str(bad), "--no-cache")
    assert code == 2


def test_unknown_pattern_and_usage_errors(capsys):
    assert run(capsys, "construct", "Nope(1)", "--no-cache")[0] == 2
    assert run(capsys, "ex", "Complete(2,3)", "--no-cache")[0] == 2
    assert run(capsys, "verify", "nonsense", "--no-cache")[0] == 2


def test_cliques_table(capsys):
    code, out = run(capsys, "cliques", "Complete(2,4)", "--min-order", "2", "--no-cache", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["order,count", "2,6", "3,4", "4,1"]


def test_containment_and_berge(capsys):
    code, out = run(capsys, "contains", "Complete(3,4)", "CaseIV(3)", "--no-cache", "--format", "json")
    assert code == 0 and json.loads(out)["contained"] is True
    code, out = run(capsys, "contains", "Matching(3,2)", "Matching(2,2)", "--berge", "--no-cache", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"agree": True, "berge": True, "direct": True}


@pytest.mark.parametrize(
    "argv, key, value",
    [
        (("analyze", "degenerate", "LinearCycle(3,3)"), "edge_degenerate", False),
        (("analyze", "full", "Complete(3,4)", "--l", "2"), "l_full", True),
        (("analyze", "peel", "Star(6,2,1)", "--l", "2"), "iterations", 5),
        (("analyze", "profile", "Matching(3,2)"), "bound", 6),
    ],
)
def test_analyze_modes(capsys, argv, key, value):
    code, out = run(capsys, *argv, "--no-cache", "--format", "json")
    assert code == 0
    assert json.loads(out)[key] == value


def test_closure_counts(capsys):
    code, out = run(capsys, "closure", "Matching(3,2)", "--no-cache", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["total"] == 15
    assert payload["by_size"] == {"0": 1, "1": 6, "2": 6, "3": 2}


def test_verify_with_range(capsys):
    code, out = run(capsys, "verify", "matchclique", "--n-range", "4..5", "--param", "extra=[]", "--no-cache", "--format", "csv")
    assert code == 0
    assert out.splitlines() == [
        "instance,expected,actual,status",
        "n=4 k=2 t=2,3,4,deviation",
        "n=4 k=2 t=2 witness~Complete(2,3),yes,yes,pass",
        "n=5 k=2 t=2,4,4,pass",
    ]


def test_closure_limit_counts_vertices(tmp_path, capsys):
    settings = tmp_path / "settings.ini"
    settings.write_text("[Limits]\nfull_closure_max_n = 5\n", encoding="utf-8")
    # Matching(3,2) has only 3-edges but six vertices.
    code, _ = run(capsys, "closure", "Matching(3,2)", "--settings", str(settings), "--no-cache")
    assert code == 2
    code, out = run(capsys, "closure", "Complete(3,4)", "--settings", str(settings), "--no-cache", "--format", "json")
    assert code == 0
    assert json.loads(out)["n"] == 4


def test_snapshot_dir_receives_the_merged_search(tmp_path, capsys):
    target = tmp_path / "snaps"
    code, _ = run(capsys, "ex", "Complete(2,3)", "--n", "4", "--snapshot-dir", str(target), "--no-cache")
    assert code == 0
    (saved,) = list(target.iterdir())
    snapshot = json.loads(saved.read_text(encoding="utf-8"))
    assert snapshot["command"] == "ex"
    assert snapshot["optimum"] == 9
    assert snapshot["exhausted"] is False
