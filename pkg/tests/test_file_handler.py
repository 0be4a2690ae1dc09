import csv
import io
import json
import logging

import pytest

from core.errors import ParseError
from services.clique_service import count_cliques
from services.verify_service import PASS, ReportRow, SuiteReport
from tools import constructions as cons
from tools.formulas import zykov_count
from utils.file_handler import FileLoader, emit, parse_complex, parse_uniform, sniff_kind


def test_parse_uniform_path():
    assert parse_uniform("3 2\n0 1\n1 2") == cons.linear_path(2, 2)


def test_comments_and_blank_lines_are_ignored():
    text = "# a path\n3 2\n\n0 1   # first edge\n1 2\n"
    assert parse_uniform(text) == cons.linear_path(2, 2)


@pytest.mark.parametrize(
    "text, line",
    [
        ("4 3\n0 1 2\n0 1 2", 3),
        ("2 3\n0 1 2", 2),
        ("4 3\n0 1", 2),
        ("4 3\n0 1 x", 2),
        ("4 3\n0 0 1", 2),
        ("4", 1),
    ],
)
def test_parse_uniform_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as err:
        parse_uniform(text)
    assert err.value.line == line
    assert str(err.value).startswith(f"line {line}: ")


def test_empty_file_is_an_error():
    with pytest.raises(ParseError):
        parse_uniform("# nothing here\n")


def test_parse_complex_f1():
    assert parse_complex("5\n0 1 2\n0 3 4\n2 3\n2 4") == cons.f1()
    assert parse_complex("3\n0 1 2").gens.edge_list() == [(0, 1, 2)]


def test_non_maximal_edges_are_dropped_with_a_warning(caplog):
    with caplog.at_level(logging.WARNING, logger="FileLoader"):
        c = parse_complex("4\n0 1\n0 1 2")
    assert c.gens.edge_list() == [(0, 1, 2)]
    assert "not an antichain" in caplog.text


def test_complex_rejects_singleton_lines():
    with pytest.raises(ParseError) as err:
        parse_complex("4\n0 1\n2")
    assert err.value.line == 3


def test_sniff_kind():
    assert sniff_kind("# x\n4 3\n0 1 2") == "uniform"
    assert sniff_kind("4\n0 1 2") == "complex"


def test_structures_print_in_their_file_format():
    g = cons.tight_path(3, 3)
    assert emit(g) == "5 3\n0 1 2\n1 2 3\n2 3 4\n"
    assert parse_uniform(emit(g)) == g
    assert parse_complex(emit(cons.case_iv(3))) == cons.case_iv(3)


def test_verify_report_csv_header():
    report = SuiteReport("stars", {}, [ReportRow("Star(5,2,1)", 4, 4, PASS)])
    rows = list(csv.reader(io.StringIO(emit(report, "csv"))))
    assert rows[0] == ["instance", "expected", "actual", "status"]
    assert rows[1] == ["Star(5,2,1)", "4", "4", "pass"]


def test_table_lists_notes():
    report = SuiteReport("matchclique", {}, [ReportRow("n=4 k=2 t=2", 3, 4, "deviation", "small n")])
    text = emit(report, "table")
    assert text.splitlines()[0].split() == ["instance", "expected", "actual", "status"]
    assert "notes:" in text and "small n" in text


def test_json_keys_are_sorted():
    assert emit({"b": 1, "a": 2}, "json") == '{\n  "a": 2,\n  "b": 1\n}\n'


def test_clique_table_has_one_row_per_order(k4_3):
    lines = emit(count_cliques(k4_3, 1)).splitlines()
    assert len(lines) == 2 + 4
    payload = json.loads(emit(count_cliques(k4_3, 1), "json"))
    assert payload["by_order"] == {"1": 4, "2": 6, "3": 4, "4": 1}


def test_formula_value_rows():
    rows = list(csv.reader(io.StringIO(emit(zykov_count(6, 3, "all"), "csv"))))
    assert rows[0] == ["term", "value"]
    assert rows[-1] == ["total", "26"]


def test_search_result_json(extremal, triangle):
    result = extremal.max_cliques_forbidden(5, 2, [triangle])
    payload = json.loads(emit(result, "json"))
    assert payload["optimum"] == 6
    assert payload["command"] == "ex-cliques"
    assert payload["status"] == "exact"
    assert set(payload) == {"instance_key", "command", "parameters", "optimum", "witness", "nodes", "seconds", "status"}


def test_unknown_format():
    with pytest.raises(ValueError):
        emit({"a": 1}, "xml")


def test_file_loader(tmp_path):
    loader = FileLoader()
    with pytest.raises(ParseError):
        loader.load(str(tmp_path / "missing.txt"))
    target = loader.save("3 2\n0 1\n", str(tmp_path / "nested" / "g.txt"))
    assert loader.load_uniform(target).edge_list() == [(0, 1)]
    assert loader.load_any(target) == loader.load_uniform(target)
