from pathlib import Path

import pytest

from app import load_suites
from core.errors import InvalidStructureError
from services.verify_service import (
    DETERMINISM_INSTANCES,
    DEVIATION,
    FAIL,
    PASS,
    SUITE_DEFAULTS,
    ReportRow,
    SuiteReport,
    VerifyService,
)

KNOWN = {
    "deviations": [
        {"suite": "matchclique", "instance": "n=4 k=2 t=2", "expected": 3, "observed": 4, "witness": "Complete(2,3)", "note": "triangle wins at n=4"},
        {"suite": "degenerate", "instance": "Star(4,3,1)", "expected": "ordering", "observed": "none", "note": "covered union"},
    ]
}


@pytest.fixture
def verify(extremal) -> VerifyService:
    return VerifyService(extremal, KNOWN)


def test_parameters_merge_defaults_config_and_flags(extremal):
    service = VerifyService(extremal, {"suites": {"stars": {"max_k": 3}}})
    params = service.parameters("stars", {"max_n": 8, "max_l": None})
    assert params == {"max_n": 8, "max_k": 3, "max_l": 4}


def test_unknown_suite(verify):
    with pytest.raises(InvalidStructureError):
        verify.run("nonsense")


def test_stars_suite_passes(verify):
    report = verify.run("stars", {"max_n": 8, "max_k": 3, "max_l": 2})
    assert report.rows
    assert report.count(PASS) == len(report.rows)
    assert report.exit_code == 0


def test_matchclique_records_the_small_n_deviation(verify):
    report = verify.run("matchclique", {"n_min": 4, "n_max": 5, "extra": []})
    first, witness, second = report.rows
    assert (first.instance, first.expected, first.actual, first.status) == ("n=4 k=2 t=2", 3, 4, DEVIATION)
    assert first.note == "triangle wins at n=4"
    assert (witness.instance, witness.status) == ("n=4 k=2 t=2 witness~Complete(2,3)", PASS)
    assert (second.instance, second.status) == ("n=5 k=2 t=2", PASS)
    assert report.exit_code == 0


def test_unlisted_deviation_is_noted(extremal):
    report = VerifyService(extremal).run("matchclique", {"n_min": 4, "n_max": 4, "extra": []})
    assert report.rows[0].status == DEVIATION
    assert report.rows[0].note == "unlisted small-n deviation"


def test_zykov_suite(verify):
    report = verify.run("zykov", {"n": 5, "t": 2})
    assert [r.status for r in report.rows] == [PASS, PASS, PASS]
    assert report.rows[0].expected == 11


def test_degenerate_suite_uses_listed_deviations(verify):
    report = verify.run("degenerate", {"max_k": 3, "max_edges": 3})
    statuses = {r.instance: r.status for r in report.rows}
    assert statuses["Star(4,3,1)"] == DEVIATION
    assert statuses["TightPath(3,3)"] == PASS
    assert statuses["LinearCycle(3,3)"] == PASS
    assert report.exit_code == 0


def test_degenerate_without_listing_fails(extremal):
    report = VerifyService(extremal).run("degenerate", {"max_k": 3, "max_edges": 3})
    assert any(r.instance == "Star(4,3,1)" for r in report.failures)
    assert report.exit_code == 1


def test_berge_suite_agrees(verify):
    report = verify.run("berge", {"cases": 25, "seed": 7, "max_n": 6})
    assert len(report.rows) == 25
    assert not report.failures


def test_peel_suite(verify):
    report = verify.run("peel", {"cases": 12, "max_n": 7})
    assert len(report.rows) == 12
    assert not report.failures


def test_f4_suite(verify):
    report = verify.run("f4", {"n_v": 6, "n_w": 2})
    assert [r.status for r in report.rows] == [PASS, PASS, PASS]


def test_caseiv_suite_never_undercuts_the_trivial_bound(verify):
    report = verify.run("caseiv", {"n_values": [5]})
    value_row, witness_row = report.rows
    assert value_row.expected == 16
    assert value_row.status in (PASS, DEVIATION)
    assert witness_row.status == PASS


def test_sandwich_suite(verify):
    report = verify.run("sandwich", {"max_n": 4})
    # per pattern and n: the bracket row plus one construction row per nonempty layer
    assert len(report.rows) == 16
    assert sum("clique construction" in r.instance for r in report.rows) == 10
    assert not report.failures


def test_determinism_on_the_small_matchclique_instances(verify):
    instances = ["matchclique n=5 k=2 t=2", "matchclique n=6 k=2 t=2", "caseiv CaseIV(3) n=5"]
    report = verify.run("determinism", {"threads": [1, 2, 8], "split_depth": 3, "instances": instances})
    assert [r.instance for r in report.rows] == [f"{label} threads={w}" for label in instances for w in (2, 8)]
    assert not report.failures


def test_determinism_rejects_unknown_instances(verify):
    with pytest.raises(InvalidStructureError):
        verify.run("determinism", {"instances": ["matchclique n=99"]})


def test_determinism_defaults_cover_the_contract_instances():
    labels = set(SUITE_DEFAULTS["determinism"]["instances"])
    assert SUITE_DEFAULTS["determinism"]["threads"] == [1, 2, 8]
    assert labels == {
        "matchclique n=5 k=2 t=2",
        "matchclique n=6 k=2 t=2",
        "matchclique n=6 k=3 t=2",
        "caseiv CaseIV(3) n=6",
        "caseiv CaseIV(3) n=7",
        "zykov n=7 t=3 mode=all",
        "zykov n=7 t=3 mode=geq_2",
    }
    assert labels <= set(DETERMINISM_INSTANCES)


@pytest.mark.slow
def test_determinism_suite(verify):
    report = verify.run("determinism")
    assert len(report.rows) == 2 * len(SUITE_DEFAULTS["determinism"]["instances"])
    assert not report.failures


def test_listed_deviation_with_another_value_fails(extremal):
    wrong = {"deviations": [{"suite": "matchclique", "instance": "n=4 k=2 t=2", "expected": 3, "observed": 5, "note": "x"}]}
    report = VerifyService(extremal, wrong).run("matchclique", {"n_min": 4, "n_max": 4, "extra": []})
    assert report.rows[0].status == FAIL
    assert report.rows[0].note == "listed deviation records 5"
    assert report.exit_code == 1


def test_suites_file_lists_the_two_disjoint_triples_deviation():
    config = load_suites(str(Path(__file__).resolve().parents[1] / "suites.toml"))
    listed = {(d["suite"], d["instance"]): d for d in config["deviations"]}
    entry = listed[("matchclique", "n=6 k=3 t=2")]
    assert (entry["expected"], entry["observed"], entry["witness"]) == (10, 16, "Complete(3,5)")
    assert [3, 2, 6] in config["suites"]["matchclique"]["extra"]


@pytest.mark.slow
def test_two_disjoint_triples_row_records_k5(extremal):
    config = load_suites(str(Path(__file__).resolve().parents[1] / "suites.toml"))
    report = VerifyService(extremal, config).run("matchclique", {"n_min": 1, "n_max": 0})
    value_row, witness_row = report.rows
    assert (value_row.instance, value_row.expected, value_row.actual) == ("n=6 k=3 t=2", 10, 16)
    assert value_row.status == DEVIATION
    assert (witness_row.instance, witness_row.status) == ("n=6 k=3 t=2 witness~Complete(3,5)", PASS)


def test_report_dictionary():
    report = SuiteReport("demo", {"x": 1}, [ReportRow("a", 1, 1, PASS), ReportRow("b", 1, 2, FAIL)])
    data = report.to_dict()
    assert data["summary"] == {PASS: 1, DEVIATION: 0, FAIL: 1}
    assert data["rows"][1]["instance"] == "b"
    assert report.exit_code == 1


def test_suite_names(verify):
    names = verify.suite_names
    assert names[:7] == ["stars", "matchclique", "zykov", "berge", "caseiv", "f4", "peel"]
    assert {"degenerate", "sandwich", "determinism"} <= set(names)
