import pytest

from core.errors import InvalidStructureError
from services.clique_service import count_cliques
from tools import constructions as cons
from tools import formulas as fm


def test_binom_is_zero_outside_range():
    assert fm.binom(3, 5) == 0
    assert fm.binom(5, -1) == 0
    assert fm.binom(6, 3) == 20


@pytest.mark.parametrize(
    "n, k, exclplus, expected",
    [(6, 3, 0, 22), (4, 2, 0, 5), (5, 2, 4, 10)],
)
def test_trivial_lower_bound(n, k, exclplus, expected):
    assert fm.trivial_lower_bound(n, k, exclplus).value == expected


def test_trivial_lower_bound_terms_sum_to_value():
    v = fm.trivial_lower_bound(6, 3, 4)
    assert v.terms[0] == ("ex_cl+", 4)
    assert sum(t for _, t in v.terms) == v.value == 26


def test_matching_clique_formula():
    assert fm.matching_clique_formula(5, 2, 2).value == 4
    assert fm.matching_clique_formula(6, 3, 2).value == 10
    assert fm.matching_clique_formula(7, 3, 1).value == 0
    assert fm.matching_clique_formula(7, 3, 1).terms == []


def test_star_clique_count_examples():
    assert fm.star_clique_count(5, 2, 1).value == 4
    assert fm.star_clique_count(6, 3, 1).value == 10
    assert fm.star_clique_count(8, 3, 2).value == fm.matching_clique_formula(8, 3, 3).value


def test_disjoint_gens_formula():
    assert fm.disjoint_gens_formula(6, 3, 2).value == 32
    assert fm.disjoint_gens_formula(10, 2, 3).value == 36


def test_leading_terms():
    assert fm.asymptrivial_leading(20, 3, 3).value == 760
    for n in (6, 9, 14):
        assert fm.asymptrivial_leading(n, 3, 2).value == 2 * fm.binom(n, 2)
        diff = fm.asymptrivial_leading(n, 4, 3).value - fm.cliquelin_leading(n, 4, 3).value
        assert diff == fm.binom(n, 3)
    with pytest.raises(InvalidStructureError):
        fm.asymptrivial_leading(10, 2, 3)


def test_asymptrivial_closed_form_and_range():
    for n in (5, 8, 13):
        for k in (3, 4):
            for t in (2, 3, 4, 5):
                assert fm.asymptrivial_leading(n, k, t).value == 2 ** (t - 1) * fm.binom(n, k - 1)
    with pytest.raises(InvalidStructureError):
        fm.asymptrivial_leading(10, 3, 1)


def test_kmv_ell():
    assert [fm.kmv_ell(t) for t in (4, 5, 7)] == [1, 2, 3]
    with pytest.raises(InvalidStructureError):
        fm.kmv_ell(3)
    assert fm.kmv_peel_bound(10, 3, 5, 4).value == fm.binom(2, 2) * fm.binom(10, 2)


def test_zykov_count_examples():
    assert fm.zykov_count(6, 3, "all").value == 26
    assert fm.zykov_count(7, 3, "geq_2").value == 28
    assert fm.zykov_count(9, 1, "geq_2").value == 0
    assert fm.zykov_count(9, 1, "all").value == 9
    with pytest.raises(InvalidStructureError):
        fm.zykov_count(6, 3, "geq_3")


def test_zykov_matches_turan_graph_cliques():
    for n in range(1, 11):
        for t in range(1, 5):
            g = cons.turan_graph(n, t)
            assert fm.zykov_count(n, t, "all").value == count_cliques(g, 1).total_all
            assert fm.zykov_count(n, t, "geq_2").value == count_cliques(g, 2).total_all


def test_lb_item2_takes_best_layer():
    v = fm.lb_item2(5, {2: 4, 3: 0})
    assert v.value == 16
    assert v.terms[0] == ("ex_cl+_3", 0)
    with pytest.raises(InvalidStructureError):
        fm.lb_item2(5, {})


def _star_grid(max_n, max_k, max_l):
    for k in range(2, max_k + 1):
        for n in range(k, max_n + 1):
            for ell in range(1, min(max_l, n) + 1):
                yield n, k, ell


def test_star_formulas_match_clique_counts():
    for n, k, ell in _star_grid(9, 4, 3):
        counts = count_cliques(cons.star(n, k, ell), k)
        assert fm.star_clique_count(n, k, ell).value == counts.total_geq_k, (n, k, ell)
        for r in range(k, n + 1):
            assert fm.star_complete_count(n, k, ell, r).value == counts.by_order.get(r, 0), (n, k, ell, r)


@pytest.mark.slow
def test_star_formulas_full_grid():
    for n, k, ell in _star_grid(16, 5, 4):
        counts = count_cliques(cons.star(n, k, ell), k)
        assert fm.star_clique_count(n, k, ell).value == counts.total_geq_k, (n, k, ell)


def test_registry_parameter_names():
    fn, params = fm.REGISTRY["zykov_count"]
    assert fn is fm.zykov_count
    assert params == ("n", "t", "mode")
