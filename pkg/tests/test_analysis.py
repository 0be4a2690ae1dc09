import pytest

from core.errors import InvalidStructureError, UnsupportedSizeError
from core.hypergraph import UniformHypergraph
from core.vertex_set import VertexSet
from services.analysis_service import (
    AnalysisService,
    edge_degenerate_ordering,
    intersection_profile,
    is_l_full,
    peel,
    rw_bound_holds,
    verify_ordering,
)
from tools import constructions as cons


def test_tight_path_has_an_ordering():
    g = cons.tight_path(3, 3)
    order = edge_degenerate_ordering(g)
    assert order is not None
    assert verify_ordering(g, order)
    assert verify_ordering(g, [VertexSet.of(0, 1, 2), VertexSet.of(1, 2, 3), VertexSet.of(2, 3, 4)])


def test_matching_accepts_any_ordering():
    g = cons.matching(3, 2)
    assert verify_ordering(g, list(reversed(g.edge_sets())))


def test_linear_triangle_has_no_ordering():
    assert edge_degenerate_ordering(cons.linear_cycle(3, 3)) is None


def test_ordering_rejects_foreign_edges():
    g = cons.tight_path(3, 2)
    assert not verify_ordering(g, [VertexSet.of(0, 1, 2)])


def test_ordering_search_limit():
    with pytest.raises(UnsupportedSizeError):
        AnalysisService(ordering_max_edges=12).degenerate(cons.complete(3, 6))


def test_fullness():
    assert is_l_full(cons.complete(3, 4), 2)
    assert not is_l_full(cons.star(5, 2, 1), 2)
    assert is_l_full(UniformHypergraph(5, 3), 4)
    with pytest.raises(InvalidStructureError):
        is_l_full(cons.complete(3, 4), 0)


def test_peel_star_graph():
    report = peel(cons.star(6, 2, 1), 2, 2)
    assert len(report.iterations) == 5
    assert not report.remaining.edges
    assert report.iterations[0].deleted == VertexSet.of(1)
    assert report.iterations[-1].deleted == VertexSet.of(0)
    assert report.violations() == []


def test_peel_full_graph_is_untouched(k4_3):
    report = peel(k4_3, 2, 3)
    assert report.iterations == []
    assert report.remaining == k4_3
    assert peel(UniformHypergraph(6, 3), 3, 3).iterations == []


def test_peel_destroyed_cliques_respect_the_bound():
    g = cons.star(7, 3, 2).add_edge((3, 4, 5))
    report = peel(g, 3, 4)
    assert report.iterations
    assert report.violations() == []
    assert is_l_full(report.remaining, 3)


def test_intersection_profiles():
    assert intersection_profile(cons.matching(3, 2).edges) == {0}
    assert intersection_profile(cons.tight_path(3, 2).edges) == {2}
    assert intersection_profile(cons.complete(3, 4).edges) == {2}
    with pytest.raises(InvalidStructureError):
        intersection_profile([VertexSet.of(0, 1), VertexSet.of(0, 1, 2)])


def test_rw_bound():
    check = rw_bound_holds(cons.matching(3, 2))
    assert (check.profile, check.bound, check.count, check.holds) == (frozenset({0}), 6, 2, True)
    check = rw_bound_holds(cons.complete(2, 4))
    assert check.profile == frozenset({0, 1}) and check.bound == 6 and check.holds
    check = rw_bound_holds(UniformHypergraph.from_edges(5, 3, [(0, 1, 2)]))
    assert check.bound == 1 and check.count == 1 and check.holds
