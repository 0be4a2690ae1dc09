from itertools import combinations

import networkx as nx
import pytest

from core.canonical import isomorphic
from core.errors import InvalidStructureError, UnknownPatternError
from core.hypergraph import Complex, UniformHypergraph, downward_closure, layer
from services.containment_service import contains_complex, contains_uniform
from tools import constructions as cons


def test_uniform_families():
    assert len(cons.complete(3, 4)) == 4
    assert cons.matching(3, 2).edge_list() == [(0, 1, 2), (3, 4, 5)]
    assert cons.tight_path(3, 3).edge_list() == [(0, 1, 2), (1, 2, 3), (2, 3, 4)]
    assert cons.linear_path(3, 2).edge_list() == [(0, 1, 2), (2, 3, 4)]
    assert len(cons.star(6, 3, 1)) == 10
    assert len(cons.star(6, 3, 2)) == 16
    with pytest.raises(InvalidStructureError):
        cons.complete(3, 2)
    with pytest.raises(InvalidStructureError):
        cons.linear_cycle(3, 2)


def test_linear_cycle_wraps_and_is_linear():
    c = cons.linear_cycle(3, 4)
    assert c.n == 8
    assert c.edge_list() == [(0, 1, 2), (0, 6, 7), (2, 3, 4), (4, 5, 6)]
    for a, b in combinations(c.sorted_masks(), 2):
        assert (a & b).bit_count() <= 1


def test_turan_graph_and_blow_up():
    assert cons.turan_parts(7, 3) == [3, 2, 2]
    assert len(cons.turan_graph(5, 3)) == 8
    k33 = cons.blow_up(cons.complete(2, 2), 3)
    assert k33.n == 6 and len(k33) == 9
    assert isomorphic(cons.build("K222"), cons.blow_up(cons.complete(3, 3), 2))
    assert len(cons.build("K222")) == 8


def test_case_iv_and_f1_generators():
    assert cons.case_iv(3).gens.edge_list() == [(0, 3), (1, 3), (0, 1, 2)]
    assert cons.case_iv(4).gens.edge_list() == [(0, 4, 5), (1, 4, 5), (0, 1, 2, 3)]
    assert cons.f1().gens.edge_list() == [(2, 3), (2, 4), (0, 1, 2), (0, 3, 4)]
    with pytest.raises(InvalidStructureError):
        cons.case_iv(2)


def test_crossing_graph_labelings():
    assert cons.crossing_graph("C6") == [(0, 3), (0, 5), (1, 3), (1, 4), (2, 4), (2, 5)]
    assert cons.crossing_graph("K2") == [(0, 3)]
    assert cons.crossing_graph("2K2") == [(0, 3), (1, 4)]
    assert cons.crossing_graph("P3") == [(0, 3), (0, 4), (1, 3)]
    assert cons.crossing_graph("P2+P1") == cons.crossing_graph("P2uP1")
    with pytest.raises(UnknownPatternError):
        cons.crossing_graph("K5")


def test_f_table():
    f4 = cons.F_TABLE["F4"]()
    assert f4 == cons.m32_plus("C6")
    assert len(layer(f4, 2)) == 12
    assert len(layer(f4, 3)) == 2
    assert cons.F_TABLE["F2"]() == cons.build("M32Plus(K13)")


def test_jump_family():
    j = cons.jump(4, 3)
    assert j.gens.edge_list() == [(0, 1, 2, 3), (0, 1, 4, 5), (1, 2, 3, 4), (2, 3, 4, 5)]
    assert cons.jump_base(4, 3) == downward_closure(cons.tight_path(4, 3))
    with pytest.raises(InvalidStructureError):
        cons.jump(3, 3)


def test_disjoint_clique_plus_edge():
    c = cons.disjoint_clique_plus_edge(3, 2, 7)
    assert c.n == 7
    assert c.gens.edge_list() == [(0, 1), (0, 2), (1, 2), (3, 4, 5)]
    with pytest.raises(InvalidStructureError):
        cons.disjoint_clique_plus_edge(3, 4, 7)


def test_greedy_graph_small_case():
    g = cons.greedy_c4_free_graph(5)
    assert g.edge_list() == [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4)]


def test_greedy_graph_has_no_four_cycle():
    g = cons.greedy_c4_free_graph(12)
    graph = nx.Graph(g.edge_list())
    for u, v in combinations(graph.nodes, 2):
        assert len(list(nx.common_neighbors(graph, u, v))) <= 1
    assert contains_uniform(g, cons.linear_cycle(2, 4)) is None


def test_f4_construction():
    c = cons.f4_lower_bound_construction(5, 2)
    assert c.n == 7
    assert len(layer(c, 3)) == 12
    assert contains_complex(cons.f4_lower_bound_construction(4, 3), cons.F_TABLE["F4"]()) is None


def test_pattern_name_parsing():
    name = cons.parse_pattern_name("BlowUp(Complete(3,3),2)")
    assert name == cons.PatternName("BlowUp", (cons.PatternName("Complete", (3, 3)), 2))
    assert str(name) == "BlowUp(Complete(3,3),2)"
    assert cons.parse_pattern_name("M32Plus(P2+P1)").args == ("P2+P1",)
    assert cons.build("M32Plus(P2+P1)") == cons.m32_plus("P2uP1")


def test_build_errors():
    with pytest.raises(UnknownPatternError):
        cons.build("Frobnicate(3)")
    with pytest.raises(UnknownPatternError):
        cons.build("Complete(3)")


def test_named_complex_closes_uniform_names():
    assert cons.build_complex("Complete(2,3)") == downward_closure(cons.complete(2, 3))
    assert isinstance(cons.named_complex("Matching(3,2)"), Complex)
    assert isinstance(cons.named_complex("BaberTalbotH"), UniformHypergraph)
