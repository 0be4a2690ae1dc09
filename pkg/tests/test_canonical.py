import random

import pytest

import core.canonical as canonical
from core.canonical import (
    automorphism_count,
    canonical_form,
    instance_hash,
    isomorphic,
    isomorphic_bruteforce,
    relabel,
)
from core.errors import UnsupportedSizeError
from core.hypergraph import UniformHypergraph, downward_closure
from tools import constructions as cons


def _shuffled(obj, seed):
    perm = list(range(obj.n))
    random.Random(seed).shuffle(perm)
    return relabel(obj, perm)


@pytest.mark.parametrize("name", ["LinearPath(3,2)", "TightPath(3,3)", "Star(5,2,1)", "LinearCycle(3,4)", "BaberTalbotH"])
def test_canonical_form_is_relabeling_invariant(name):
    h = cons.build(name)
    for seed in range(5):
        assert canonical_form(_shuffled(h, seed)) == canonical_form(h)


def test_complex_canonical_form_is_relabeling_invariant():
    c = cons.f1()
    assert canonical_form(_shuffled(c, 3)) == canonical_form(c)


def test_non_isomorphic_structures_differ():
    assert not isomorphic(cons.linear_path(3, 2), cons.tight_path(3, 2).with_ground(5))
    assert not isomorphic(cons.m32_plus("C4"), cons.m32_plus("2K2"))
    assert canonical_form(cons.matching(2, 2)) != canonical_form(cons.linear_path(2, 2).with_ground(4))


def test_canonical_agrees_with_bruteforce_on_random_graphs():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randint(3, 6)
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        a = UniformHypergraph.from_edges(n, 2, rng.sample(pairs, rng.randint(0, len(pairs))))
        b = UniformHypergraph.from_edges(n, 2, rng.sample(pairs, len(a.edges)))
        assert isomorphic(a, b) == isomorphic_bruteforce(a, b)


def test_empty_hypergraph_encoding():
    assert canonical_form(UniformHypergraph(4, 3)).encoding == b"U4.3|"


def test_size_limit(monkeypatch):
    monkeypatch.setattr(canonical, "canonical_max_n", 5)
    with pytest.raises(UnsupportedSizeError):
        canonical_form(cons.matching(2, 3))
    assert canonical_form(cons.matching(2, 3), limit=6).hexdigest()


def test_automorphism_counts():
    assert automorphism_count(cons.complete(2, 3)) == 6
    assert automorphism_count(cons.matching(2, 2)) == 8
    assert automorphism_count(cons.linear_path(2, 2)) == 2
    assert automorphism_count(downward_closure(cons.complete(2, 4))) == 24


def test_instance_hash_depends_on_structure_not_labels():
    a = cons.linear_path(3, 2)
    assert instance_hash(a, 5) == instance_hash(_shuffled(a, 1), 5)
    assert instance_hash(a, 5) != instance_hash(a, 6)
