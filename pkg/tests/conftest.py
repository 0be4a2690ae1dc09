"""Shared fixtures: small named structures and services without a persistent cache."""

import pytest

from core.hypergraph import GeneratingSet, UniformHypergraph, downward_closure
from services.extremal_service import ExtremalService
from tools import constructions as cons


@pytest.fixture
def triangle() -> UniformHypergraph:
    return cons.complete(2, 3)


@pytest.fixture
def k4_3() -> UniformHypergraph:
    return cons.complete(3, 4)


@pytest.fixture
def closed_triangle():
    return downward_closure(cons.complete(2, 3))


@pytest.fixture
def closed_m32():
    return downward_closure(cons.matching(3, 2))


@pytest.fixture
def single_triple():
    return downward_closure(GeneratingSet.from_edges(3, [(0, 1, 2)]))


@pytest.fixture
def extremal() -> ExtremalService:
    return ExtremalService(threads=1, split_depth=4, time_limit=0, cache=None)
