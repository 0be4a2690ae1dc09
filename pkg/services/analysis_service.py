"""
Project: Turán Workbench - exact simplicial Turán computations at desk scale
File: services/analysis_service.py
Description:
    Structural predicates and procedures on uniform hypergraphs.

    Key Capabilities:
    1. Edge-degenerate orderings: a memoised search over edge subsets, plus the
       independent checker every returned ordering goes through.
    2. l-fullness and the peeling procedure that deletes sparse (k-1)-sets until
       the remainder is l-full, recording destroyed cliques per order.
    3. Intersection profiles and the Ray-Chaudhuri-Wilson edge bound.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations

from core.errors import InvalidStructureError, UnsupportedSizeError
from core.hypergraph import UniformHypergraph
from core.vertex_set import VertexSet, iter_bits, sort_key
from services.clique_service import count_cliques
from tools.formulas import binom

logger = logging.getLogger("AnalysisService")

DEFAULT_ORDERING_MAX_EDGES = 12


# ==========================================
# Edge-degenerate orderings
# ==========================================

def verify_ordering(h: UniformHypergraph, order: list[VertexSet]) -> bool:
    """Each edge meets the union of its predecessors inside a single predecessor."""
    masks = [e.mask if isinstance(e, VertexSet) else e for e in order]
    if sorted(masks) != sorted(h.edges):
        return False
    union = 0
    for i, e in enumerate(masks):
        if i:
            meet = e & union
            if not any(meet & ~f == 0 for f in masks[:i]):
                return False
        union |= e
    return True


def edge_degenerate_ordering(h: UniformHypergraph, max_edges: int = DEFAULT_ORDERING_MAX_EDGES) -> list[VertexSet] | None:
    """
    An edge-degenerate ordering of E(h), or None when none exists. Only the edge set
    matters; isolated vertices play no part.
    """
    edges = sorted(h.edges, key=sort_key)
    m = len(edges)
    if m > max_edges:
        raise UnsupportedSizeError(f"ordering search limited to {max_edges} edges (got {m})")
    if m == 0:
        return []
    full = (1 << m) - 1
    dead: set[int] = set()
    chosen: list[int] = []

    def search(used: int, union: int) -> bool:
        if used == full:
            return True
        if used in dead:
            return False
        for i in range(m):
            if used >> i & 1:
                continue
            e = edges[i]
            meet = e & union
            if used and not any(meet & ~edges[j] == 0 for j in iter_bits(used)):
                continue
            chosen.append(i)
            if search(used | (1 << i), union | e):
                return True
            chosen.pop()
        dead.add(used)
        return False

    if not search(0, 0):
        return None
    order = [VertexSet(edges[i]) for i in chosen]
    if not verify_ordering(h, order):
        raise InvalidStructureError("ordering search produced an invalid ordering")
    return order


# ==========================================
# Fullness and peeling
# ==========================================

def codegrees(g: UniformHypergraph) -> dict[int, int]:
    """(k-1)-set mask -> number of edges containing it (sets of degree 0 omitted)."""
    deg: dict[int, int] = {}
    for e in g.edges:
        for v in iter_bits(e):
            s = e & ~(1 << v)
            deg[s] = deg.get(s, 0) + 1
    return deg


def is_l_full(g: UniformHypergraph, ell: int) -> bool:
    if ell < 1:
        raise InvalidStructureError("l must be >= 1")
    return all(d >= ell for d in codegrees(g).values())


@dataclass(frozen=True)
class PeelStep:
    deleted: VertexSet
    edges_removed: int
    destroyed: dict[int, int]


@dataclass
class PeelReport:
    """
    Outcome of peeling. `bound` is C(l-1, r-k+1), the most r-cliques a single
    step can destroy when r >= k.
    """

    remaining: UniformHypergraph
    ell: int
    clique_order: int
    iterations: list[PeelStep] = field(default_factory=list)
    total_destroyed_geq_k: int = 0

    @property
    def bound(self) -> int:
        return binom(self.ell - 1, self.clique_order - self.remaining.k + 1)

    def violations(self) -> list[int]:
        """Indices of steps destroying more r-cliques than the bound allows (r >= k only)."""
        if self.clique_order < self.remaining.k:
            return []
        return [i for i, step in enumerate(self.iterations) if step.destroyed.get(self.clique_order, 0) > self.bound]


def peel(g: UniformHypergraph, ell: int, clique_order: int) -> PeelReport:
    """
    Repeatedly take the lexicographically least (k-1)-set lying in 1..l-1 edges and
    delete every edge through it, until the remainder is l-full.
    """
    if ell < 1:
        raise InvalidStructureError("l must be >= 1")
    low = min(clique_order, g.k)
    current = g
    report = PeelReport(remaining=g, ell=ell, clique_order=clique_order)
    before = count_cliques(current, low).by_order
    while True:
        sparse = [s for s, d in codegrees(current).items() if 1 <= d <= ell - 1]
        if not sparse:
            break
        target = min(sparse, key=lambda s: tuple(iter_bits(s)))
        removed = frozenset(e for e in current.edges if e & target == target)
        current = UniformHypergraph(current.n, current.k, current.edges - removed)
        after = count_cliques(current, low).by_order
        destroyed = {r: before.get(r, 0) - after.get(r, 0) for r in before if before.get(r, 0) > after.get(r, 0)}
        report.iterations.append(PeelStep(VertexSet(target), len(removed), destroyed))
        report.total_destroyed_geq_k += sum(c for r, c in destroyed.items() if r >= g.k)
        before = after
    report.remaining = current
    logger.info(f"Peel (l={ell}) finished after {len(report.iterations)} iterations, {len(current.edges)} edges left")
    return report


# ==========================================
# Intersection profiles
# ==========================================

def intersection_profile(edges) -> set[int]:
    masks = [e.mask if isinstance(e, VertexSet) else e for e in edges]
    if len({m.bit_count() for m in masks}) > 1:
        raise InvalidStructureError("intersection profile needs edges of a single size")
    return {(a & b).bit_count() for a, b in combinations(masks, 2)}


@dataclass(frozen=True)
class RWCheck:
    profile: frozenset[int]
    bound: int
    count: int
    holds: bool


def rw_bound_holds(g: UniformHypergraph) -> RWCheck:
    """|E(g)| <= C(n, |L|) for the intersection profile L."""
    profile = frozenset(intersection_profile(g.edges))
    bound = binom(g.n, len(profile))
    count = len(g.edges)
    if count > bound:
        logger.error(f"Ray-Chaudhuri-Wilson bound violated: {count} > {bound} (L={sorted(profile)})")
    return RWCheck(profile, bound, count, count <= bound)


class AnalysisService:
    """
    Analysis entry points bound to the configured ordering limit.

    Args:
        ordering_max_edges: Largest edge count the ordering search accepts.
    """

    def __init__(self, ordering_max_edges=DEFAULT_ORDERING_MAX_EDGES):
        self.ordering_max_edges = int(ordering_max_edges)

    def degenerate(self, h: UniformHypergraph) -> list[VertexSet] | None:
        order = edge_degenerate_ordering(h, self.ordering_max_edges)
        logger.info(f"Edge-degenerate ordering: {'found' if order is not None else 'none'}")
        return order

    def full(self, g: UniformHypergraph, ell: int) -> bool:
        return is_l_full(g, ell)

    def peel(self, g: UniformHypergraph, ell: int, clique_order: int) -> PeelReport:
        return peel(g, ell, clique_order)

    def profile(self, g: UniformHypergraph) -> RWCheck:
        return rw_bound_holds(g)
