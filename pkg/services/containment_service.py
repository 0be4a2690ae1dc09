"""
Project: Turán Workbench - exact simplicial Turán computations at desk scale
File: services/containment_service.py
Description:
    Decides whether a host contains a copy of a pattern.

    Key Capabilities:
    1. contains_complex: injective maps sending every maximal pattern edge to a
       host edge. Hosts are downward closed, so partial images are checked too.
    2. contains_uniform: sub-hypergraph copies between k-graphs.
    3. AnchoredPattern: the incremental form used by the search layer, which only
       looks for copies through a newly added edge.
    4. Berge copies: the bipartite matching test, containment through the closure,
       and an independent direct search used for cross-validation.
    5. in_forbidden_family: membership of a k-graph in the family H_F.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Iterable, Sequence

import networkx as nx

from core.embedding import EmbeddingSearch, order_pattern_vertices
from core.errors import InvalidStructureError, UnsupportedSizeError
from core.hypergraph import Complex, UniformHypergraph, downward_closure
from core.vertex_set import VertexSet, iter_bits, sort_key

logger = logging.getLogger("ContainmentService")

DEFAULT_MAX_PATTERN = 12
DEFAULT_BERGE_MAX_EDGES = 8


@dataclass(frozen=True)
class Embedding:
    """Injective map pattern vertex -> host vertex."""

    map: dict[int, int]

    def image(self, mask: int) -> int:
        out = 0
        for v in iter_bits(mask):
            out |= 1 << self.map[v]
        return out

    def __str__(self) -> str:
        return " ".join(f"{v}->{self.map[v]}" for v in sorted(self.map))


def _deadline(time_limit: float | None) -> float | None:
    return time.monotonic() + time_limit if time_limit else None


def _support(masks: Iterable[int]) -> int:
    acc = 0
    for m in masks:
        acc |= m
    return acc


# ==========================================
# Complexes
# ==========================================

def _largest_edge_through(n: int, gens: Iterable[int]) -> list[int]:
    best = [1] * n
    for g in gens:
        size = g.bit_count()
        for v in iter_bits(g):
            if size > best[v]:
                best[v] = size
    return best


def check_embedding(host: Complex, pattern: Complex, embedding: Embedding) -> bool:
    """Edge-by-edge verification of a witness."""
    images = list(embedding.map.values())
    if len(set(images)) != len(images) or any(not 0 <= h < host.n for h in images):
        return False
    if set(embedding.map) != set(range(pattern.n)):
        return False
    return all(host.has_edge(embedding.image(g)) for g in pattern.generator_masks)


def contains_complex(
    host: Complex,
    pattern: Complex,
    *,
    time_limit: float | None = None,
    deadline: float | None = None,
    max_pattern: int = DEFAULT_MAX_PATTERN,
) -> Embedding | None:
    """
    Find an injective phi with phi(e) an edge of `host` for every maximal edge e of
    `pattern`. Pattern vertices that only carry their singleton are placed on
    unused host vertices at the end.

    Raises:
        UnsupportedSizeError: pattern above `max_pattern` vertices.
        BudgetExhausted: the deadline passed first.
    """
    if pattern.n > max_pattern:
        raise UnsupportedSizeError(f"containment limited to patterns on <= {max_pattern} vertices")
    if pattern.n > host.n:
        return None
    gens = sorted(pattern.generator_masks, key=sort_key)
    need = _largest_edge_through(pattern.n, gens)
    have = _largest_edge_through(host.n, host.generator_masks)
    allowed = {}
    for v in iter_bits(_support(gens)):
        allowed[v] = sum(1 << h for h in range(host.n) if have[h] >= need[v])
    search = EmbeddingSearch(
        gens,
        host.n,
        host.has_edge,
        downward_closed=True,
        allowed=allowed,
        deadline=deadline if deadline is not None else _deadline(time_limit),
    )
    found = search.find()
    if found is None:
        return None
    used = set(found.values())
    spare = (h for h in range(host.n) if h not in used)
    for v in range(pattern.n):
        if v not in found:
            found[v] = next(spare)
    return Embedding(found)


def in_forbidden_family(g: UniformHypergraph, pattern: Complex, **kwargs) -> bool:
    """True iff D(g) contains `pattern`, i.e. g lies in H_F."""
    if g.k != pattern.dimension + 1:
        raise InvalidStructureError(
            f"uniformity {g.k} does not match pattern dimension {pattern.dimension}"
        )
    return contains_complex(downward_closure(g), pattern, **kwargs) is not None


# ==========================================
# Uniform hypergraphs
# ==========================================

def degree_filter(pattern: UniformHypergraph, host_degrees: Sequence[int]) -> dict[int, int]:
    allowed = {}
    for v in iter_bits(pattern.support):
        need = pattern.degrees[v]
        allowed[v] = sum(1 << h for h, d in enumerate(host_degrees) if d >= need)
    return allowed


def contains_uniform(
    host: UniformHypergraph,
    pattern: UniformHypergraph,
    *,
    anchor: VertexSet | int | None = None,
    time_limit: float | None = None,
    max_pattern: int = DEFAULT_MAX_PATTERN,
) -> Embedding | None:
    """
    Sub-hypergraph containment on the pattern's non-isolated vertices. With `anchor`
    (a host edge) only copies using that edge are searched.
    """
    if host.k != pattern.k:
        raise InvalidStructureError(f"uniformity mismatch: host {host.k}, pattern {pattern.k}")
    if pattern.support.bit_count() > max_pattern:
        raise UnsupportedSizeError(f"containment limited to patterns on <= {max_pattern} vertices")
    if not pattern.edges:
        return Embedding({})
    deadline = _deadline(time_limit)
    if anchor is not None:
        f = anchor.mask if isinstance(anchor, VertexSet) else anchor
        anchored = AnchoredPattern(pattern.edges, exact=True)
        found = anchored.find(host.n, host.edges.__contains__, f, deadline=deadline)
        return Embedding(found) if found is not None else None
    search = EmbeddingSearch(
        pattern.edges,
        host.n,
        host.edges.__contains__,
        downward_closed=False,
        allowed=degree_filter(pattern, host.degrees),
        deadline=deadline,
    )
    found = search.find()
    return Embedding(found) if found is not None else None


class AnchoredPattern:
    """
    A pattern prepared for repeated anchored searches against a changing host.

    Args:
        pattern_edges: Maximal pattern edges (generators or k-edges).
        exact: True for uniform hosts (the anchored edge maps onto the new edge);
               False for complexes (it maps inside the new edge, partial images checked).
    """

    def __init__(self, pattern_edges: Iterable[int], *, exact: bool):
        self.edges = sorted(set(pattern_edges), key=sort_key)
        self.exact = exact
        self.orders = {p: order_pattern_vertices(self.edges, start=list(iter_bits(p))) for p in self.edges}
        self.n_vertices = _support(self.edges).bit_count()

    def _searches(self, n: int, has_edge: Callable[[int], bool], anchor: int, deadline):
        size = anchor.bit_count()
        for p in self.edges:
            if (p.bit_count() != size) if self.exact else (p.bit_count() > size):
                continue
            allowed = {v: anchor for v in iter_bits(p)}
            yield EmbeddingSearch(
                self.edges,
                n,
                has_edge,
                downward_closed=not self.exact,
                allowed=allowed,
                order=self.orders[p],
                deadline=deadline,
            )

    def find(self, n, has_edge, anchor: int, *, deadline: float | None = None) -> dict[int, int] | None:
        if self.n_vertices > n:
            return None
        for search in self._searches(n, has_edge, anchor, deadline):
            found = search.find()
            if found is not None:
                return found
        return None

    def exists(self, n, has_edge, anchor: int, *, deadline: float | None = None) -> bool:
        return self.find(n, has_edge, anchor, deadline=deadline) is not None

    def count(self, n, has_edge, anchor: int, *, deadline: float | None = None) -> int:
        """Embeddings sending some pattern edge exactly onto `anchor` (uniform hosts only)."""
        if not self.exact:
            raise InvalidStructureError("anchored counting is defined for uniform hosts only")
        if self.n_vertices > n:
            return 0
        return sum(search.count() for search in self._searches(n, has_edge, anchor, deadline))


# ==========================================
# Berge copies
# ==========================================

def _edge_masks(big) -> list[int]:
    if isinstance(big, UniformHypergraph):
        return sorted(big.edges, key=sort_key)
    out = []
    for e in big:
        if isinstance(e, VertexSet):
            out.append(e.mask)
        elif isinstance(e, int):
            out.append(e)
        else:
            out.append(sum(1 << v for v in e))
    return out


def _perfect_matching(pattern_edges: Sequence[int], host_edges: Sequence[int]) -> bool:
    """Distinct host edges f(e) with e subset of f(e) for every pattern edge e."""
    graph = nx.Graph()
    left = [("p", i) for i in range(len(pattern_edges))]
    graph.add_nodes_from(left)
    graph.add_nodes_from(("h", j) for j in range(len(host_edges)))
    for i, e in enumerate(pattern_edges):
        for j, f in enumerate(host_edges):
            if e & ~f == 0:
                graph.add_edge(("p", i), ("h", j))
    for node in left:
        if graph.degree(node) == 0:
            return False
    matching = nx.bipartite.hopcroft_karp_matching(graph, top_nodes=left)
    return sum(1 for node in left if node in matching) == len(left)


def is_berge_copy(
    big,
    pattern: UniformHypergraph,
    *,
    identify_vertices: bool = False,
    max_edges: int = DEFAULT_BERGE_MAX_EDGES,
) -> bool:
    """
    True iff there is a bijection f: E(pattern) -> E(big) with e subset of f(e).

    With `identify_vertices` the pattern may first be relabeled by any injective
    map into the vertices of `big`.
    """
    host_edges = _edge_masks(big)
    pattern_edges = sorted(pattern.edges, key=sort_key)
    if len(pattern_edges) > max_edges:
        raise UnsupportedSizeError(f"Berge check limited to patterns with <= {max_edges} edges")
    if len(host_edges) != len(pattern_edges) or len(set(host_edges)) != len(host_edges):
        return False
    if not identify_vertices:
        return _perfect_matching(pattern_edges, host_edges)
    p_vertices = list(iter_bits(_support(pattern_edges)))
    h_vertices = list(iter_bits(_support(host_edges)))
    for image in permutations(h_vertices, len(p_vertices)):
        moved = []
        for e in pattern_edges:
            m = 0
            for v in iter_bits(e):
                m |= 1 << image[p_vertices.index(v)]
            moved.append(m)
        if _perfect_matching(moved, host_edges):
            return True
    return False


def berge_contains(host: Complex, pattern: UniformHypergraph, **kwargs) -> bool:
    """Berge containment through the closure: host contains D(pattern)."""
    return contains_complex(host, downward_closure(pattern), **kwargs) is not None


def berge_contains_direct(host: Complex, pattern: UniformHypergraph, *, max_pattern: int = DEFAULT_MAX_PATTERN) -> bool:
    """
    Independent Berge search: injective vertex maps whose edge images fit inside
    host edges, followed by a matching onto distinct host edges of size >= k.
    """
    if pattern.n > host.n:
        return False
    if pattern.support.bit_count() > max_pattern:
        raise UnsupportedSizeError(f"containment limited to patterns on <= {max_pattern} vertices")
    pattern_edges = sorted(pattern.edges, key=sort_key)
    if not pattern_edges:
        return True
    host_edges = sorted(
        (e for e in host.edges if e.bit_count() >= pattern.k),
        key=sort_key,
    )
    gens = list(host.generator_masks)
    vertices = list(iter_bits(pattern.support))
    order = {v: i for i, v in enumerate(vertices)}
    images = [0] * len(vertices)

    def inside_some_edge(mask: int) -> bool:
        return mask.bit_count() <= 1 or any(mask & ~g == 0 for g in gens)

    def extend(i: int, used: int) -> bool:
        if i == len(vertices):
            moved = []
            for e in pattern_edges:
                m = 0
                for v in iter_bits(e):
                    m |= images[order[v]]
                moved.append(m)
            return _perfect_matching(moved, host_edges)
        for h in range(host.n):
            bit = 1 << h
            if used & bit:
                continue
            images[i] = bit
            ok = True
            for e in pattern_edges:
                if not e >> vertices[i] & 1:
                    continue
                placed = [v for v in iter_bits(e) if order[v] <= i]
                m = 0
                for v in placed:
                    m |= images[order[v]]
                if not inside_some_edge(m):
                    ok = False
                    break
            if ok and extend(i + 1, used | bit):
                return True
        return False

    return extend(0, 0)


class ContainmentService:
    """
    Containment entry points bound to the configured limits and time budget.

    Args:
        max_pattern: Largest pattern (in vertices) a search accepts.
        berge_max_edges: Largest pattern (in edges) for Berge checks.
        time_limit: Seconds per containment query; 0 disables the deadline.
    """

    def __init__(self, max_pattern=DEFAULT_MAX_PATTERN, berge_max_edges=DEFAULT_BERGE_MAX_EDGES, time_limit=0):
        self.max_pattern = int(max_pattern)
        self.berge_max_edges = int(berge_max_edges)
        self.time_limit = float(time_limit) or None

    def contains(self, host, pattern) -> Embedding | None:
        if isinstance(host, UniformHypergraph) and isinstance(pattern, UniformHypergraph):
            result = contains_uniform(host, pattern, time_limit=self.time_limit, max_pattern=self.max_pattern)
        else:
            if isinstance(host, UniformHypergraph):
                host = downward_closure(host)
            if isinstance(pattern, UniformHypergraph):
                pattern = downward_closure(pattern)
            result = contains_complex(host, pattern, time_limit=self.time_limit, max_pattern=self.max_pattern)
        logger.info(f"Containment query on host n={host.n}: {'found' if result is not None else 'none'}")
        return result

    def berge(self, host: Complex, pattern: UniformHypergraph) -> tuple[bool, bool]:
        """Both Berge implementations, for the cross-check."""
        if len(pattern.edges) > self.berge_max_edges:
            raise UnsupportedSizeError(f"Berge check limited to patterns with <= {self.berge_max_edges} edges")
        via_closure = berge_contains(host, pattern, time_limit=self.time_limit, max_pattern=self.max_pattern)
        direct = berge_contains_direct(host, pattern, max_pattern=self.max_pattern)
        return via_closure, direct
