"""
Project: Turán Workbench - exact simplicial Turán computations at desk scale
File: core/hypergraph.py
Description:
    Set-system ground types and the closure algebra on them.

    Key Capabilities:
    1. UniformHypergraph: k-uniform edge sets on [n] (layers may have k = 0 or 1).
    2. GeneratingSet: antichain of maximal edges, the compact form of a complex.
    3. Complex: downward-closed family answered from per-size layer caches,
       so large ground sets never materialise their full closure.
    4. Closure algebra: downward_closure, generating_set, layer, dimension, edge_counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

from core.errors import InvalidStructureError, RepresentationError
from core.vertex_set import (
    MAX_VERTICES,
    VertexSet,
    iter_bits,
    mask_of,
    sort_key,
    subsets_of_size,
)


def _check_ground(n: int) -> None:
    if not isinstance(n, int) or n < 0:
        raise InvalidStructureError(f"invalid ground-set size {n!r}")
    if n > MAX_VERTICES:
        raise RepresentationError(f"ground set of size {n} exceeds the {MAX_VERTICES}-vertex width")


def _to_mask(edge, n: int) -> int:
    if isinstance(edge, VertexSet):
        if edge.mask >> n:
            raise InvalidStructureError(f"edge {edge!r} leaves the ground set [0,{n})")
        return edge.mask
    if isinstance(edge, int):
        if edge < 0 or edge >> n:
            raise InvalidStructureError(f"edge mask {edge} leaves the ground set [0,{n})")
        return edge
    ids = list(edge)
    if len(set(ids)) != len(ids):
        raise InvalidStructureError(f"edge {ids} repeats a vertex")
    try:
        return mask_of(ids, n)
    except RepresentationError as e:
        raise InvalidStructureError(str(e)) from e


def is_antichain(masks: Iterable[int]) -> bool:
    items = sorted(set(masks), key=int.bit_count)
    for i, a in enumerate(items):
        for b in items[i + 1:]:
            if a & ~b == 0:
                return False
    return True


def maximal_masks(masks: Iterable[int]) -> list[int]:
    """Inclusion-maximal members of a family, in size-then-lex order."""
    items = sorted(set(masks), key=lambda m: -m.bit_count())
    kept: list[int] = []
    for m in items:
        if not any(m & ~big == 0 for big in kept):
            kept.append(m)
    return sorted(kept, key=sort_key)


# ==========================================
# Uniform hypergraphs
# ==========================================

@dataclass(frozen=True)
class UniformHypergraph:
    """
    A k-uniform hypergraph on [n].

    Args:
        n: Ground-set size (vertices 0..n-1, isolated vertices allowed).
        k: Uniformity. Named constructions use k >= 2; layers of a complex may be 0 or 1.
        edges: Frozen set of edge masks.
    """

    n: int
    k: int
    edges: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        _check_ground(self.n)
        if self.k < 0:
            raise InvalidStructureError(f"invalid uniformity {self.k}")
        for e in self.edges:
            if e >> self.n:
                raise InvalidStructureError(f"edge {VertexSet(e)!r} leaves the ground set [0,{self.n})")
            if e.bit_count() != self.k:
                raise InvalidStructureError(f"edge {VertexSet(e)!r} is not a {self.k}-set")

    @classmethod
    def from_edges(cls, n: int, k: int, edges: Iterable, *, allow_duplicates: bool = False) -> "UniformHypergraph":
        """Build from vertex-id iterables, VertexSets or masks; duplicates raise unless allowed."""
        _check_ground(n)
        masks: list[int] = [_to_mask(e, n) for e in edges]
        if not allow_duplicates and len(set(masks)) != len(masks):
            raise InvalidStructureError("duplicate edge")
        return cls(n, k, frozenset(masks))

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[VertexSet]:
        return iter(self.edge_sets())

    def edge_sets(self) -> list[VertexSet]:
        return [VertexSet(m) for m in self.sorted_masks()]

    def sorted_masks(self) -> list[int]:
        return sorted(self.edges, key=sort_key)

    def edge_list(self) -> list[tuple[int, ...]]:
        return [tuple(iter_bits(m)) for m in self.sorted_masks()]

    def has_edge(self, e) -> bool:
        mask = e.mask if isinstance(e, VertexSet) else e
        return mask in self.edges

    @cached_property
    def support(self) -> int:
        acc = 0
        for e in self.edges:
            acc |= e
        return acc

    def vertices(self) -> VertexSet:
        """Non-isolated vertices."""
        return VertexSet(self.support)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for e in self.edges:
            for v in iter_bits(e):
                deg[v] += 1
        return tuple(deg)

    def degree(self, v: int) -> int:
        return self.degrees[v]

    def add_edge(self, e) -> "UniformHypergraph":
        mask = _to_mask(e, self.n)
        return UniformHypergraph(self.n, self.k, self.edges | {mask})

    def remove_edge(self, e) -> "UniformHypergraph":
        mask = _to_mask(e, self.n)
        return UniformHypergraph(self.n, self.k, self.edges - {mask})

    def with_ground(self, n: int) -> "UniformHypergraph":
        """Same edges on a larger (or equal) ground set."""
        return UniformHypergraph(n, self.k, self.edges)

    def __repr__(self) -> str:
        body = ", ".join(repr(e) for e in self.edge_sets())
        return f"UniformHypergraph(n={self.n}, k={self.k}, edges=[{body}])"


# ==========================================
# Generating sets and complexes
# ==========================================

@dataclass(frozen=True)
class GeneratingSet:
    """
    Antichain of maximal edges on [n]. Members have size >= 2; singletons are implicit.
    """

    n: int
    maximal_edges: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        _check_ground(self.n)
        for e in self.maximal_edges:
            if e >> self.n:
                raise InvalidStructureError(f"edge {VertexSet(e)!r} leaves the ground set [0,{self.n})")
            if e.bit_count() < 2:
                raise InvalidStructureError(f"generating edge {VertexSet(e)!r} has fewer than 2 vertices")
        if not is_antichain(self.maximal_edges):
            raise InvalidStructureError("generating set is not an antichain")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, *, reduce: bool = False) -> "GeneratingSet":
        """
        Build from edge iterables. With `reduce`, non-maximal members and sets of size < 2
        are dropped instead of rejected (the caller decides whether to warn).
        """
        _check_ground(n)
        masks = [_to_mask(e, n) for e in edges]
        if reduce:
            masks = [m for m in maximal_masks(masks) if m.bit_count() >= 2]
        return cls(n, frozenset(masks))

    def sorted_masks(self) -> list[int]:
        return sorted(self.maximal_edges, key=sort_key)

    def edge_list(self) -> list[tuple[int, ...]]:
        return [tuple(iter_bits(m)) for m in self.sorted_masks()]

    def sizes(self) -> list[int]:
        return sorted((m.bit_count() for m in self.maximal_edges), reverse=True)

    def __len__(self) -> int:
        return len(self.maximal_edges)

    def __repr__(self) -> str:
        body = ", ".join(repr(VertexSet(m)) for m in self.sorted_masks())
        return f"GeneratingSet(n={self.n}, [{body}])"


@dataclass(frozen=True)
class EdgeCounts:
    """m_r per size, the total |E| and the suffix sums m_{>=r}."""

    by_size: dict[int, int]
    total: int
    at_least: dict[int, int]


class Complex:
    """
    A simplicial complex on [n]: contains the empty set and every singleton,
    and is closed under taking subsets.

    Stored as its generating set. Membership and layers are answered from
    per-size caches of the subsets of the maximal edges; the full edge family is
    materialised only on request.
    """

    __slots__ = ("n", "gens", "dimension", "_layers")

    def __init__(self, gens: GeneratingSet):
        self.n = gens.n
        self.gens = gens
        self.dimension = max((g.bit_count() for g in gens.maximal_edges), default=1 if gens.n else 0) - 1
        self._layers: dict[int, frozenset[int]] = {}

    @classmethod
    def from_edges(cls, n: int, edges: Iterable) -> "Complex":
        """Build from a full edge family, checking downward closure."""
        _check_ground(n)
        family = {_to_mask(e, n) for e in edges}
        missing = [v for v in range(n) if 1 << v not in family]
        if 0 not in family or missing:
            raise InvalidStructureError("edge family must contain the empty set and every singleton")
        for e in family:
            for v in iter_bits(e):
                if e & ~(1 << v) not in family:
                    raise InvalidStructureError(f"edge family is not closed below {VertexSet(e)!r}")
        gens = [m for m in maximal_masks(family) if m.bit_count() >= 2]
        return cls(GeneratingSet(n, frozenset(gens)))

    @property
    def generator_masks(self) -> frozenset[int]:
        return self.gens.maximal_edges

    def layer_masks(self, r: int) -> frozenset[int]:
        """All r-edges as masks (cached)."""
        cached = self._layers.get(r)
        if cached is not None:
            return cached
        if r < 0:
            result: frozenset[int] = frozenset()
        elif r == 0:
            result = frozenset({0})
        elif r == 1:
            result = frozenset(1 << v for v in range(self.n))
        else:
            acc: set[int] = set()
            for g in self.gens.maximal_edges:
                if g.bit_count() == r:
                    acc.add(g)
                elif g.bit_count() > r:
                    acc.update(subsets_of_size(g, r))
            result = frozenset(acc)
        self._layers[r] = result
        return result

    def has_edge(self, e) -> bool:
        mask = e.mask if isinstance(e, VertexSet) else e
        if mask >> self.n:
            return False
        size = mask.bit_count()
        if size <= 1:
            return True
        return mask in self.layer_masks(size)

    @property
    def edges(self) -> frozenset[int]:
        """The full closed edge family (materialised)."""
        acc: set[int] = set()
        for r in range(self.dimension + 2):
            acc.update(self.layer_masks(r))
        return frozenset(acc)

    def edge_sets(self) -> list[VertexSet]:
        return [VertexSet(m) for m in sorted(self.edges, key=sort_key)]

    def __len__(self) -> int:
        return sum(len(self.layer_masks(r)) for r in range(self.dimension + 2))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Complex) and self.n == other.n and self.gens == other.gens

    def __hash__(self) -> int:
        return hash(("Complex", self.n, self.gens.maximal_edges))

    def __reduce__(self):
        return (Complex, (self.gens,))

    def __repr__(self) -> str:
        body = ", ".join(repr(VertexSet(m)) for m in self.gens.sorted_masks())
        return f"Complex(n={self.n}, gens=[{body}])"


# ==========================================
# Closure algebra
# ==========================================

def downward_closure(gens: GeneratingSet | UniformHypergraph | Iterable, n: int | None = None) -> Complex:
    """
    D(gens): the empty set, every singleton of [n] and every subset of a generator.

    Accepts a GeneratingSet, a UniformHypergraph (its edges generate), or a raw
    edge iterable together with `n` (non-antichain input is reduced).
    """
    if isinstance(gens, GeneratingSet):
        return Complex(gens)
    if isinstance(gens, UniformHypergraph):
        masks = gens.edges if gens.k >= 2 else frozenset()
        return Complex(GeneratingSet(gens.n, frozenset(maximal_masks(masks))))
    if n is None:
        raise InvalidStructureError("ground-set size required for raw edge input")
    return Complex(GeneratingSet.from_edges(n, gens, reduce=True))


def generating_set(c: Complex) -> GeneratingSet:
    """Inclusion-maximal edges of size >= 2; singletons stay implicit."""
    return c.gens


def layer(c: Complex, r: int) -> UniformHypergraph:
    """The r-uniform hypergraph of all size-r edges (empty when r is out of range)."""
    if r < 0 or r > c.dimension + 1:
        return UniformHypergraph(c.n, max(r, 0))
    return UniformHypergraph(c.n, r, c.layer_masks(r))


def dimension(c: Complex) -> int:
    return c.dimension


def edge_counts(c: Complex) -> EdgeCounts:
    top = c.dimension + 1
    by_size = {r: len(c.layer_masks(r)) for r in range(top + 1)}
    at_least: dict[int, int] = {}
    running = 0
    for r in range(top, -1, -1):
        running += by_size[r]
        at_least[r] = running
    return EdgeCounts(by_size=by_size, total=running, at_least=at_least)
