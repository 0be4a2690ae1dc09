"""
Project: Turán Workbench - exact simplicial Turán computations at desk scale
File: core/vertex_set.py
Description:
    Fixed-width vertex sets over the ground set [n] = {0, ..., n-1}.

    Key Capabilities:
    1. VertexSet: an immutable, hashable set of vertex ids backed by an int bitmask.
    2. Bit helpers (iter_bits, mask_of, subsets_of_size) used by the hot loops of
       the search layer, which work on raw masks and only wrap results at the edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

from core.errors import RepresentationError

# Width of the representation. Any ground set above this is rejected.
MAX_VERTICES = 128


# ==========================================
# Raw bitmask helpers
# ==========================================

def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of `mask` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def mask_of(ids: Iterable[int], n: int | None = None) -> int:
    """Pack vertex ids into a mask, checking the range against `n` (or the width)."""
    limit = MAX_VERTICES if n is None else n
    mask = 0
    for v in ids:
        if not isinstance(v, int) or v < 0:
            raise RepresentationError(f"invalid vertex id {v!r}")
        if v >= limit:
            raise RepresentationError(f"vertex {v} outside ground set of size {limit}")
        mask |= 1 << v
    return mask


def subsets_of_size(mask: int, r: int) -> Iterator[int]:
    """Yield every r-subset of `mask` as a mask, in lexicographic order of members."""
    members = list(iter_bits(mask))
    for combo in combinations(members, r):
        sub = 0
        for v in combo:
            sub |= 1 << v
        yield sub


def sort_key(mask: int) -> tuple[int, tuple[int, ...]]:
    """Size-then-lexicographic order on masks."""
    return mask.bit_count(), tuple(iter_bits(mask))


# ==========================================
# Public value type
# ==========================================

@dataclass(frozen=True, slots=True)
class VertexSet:
    """
    Immutable subset of [n] for n <= MAX_VERTICES.
    Equality and hashing are those of the underlying mask.
    """

    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask.bit_length() > MAX_VERTICES:
            raise RepresentationError(f"mask does not fit in {MAX_VERTICES} bits")

    @classmethod
    def of(cls, *ids: int) -> "VertexSet":
        return cls(mask_of(ids))

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.mask))

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and 0 <= v < MAX_VERTICES and bool(self.mask >> v & 1)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask | other.mask)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask & other.mask)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask & ~other.mask)

    def issubset(self, other: "VertexSet") -> bool:
        return self.mask & ~other.mask == 0

    def issuperset(self, other: "VertexSet") -> bool:
        return other.mask & ~self.mask == 0

    def max_vertex(self) -> int:
        return self.mask.bit_length() - 1

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return sort_key(self.mask)

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self.members)) + "}"
