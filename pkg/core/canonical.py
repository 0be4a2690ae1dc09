"""
Project: Turán Workbench - exact simplicial Turán computations at desk scale
File: core/canonical.py
Description:
    Canonical forms and isomorphism for uniform hypergraphs and complexes.

    Key Capabilities:
    1. canonical_form: least block encoding over all vertex orderings, found by
       backtracking with invariant cells, best-block candidate filtering and
       twin (transposition automorphism) pruning.
    2. isomorphic / isomorphic_bruteforce: the fast test and its permutation oracle.
    3. relabel, automorphism_count, instance_hash.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

from core.embedding import EmbeddingSearch
from core.errors import InvalidStructureError, UnsupportedSizeError
from core.hypergraph import Complex, GeneratingSet, UniformHypergraph
from core.vertex_set import iter_bits

logger = logging.getLogger("Canonical")

DEFAULT_CANONICAL_MAX_N = 12
BRUTEFORCE_MAX_N = 8

# Module-wide limit; app.py overrides it from settings.ini [Limits].
canonical_max_n = DEFAULT_CANONICAL_MAX_N


@dataclass(frozen=True)
class CanonicalForm:
    encoding: bytes

    def hexdigest(self) -> str:
        return hashlib.sha256(self.encoding).hexdigest()


# ==========================================
# Structure access
# ==========================================

def _structure(obj) -> tuple[bytes, int, list[int]]:
    """(header, n, edge masks) for any supported object."""
    if isinstance(obj, UniformHypergraph):
        return f"U{obj.n}.{obj.k}".encode(), obj.n, sorted(obj.edges)
    if isinstance(obj, Complex):
        return f"C{obj.n}".encode(), obj.n, sorted(obj.generator_masks)
    if isinstance(obj, GeneratingSet):
        return f"C{obj.n}".encode(), obj.n, sorted(obj.maximal_edges)
    raise InvalidStructureError(f"cannot canonicalise {type(obj).__name__}")


def relabel(obj, perm: Sequence[int]):
    """Apply the vertex permutation v -> perm[v]."""
    n = obj.n
    if sorted(perm) != list(range(n)):
        raise InvalidStructureError(f"not a permutation of [0,{n}): {list(perm)}")

    def move(mask: int) -> int:
        out = 0
        for v in iter_bits(mask):
            out |= 1 << perm[v]
        return out

    if isinstance(obj, UniformHypergraph):
        return UniformHypergraph(n, obj.k, frozenset(move(e) for e in obj.edges))
    if isinstance(obj, Complex):
        return Complex(GeneratingSet(n, frozenset(move(e) for e in obj.generator_masks)))
    if isinstance(obj, GeneratingSet):
        return GeneratingSet(n, frozenset(move(e) for e in obj.maximal_edges))
    raise InvalidStructureError(f"cannot relabel {type(obj).__name__}")


# ==========================================
# Canonical labeling search
# ==========================================

def _vertex_cells(n: int, edges: list[int]) -> list[list[int]]:
    """Partition [n] into cells of equal refined invariant, cells in invariant order."""
    profile = []
    for v in range(n):
        sizes = sorted(e.bit_count() for e in edges if e >> v & 1)
        profile.append(tuple(sizes))
    refined = []
    for v in range(n):
        around = sorted(
            (e.bit_count(), tuple(sorted(profile[u] for u in iter_bits(e) if u != v)))
            for e in edges
            if e >> v & 1
        )
        refined.append((len(profile[v]), profile[v], tuple(around)))
    cells: dict[tuple, list[int]] = {}
    for v in range(n):
        cells.setdefault(refined[v], []).append(v)
    # Higher degree first, so dense parts get the small labels.
    return [cells[key] for key in sorted(cells, key=lambda key: (-key[0], key))]


class _CanonicalSearch:
    """Least block encoding. Block i lists the edges whose largest label is i."""

    def __init__(self, n: int, edges: list[int]):
        self.n = n
        self.edges = edges
        self.edge_set = frozenset(edges)
        self.incident = [[e for e in edges if e >> v & 1] for v in range(n)]
        cells = _vertex_cells(n, edges)
        self.cell_of_position: list[list[int]] = []
        for cell in cells:
            self.cell_of_position.extend([cell] * len(cell))
        self.label = [-1] * n
        self.best: list[tuple] | None = None
        self.prefix: list[tuple] = []

    def _block(self, v: int, pos: int) -> tuple:
        complete = []
        partial = []
        for e in self.incident[v]:
            labels = []
            missing = False
            for u in iter_bits(e):
                if u == v:
                    continue
                if self.label[u] < 0:
                    missing = True
                else:
                    labels.append(self.label[u])
            labels.sort()
            if missing:
                if labels:
                    partial.append(tuple(labels))
            else:
                complete.append(tuple(labels) + (pos,))
        complete.sort()
        partial.sort()
        # More incidences sort first, so labels follow the structure outward.
        return (-len(complete), tuple(complete), -len(partial), tuple(partial))

    def _is_twin(self, a: int, b: int) -> bool:
        """Transposition (a b) is an automorphism."""
        swap = (1 << a) | (1 << b)
        for e in self.incident[a]:
            if e & swap != swap and (e ^ swap) not in self.edge_set:
                return False
        for e in self.incident[b]:
            if e & swap != swap and (e ^ swap) not in self.edge_set:
                return False
        return True

    def _search(self, pos: int) -> None:
        if pos == self.n:
            if self.best is None or self.prefix < self.best:
                self.best = list(self.prefix)
            return
        options = [v for v in self.cell_of_position[pos] if self.label[v] < 0]
        keyed = [(self._block(v, pos), v) for v in options]
        least = min(k for k, _ in keyed)
        if self.best is not None:
            # Prefix comparison against the incumbent; keys encode the blocks, so a
            # larger key at the first difference can never recover.
            ahead = self.best[pos]
            if least > ahead and self.prefix == self.best[:pos]:
                return
        tried: list[int] = []
        for key, v in keyed:
            if key != least:
                continue
            if any(self._is_twin(u, v) for u in tried):
                continue
            tried.append(v)
            self.label[v] = pos
            self.prefix.append(key)
            if self.best is None or self.prefix <= self.best[: pos + 1]:
                self._search(pos + 1)
            self.prefix.pop()
            self.label[v] = -1

    def run(self) -> list[tuple]:
        self._search(0)
        return self.best or []


def _encode(header: bytes, blocks: list[tuple]) -> bytes:
    parts = []
    for block in blocks:
        parts.append(";".join(",".join(map(str, edge)) for edge in block[1]))
    return header + b"|" + "|".join(parts).encode()


def canonical_form(obj, limit: int | None = None) -> CanonicalForm:
    """
    Relabeling-invariant encoding of a uniform hypergraph or complex.

    Raises:
        UnsupportedSizeError: when n exceeds the canonicalisation limit.
    """
    header, n, edges = _structure(obj)
    cap = canonical_max_n if limit is None else limit
    if n > cap:
        raise UnsupportedSizeError(f"canonical form limited to n <= {cap} (got n={n})")
    if not edges:
        return CanonicalForm(header + b"|")
    blocks = _CanonicalSearch(n, edges).run()
    return CanonicalForm(_encode(header, blocks))


# ==========================================
# Isomorphism
# ==========================================

def _kind(obj) -> tuple:
    if isinstance(obj, UniformHypergraph):
        return ("U", obj.n, obj.k, len(obj.edges))
    if isinstance(obj, (Complex, GeneratingSet)):
        _, n, edges = _structure(obj)
        return ("C", n, tuple(sorted(e.bit_count() for e in edges)))
    return ("?",)


def isomorphic(a, b) -> bool:
    """Canonical-form equality; mismatched kinds, sizes or uniformities give False."""
    if _kind(a) != _kind(b):
        return False
    return canonical_form(a) == canonical_form(b)


def isomorphic_bruteforce(a, b) -> bool:
    """Permutation oracle for small n."""
    if _kind(a) != _kind(b):
        return False
    _, n, edges_a = _structure(a)
    _, _, edges_b = _structure(b)
    if n > BRUTEFORCE_MAX_N:
        raise UnsupportedSizeError(f"brute-force isomorphism limited to n <= {BRUTEFORCE_MAX_N}")
    target = frozenset(edges_b)
    for perm in permutations(range(n)):
        moved = set()
        for e in edges_a:
            out = 0
            for v in iter_bits(e):
                out |= 1 << perm[v]
            moved.add(out)
        if moved == target:
            return True
    return False


def automorphism_count(obj, *, on_support: bool = True) -> int:
    """
    Number of automorphisms. With `on_support` only non-isolated vertices are
    permuted (the convention used for copy counting).
    """
    _, n, edges = _structure(obj)
    edge_set = frozenset(edges)
    search = EmbeddingSearch(edges, n, edge_set.__contains__, downward_closed=False)
    count = search.count()
    if not on_support:
        support = 0
        for e in edges:
            support |= e
        isolated = n - support.bit_count()
        for i in range(2, isolated + 1):
            count *= i
    return count


def instance_hash(*parts) -> str:
    """SHA-256 over canonical encodings (structures) and text (everything else)."""
    digest = hashlib.sha256()
    for part in parts:
        if isinstance(part, (UniformHypergraph, Complex, GeneratingSet)):
            digest.update(canonical_form(part).encoding)
        else:
            digest.update(repr(part).encode())
        digest.update(b"\x00")
    return digest.hexdigest()
