"""
Project: Turán Workbench - exact simplicial Turán computations at desk scale
File: services/clique_service.py
Description:
    Clique predicates and counts for k-uniform hypergraphs, and copy counting N(T,G).

    A set T is a clique of G when it is a singleton, lies inside an edge, or has
    at least k vertices and every k-subset is an edge. The empty set is not a clique.

    Key Capabilities:
    1. count_cliques: orders below k from the shadow of the edges; orders >= k by a
       depth-first extension over link masks of (k-1)-sets. Can fan out over a
       process pool, partitioned on the least vertex.
    2. CliqueTracker: incremental counts as edges come and go (used by the search layer).
    3. count_embeddings / count_copies / count_complete.
    4. lower_bound_complex: cliques of G plus every set of size < k.
"""

from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations

from core.canonical import automorphism_count
from core.embedding import EmbeddingSearch
from core.errors import InvalidStructureError
from core.hypergraph import Complex, GeneratingSet, UniformHypergraph, maximal_masks
from core.vertex_set import VertexSet, iter_bits, lowest_bit, subsets_of_size
from services.containment_service import AnchoredPattern, degree_filter

logger = logging.getLogger("CliqueService")


@dataclass(frozen=True)
class CliqueCount:
    by_order: dict[int, int]
    total_geq_k: int
    total_all: int
    k: int = 0
    min_order: int = 1

    @property
    def total(self) -> int:
        return self.total_all


# ==========================================
# Link structure and extension
# ==========================================

def build_links(edges, k: int) -> dict[int, int]:
    """(k-1)-set mask -> mask of the vertices completing it to an edge."""
    links: dict[int, int] = {}
    for e in edges:
        for v in iter_bits(e):
            s = e & ~(1 << v)
            links[s] = links.get(s, 0) | (1 << v)
    return links


def _extend(links, k, members, mask, cand, counts, found=None) -> None:
    """
    Visit every clique mask + X, X a nonempty subset of `cand` taken in increasing
    order. `cand` must already complete every (k-1)-subset of `mask`.
    """
    size = len(members)
    while cand:
        low = cand & -cand
        cand ^= low
        counts[size + 1] += 1
        if found is not None:
            found.append(mask | low)
        # Later vertices lie above w and complete every (k-1)-set through w.
        nxt = cand & ~((low << 1) - 1)
        for sub in combinations(members, k - 2):
            if not nxt:
                break
            m = low
            for u in sub:
                m |= 1 << u
            nxt &= links.get(m, 0)
        if nxt:
            members.append(low.bit_length() - 1)
            _extend(links, k, members, mask | low, nxt, counts, found)
            members.pop()


def _count_rooted(args) -> list[int]:
    """Counts per order for cliques >= k whose least vertex lies in `roots`."""
    n, k, edges, roots = args
    links = build_links(edges, k)
    counts = [0] * (n + 2)
    for s, link in sorted(links.items()):
        if lowest_bit(s) not in roots:
            continue
        cand = link & ~((1 << s.bit_length()) - 1)
        if cand:
            _extend(links, k, list(iter_bits(s)), s, cand, counts)
    return counts


def _shadow_counts(g: UniformHypergraph) -> dict[int, int]:
    """Distinct r-subsets of edges for 2 <= r < k."""
    out = {}
    for r in range(2, g.k):
        seen = set()
        for e in g.edges:
            seen.update(subsets_of_size(e, r))
        out[r] = len(seen)
    return out


def count_cliques(g: UniformHypergraph, min_order: int = 1, workers: int = 1) -> CliqueCount:
    """
    Cliques of every order >= min_order. `by_order` runs from min_order up to the
    largest order present (and at least up to k).
    """
    if min_order < 1:
        raise InvalidStructureError("min_order must be >= 1")
    k = g.k
    counts = [0] * (g.n + 2)
    counts[1] = g.n
    for r, c in _shadow_counts(g).items():
        counts[r] = c
    if k >= 2 and g.edges:
        edges = tuple(sorted(g.edges))
        if workers > 1 and g.n > 1:
            chunks = [(g.n, k, edges, frozenset(range(w, g.n, workers))) for w in range(workers)]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                partials = list(pool.map(_count_rooted, chunks))
        else:
            partials = [_count_rooted((g.n, k, edges, frozenset(range(g.n))))]
        for part in partials:
            for r in range(k, g.n + 1):
                counts[r] += part[r]
    top = max([k] + [r for r in range(g.n + 1) if counts[r]])
    by_order = {r: counts[r] for r in range(min_order, top + 1)}
    geq_k = sum(c for r, c in by_order.items() if r >= k)
    return CliqueCount(by_order=by_order, total_geq_k=geq_k, total_all=sum(by_order.values()), k=k, min_order=min_order)


def is_clique(g: UniformHypergraph, t: VertexSet | int) -> bool:
    mask = t.mask if isinstance(t, VertexSet) else t
    if mask == 0 or mask >> g.n:
        return False
    size = mask.bit_count()
    if size == 1:
        return True
    if any(mask & ~e == 0 for e in g.edges):
        return True
    if size >= g.k:
        return all(sub in g.edges for sub in subsets_of_size(mask, g.k))
    return False


def count_complete(g: UniformHypergraph, r: int) -> int:
    """Number of r-sets all of whose k-subsets are edges."""
    if r < g.k:
        raise InvalidStructureError(f"count_complete needs r >= k (r={r}, k={g.k})")
    return count_cliques(g, g.k).by_order.get(r, 0)


def clique_masks(g: UniformHypergraph) -> list[int]:
    """Every clique of order >= k, as masks."""
    links = build_links(g.edges, g.k)
    counts = [0] * (g.n + 2)
    found: list[int] = []
    for s, link in sorted(links.items()):
        cand = link & ~((1 << s.bit_length()) - 1)
        if cand:
            _extend(links, g.k, list(iter_bits(s)), s, cand, counts, found)
    return found


# ==========================================
# Incremental counting
# ==========================================

class CliqueTracker:
    """
    Clique counts of a k-graph under edge insertions and deletions.

    Args:
        n: Ground-set size.
        k: Uniformity.
        count_low: Also track cliques of order 2..k-1 (subsets of edges).
    """

    def __init__(self, n: int, k: int, count_low: bool):
        self.n = n
        self.k = k
        self.count_low = count_low
        self.links: dict[int, int] = {}
        self.shadow: Counter = Counter()

    def through(self, e: int) -> list[int]:
        """Counts per order of the cliques of order >= k that contain e (e included)."""
        counts = [0] * (self.n + 2)
        counts[self.k] = 1
        cand = ~e & ((1 << self.n) - 1)
        for v in iter_bits(e):
            cand &= self.links.get(e & ~(1 << v), 0)
            if not cand:
                break
        if cand:
            _extend(self.links, self.k, list(iter_bits(e)), e, cand, counts)
        return counts

    def add(self, e: int) -> int:
        gained = sum(self.through(e))
        for v in iter_bits(e):
            s = e & ~(1 << v)
            self.links[s] = self.links.get(s, 0) | (1 << v)
        if self.count_low:
            for r in range(2, self.k):
                for s in subsets_of_size(e, r):
                    if self.shadow[s] == 0:
                        gained += 1
                    self.shadow[s] += 1
        return gained

    def remove(self, e: int) -> int:
        for v in iter_bits(e):
            s = e & ~(1 << v)
            left = self.links.get(s, 0) & ~(1 << v)
            if left:
                self.links[s] = left
            else:
                self.links.pop(s, None)
        lost = sum(self.through(e))
        if self.count_low:
            for r in range(2, self.k):
                for s in subsets_of_size(e, r):
                    self.shadow[s] -= 1
                    if self.shadow[s] == 0:
                        lost += 1
                        del self.shadow[s]
        return lost


# ==========================================
# Copies
# ==========================================

def count_embeddings(t: UniformHypergraph, g: UniformHypergraph, anchor=None) -> int:
    """
    Injective maps of t's non-isolated vertices into g sending edges to edges.
    With `anchor` (an edge of g), only maps sending some edge of t onto it.
    """
    if t.k != g.k:
        raise InvalidStructureError(f"uniformity mismatch: {t.k} vs {g.k}")
    if not t.edges:
        return 1
    if anchor is not None:
        f = anchor.mask if isinstance(anchor, VertexSet) else anchor
        return AnchoredPattern(t.edges, exact=True).count(g.n, g.edges.__contains__, f)
    search = EmbeddingSearch(
        t.edges, g.n, g.edges.__contains__, downward_closed=False, allowed=degree_filter(t, g.degrees)
    )
    return search.count()


def count_copies(t: UniformHypergraph, g: UniformHypergraph) -> int:
    """Unlabeled sub-hypergraph copies: embeddings / |Aut(t)|."""
    embeddings = count_embeddings(t, g)
    aut = automorphism_count(t)
    if embeddings % aut:
        raise InvalidStructureError("embedding count not divisible by the automorphism count")
    return embeddings // aut


# ==========================================
# Lower-bound complex
# ==========================================

def lower_bound_complex(g: UniformHypergraph) -> Complex:
    """
    Cliques of g plus every set of size < k; its edge count is
    cliques_{>=k}(g) + sum_{r<k} C(n, r).
    """
    low = list(subsets_of_size((1 << g.n) - 1, g.k - 1)) if g.k >= 3 else []
    tops = maximal_masks(clique_masks(g) + low)
    return Complex(GeneratingSet(g.n, frozenset(m for m in tops if m.bit_count() >= 2)))


class CliqueService:
    """
    Clique counting bound to a worker count.

    Args:
        workers: Process-pool size for count_cliques (1 = in-process).
    """

    def __init__(self, workers=1):
        self.workers = max(1, int(workers))

    def count(self, g: UniformHypergraph, min_order: int = 1) -> CliqueCount:
        result = count_cliques(g, min_order, workers=self.workers)
        logger.info(f"Cliques of n={g.n}, k={g.k} (min order {min_order}): total {result.total_all}")
        return result
