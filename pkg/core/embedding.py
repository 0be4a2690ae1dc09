"""
Project: Turán Workbench - exact simplicial Turán computations at desk scale
File: core/embedding.py
Description:
    Backtracking engine for injective edge-preserving maps between set systems.

    Key Capabilities:
    1. Pattern vertex ordering: decreasing degree, then most connected to the
       already-ordered prefix, so edge checks fire as early as possible.
    2. Two check regimes: full pattern edges only (uniform hosts), or also every
       partial image (downward-closed hosts, where subsets of edges are edges).
    3. Anchoring: force one pattern edge to land inside (or exactly onto) a given
       host set, so incremental searches only look at copies through a new edge.
    4. Existence or counting, with an optional wall-clock deadline.
"""

from __future__ import annotations

import time
from typing import Callable, Iterable, Sequence

from core.errors import BudgetExhausted
from core.vertex_set import iter_bits

# How many search nodes pass between two deadline checks.
DEADLINE_STRIDE = 512


def order_pattern_vertices(pattern_edges: Sequence[int], start: Sequence[int] = ()) -> list[int]:
    """Greedy connectivity order over the pattern's support, seeded with `start`."""
    support = 0
    for e in pattern_edges:
        support |= e
    degree = {v: sum(1 for e in pattern_edges if e >> v & 1) for v in iter_bits(support)}
    order = list(start)
    placed = 0
    for v in order:
        placed |= 1 << v
    remaining = [v for v in iter_bits(support) if not placed >> v & 1]
    while remaining:
        def rank(v: int) -> tuple[int, int, int]:
            touching = sum(1 for e in pattern_edges if e >> v & 1 and e & placed)
            return (-touching, -degree[v], v)

        best = min(remaining, key=rank)
        remaining.remove(best)
        order.append(best)
        placed |= 1 << best
    return order


class EmbeddingSearch:
    """
    One configured search for injective maps phi: pattern support -> [host_n].

    Args:
        pattern_edges: Pattern edge masks that must map into host edges.
        host_n: Host ground-set size.
        host_has_edge: Membership oracle on host masks.
        downward_closed: Host is a complex, so partial images must be edges too.
        allowed: Optional per-pattern-vertex candidate masks (degree filters, anchors).
        order: Optional fixed pattern-vertex order (defaults to the greedy order).
        deadline: Optional time.monotonic() value after which BudgetExhausted is raised.
    """

    def __init__(
        self,
        pattern_edges: Iterable[int],
        host_n: int,
        host_has_edge: Callable[[int], bool],
        *,
        downward_closed: bool,
        allowed: dict[int, int] | None = None,
        order: Sequence[int] | None = None,
        deadline: float | None = None,
    ):
        self.pattern_edges = sorted(set(pattern_edges))
        self.host_has_edge = host_has_edge
        self.deadline = deadline
        self.nodes = 0
        self.order = list(order) if order is not None else order_pattern_vertices(self.pattern_edges)
        self.size = len(self.order)
        host_all = (1 << host_n) - 1
        allowed = allowed or {}
        self.allowed = [allowed.get(v, host_all) & host_all for v in self.order]

        # checks[i]: pattern vertex subsets (as position lists) whose image is tested
        # once position i is assigned.
        position = {v: i for i, v in enumerate(self.order)}
        self.checks: list[list[tuple[int, ...]]] = [[] for _ in range(self.size)]
        seen: set[tuple[int, ...]] = set()
        for e in self.pattern_edges:
            pos = sorted(position[v] for v in iter_bits(e))
            if downward_closed:
                for upto in range(1, len(pos)):
                    prefix = tuple(pos[: upto + 1])
                    if prefix not in seen:
                        seen.add(prefix)
                        self.checks[prefix[-1]].append(prefix)
            elif len(pos) >= 1:
                key = tuple(pos)
                if key not in seen:
                    seen.add(key)
                    self.checks[pos[-1]].append(key)
        self._image = [0] * self.size
        self._found: list[int] | None = None
        self._count = 0
        self._stop_at_first = True

    # ------------------------------------------------------------------
    def _tick(self) -> None:
        self.nodes += 1
        if self.deadline is not None and self.nodes % DEADLINE_STRIDE == 0:
            if time.monotonic() > self.deadline:
                raise BudgetExhausted("containment search exceeded its deadline")

    def _extend(self, i: int, used: int) -> bool:
        if i == self.size:
            if self._stop_at_first:
                self._found = list(self._image)
                return True
            self._count += 1
            return False
        self._tick()
        candidates = self.allowed[i] & ~used
        image = self._image
        checks = self.checks[i]
        while candidates:
            low = candidates & -candidates
            candidates ^= low
            image[i] = low
            ok = True
            for positions in checks:
                m = 0
                for p in positions:
                    m |= image[p]
                if not self.host_has_edge(m):
                    ok = False
                    break
            if ok and self._extend(i + 1, used | low):
                return True
        return False

    # ------------------------------------------------------------------
    def find(self) -> dict[int, int] | None:
        """First embedding found, as pattern vertex -> host vertex, or None."""
        self._stop_at_first = True
        self._found = None
        if self.size == 0:
            return {}
        if self._extend(0, 0) and self._found is not None:
            return {v: img.bit_length() - 1 for v, img in zip(self.order, self._found)}
        return None

    def count(self) -> int:
        """Number of embeddings (no early stop)."""
        self._stop_at_first = False
        self._count = 0
        if self.size == 0:
            return 1
        self._extend(0, 0)
        return self._count
