"""
Project: Turán Workbench - exact simplicial Turán computations at desk scale
File: services/extremal_service.py
Description:
    Exact desk-scale searchers for ex(n,F), ex_k^{cl}/ex_k^{cl+}(n,H) and ex_k(n,T,H).

    Key Capabilities:
    1. Include/exclude depth-first search over candidate edges in a fixed order.
       Every include is checked for a forbidden copy through the new edge only.
    2. Exhaustive mode (every free labeled structure is visited) and
       branch-and-bound mode (monotone upper bound + degree lex-leader symmetry rule).
    3. Deterministic parallelism: the tree is cut at a fixed depth, every task
       starts from the same incumbent and results merge in task order, so optimum,
       witness and node count are identical for any worker count.
    4. Witness re-verification from scratch and a verified JSON-lines cache.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from context.cache_manager import CacheManager, CacheRecord
from context.search_context import SearchContext, TaskOutcome
from core import __version__
from core.canonical import automorphism_count, canonical_form, instance_hash
from core.errors import BudgetExhausted, InvalidStructureError
from core.hypergraph import Complex, GeneratingSet, UniformHypergraph, maximal_masks
from core.vertex_set import iter_bits, mask_of, subsets_of_size
from services.clique_service import CliqueTracker, count_cliques, count_copies
from services.containment_service import (
    AnchoredPattern,
    contains_complex,
    contains_uniform,
    in_forbidden_family,
)

logger = logging.getLogger("ExtremalService")

DEADLINE_STRIDE = 256

EXACT = "exact"
LOWER_BOUND_ONLY = "lower-bound-only"


# ==========================================
# Instances and results
# ==========================================

@dataclass(frozen=True)
class SearchInstance:
    """
    One extremal question.

    kind: "complex" (ex(n,F)), "cliques" (ex_k^{cl}/ex_k^{cl+}) or "copies" (ex_k(n,T,H)).
    For "cliques", `pattern` may hold a complex F instead of `forbidden`; freeness then
    means "not in H_F".
    """

    kind: str
    n: int
    k: int = 0
    pattern: Complex | None = None
    forbidden: tuple[UniformHypergraph, ...] = ()
    target: UniformHypergraph | None = None
    mode: str = "geq_k"

    @property
    def command(self) -> str:
        return {"complex": "ex", "cliques": "ex-cliques", "copies": "ex-copies"}[self.kind]

    def key(self) -> str:
        forbidden = sorted(canonical_form(f).hexdigest() for f in self.forbidden)
        parts = [self.kind, self.n, self.k, self.mode if self.kind == "cliques" else "", tuple(forbidden)]
        parts.append(self.pattern if self.pattern is not None else "-")
        parts.append(self.target if self.target is not None else "-")
        return instance_hash(*parts)

    def parameters(self) -> dict:
        params = {"kind": self.kind, "n": self.n, "k": self.k}
        if self.kind == "cliques":
            params["mode"] = self.mode
        if self.pattern is not None:
            params["pattern"] = [list(e) for e in self.pattern.gens.edge_list()]
            params["pattern_n"] = self.pattern.n
        if self.forbidden:
            params["forbidden"] = [[list(e) for e in f.edge_list()] for f in self.forbidden]
        if self.target is not None:
            params["target"] = [list(e) for e in self.target.edge_list()]
        return params


@dataclass
class SearchResult:
    instance_key: str
    optimum: int
    witness: GeneratingSet | UniformHypergraph
    nodes_explored: int
    wall_seconds: float
    status: str
    command: str = ""
    parameters: dict = field(default_factory=dict)
    from_cache: bool = False

    def witness_text(self) -> str:
        return ";".join(" ".join(map(str, e)) for e in self.witness.edge_list())

    def to_dict(self) -> dict:
        return {
            "instance_key": self.instance_key,
            "command": self.command,
            "parameters": self.parameters,
            "optimum": self.optimum,
            "witness": self.witness_text(),
            "nodes": self.nodes_explored,
            "seconds": round(self.wall_seconds, 6),
            "status": self.status,
        }


def _parse_witness_text(text: str, instance: SearchInstance) -> GeneratingSet | UniformHypergraph:
    rows = [tuple(int(x) for x in part.split()) for part in text.split(";") if part.strip()]
    if instance.kind == "complex":
        return GeneratingSet.from_edges(instance.n, rows)
    return UniformHypergraph.from_edges(instance.n, instance.k, rows)


# ==========================================
# Search engine
# ==========================================

@dataclass(frozen=True)
class EngineOptions:
    exhaustive: bool
    deadline: float | None


def _smax(n: int, pattern: Complex) -> int:
    """Largest allowed edge size: one less than the least s whose single s-set contains the pattern."""
    for s in range(2, n + 1):
        single = Complex(GeneratingSet(s, frozenset({(1 << s) - 1})))
        if contains_complex(single, pattern) is not None:
            return s - 1
    return n


class _Engine:
    """
    State of one include/exclude search. Built identically in every worker from the
    instance, so tasks can be shipped as (instance, decisions) pairs.
    """

    def __init__(self, instance: SearchInstance, options: EngineOptions):
        self.instance = instance
        self.n = instance.n
        self.exhaustive = options.exhaustive
        self.deadline = options.deadline
        self.nodes = 0
        self.present: set[int] = set()
        self.shadow: dict[int, int] = {}
        self.value = 0
        self.best_value = -1
        self.best_edges: list[int] | None = None
        self.improved = False

        if instance.kind == "complex":
            self._setup_complex(instance)
        else:
            self._setup_uniform(instance)
        self.m = len(self.candidates)
        self.state = [0] * self.m

        # Degree lex-leader rule on one layer: once the degrees of v-1 and v are
        # final, deg(v-1) >= deg(v) must hold.
        self.degree = [0] * self.n
        last = [-1] * self.n
        for j, e in enumerate(self.candidates):
            if e.bit_count() == self.sym_size:
                for v in iter_bits(e):
                    last[v] = j
        self.final_index = last
        self.finals_at: dict[int, list[int]] = {}
        for v, j in enumerate(last):
            if j >= 0:
                self.finals_at.setdefault(j, []).append(v)

    # ------------------------------------------------------------------
    def _setup_complex(self, instance: SearchInstance) -> None:
        pattern = instance.pattern
        top = min(_smax(self.n, pattern), self.n)
        self.candidates = []
        for size in range(2, top + 1):
            self.candidates.extend(mask_of(c) for c in combinations(range(self.n), size))
        self.index = {e: j for j, e in enumerate(self.candidates)}
        self.subsets = [
            [self.index[e & ~(1 << v)] for v in iter_bits(e)] if e.bit_count() >= 3 else []
            for e in self.candidates
        ]
        self.sym_size = 2
        # Pattern vertices outside the support still need distinct host vertices.
        self.pattern_fits = pattern.n <= self.n
        self.anchored = [AnchoredPattern(pattern.generator_masks, exact=False)]
        self.complex_pattern = None
        self.base = 1 + self.n
        self.value = self.base
        self.tracker = None
        self.copy_target = None

    def _setup_uniform(self, instance: SearchInstance) -> None:
        k = instance.k
        self.candidates = [mask_of(c) for c in combinations(range(self.n), k)]
        self.subsets = [[] for _ in self.candidates]
        self.sym_size = k
        self.anchored = [AnchoredPattern(f.edges, exact=True) for f in instance.forbidden]
        self.complex_pattern = AnchoredPattern(instance.pattern.generator_masks, exact=False) if (
            instance.kind == "cliques" and instance.pattern is not None and instance.pattern.n <= self.n
        ) else None
        if instance.kind == "cliques":
            all_orders = instance.mode == "all"
            self.tracker = CliqueTracker(self.n, k, count_low=all_orders)
            self.base = self.n if all_orders else 0
            self.copy_target = None
        else:
            self.tracker = None
            self.base = 0
            self.copy_target = AnchoredPattern(instance.target.edges, exact=True)
            self.copy_aut = automorphism_count(instance.target)
        self.value = self.base

    # ------------------------------------------------------------------
    def _tick(self) -> None:
        self.nodes += 1
        if self.deadline is not None and self.nodes % DEADLINE_STRIDE == 0 and time.monotonic() > self.deadline:
            raise BudgetExhausted("search deadline reached")

    def _has_edge(self, m: int) -> bool:
        return m.bit_count() <= 1 or m in self.present

    def _in_closure(self, m: int) -> bool:
        return m.bit_count() <= 1 or self.shadow.get(m, 0) > 0

    def _creates_copy(self, e: int) -> bool:
        if self.instance.kind == "complex":
            if not self.pattern_fits:
                return False
            return self.anchored[0].exists(self.n, self._has_edge, e, deadline=self.deadline)
        for pattern in self.anchored:
            if pattern.exists(self.n, self._has_edge, e, deadline=self.deadline):
                return True
        if self.complex_pattern is not None:
            return self.complex_pattern.exists(self.n, self._in_closure, e, deadline=self.deadline)
        return False

    def _shadow_update(self, e: int, step: int) -> None:
        for r in range(2, e.bit_count() + 1):
            for s in subsets_of_size(e, r):
                left = self.shadow.get(s, 0) + step
                if left:
                    self.shadow[s] = left
                else:
                    del self.shadow[s]

    def try_include(self, j: int) -> int | None:
        """Include candidate j if allowed; returns the objective gain or None."""
        if any(self.state[s] != 1 for s in self.subsets[j]):
            return None
        e = self.candidates[j]
        self.present.add(e)
        if self.complex_pattern is not None:
            self._shadow_update(e, 1)
        if self._creates_copy(e):
            self.present.discard(e)
            if self.complex_pattern is not None:
                self._shadow_update(e, -1)
            return None
        if self.tracker is not None:
            gain = self.tracker.add(e)
        elif self.copy_target is not None:
            gain = self.copy_target.count(self.n, self._has_edge, e) // self.copy_aut
        else:
            gain = 1
        self.state[j] = 1
        self.value += gain
        if e.bit_count() == self.sym_size:
            for v in iter_bits(e):
                self.degree[v] += 1
        return gain

    def undo_include(self, j: int, gain: int) -> None:
        e = self.candidates[j]
        self.state[j] = 0
        self.value -= gain
        self.present.discard(e)
        if self.tracker is not None:
            self.tracker.remove(e)
        if self.complex_pattern is not None:
            self._shadow_update(e, -1)
        if e.bit_count() == self.sym_size:
            for v in iter_bits(e):
                self.degree[v] -= 1

    def _symmetry_ok(self, j: int) -> bool:
        if self.exhaustive:
            return True
        for v in self.finals_at.get(j, ()):
            for u, w in ((v - 1, v), (v, v + 1)):
                if u < 0 or w >= self.n:
                    continue
                if 0 <= self.final_index[u] <= j and 0 <= self.final_index[w] <= j:
                    if self.degree[u] < self.degree[w]:
                        return False
        return True

    def bound(self, j: int) -> int:
        """Upper bound on any completion of the current node."""
        if self.instance.kind == "complex":
            possible = [False] * self.m
            extra = 0
            for i in range(self.m):
                if self.state[i] == 1:
                    possible[i] = True
                elif self.state[i] == 0 and i >= j:
                    if all(possible[s] for s in self.subsets[i]):
                        possible[i] = True
                        extra += 1
            return self.value + extra
        union = set(self.present)
        union.update(self.candidates[i] for i in range(j, self.m) if self.state[i] == 0)
        graph = UniformHypergraph(self.n, self.instance.k, frozenset(union))
        if self.instance.kind == "cliques":
            counts = count_cliques(graph, 1 if self.instance.mode == "all" else self.instance.k)
            return counts.total_all if self.instance.mode == "all" else counts.total_geq_k
        return count_copies(self.instance.target, graph)

    def _record(self) -> None:
        if self.value > self.best_value:
            self.best_value = self.value
            self.best_edges = sorted(self.present)
            self.improved = True

    # ------------------------------------------------------------------
    def dfs(self, j: int, bound: int | None, frontier: list | None = None, split_at: int = -1) -> None:
        self._tick()
        self._record()
        if j == self.m:
            return
        if frontier is not None and j == split_at:
            frontier.append(tuple(self.state[:j]))
            return
        if not self.exhaustive:
            if bound is None:
                bound = self.bound(j)
            if bound <= self.best_value:
                return
        gain = self.try_include(j)
        if gain is not None:
            if self._symmetry_ok(j):
                self.dfs(j + 1, bound, frontier, split_at)
            self.undo_include(j, gain)
        self.state[j] = -1
        if self._symmetry_ok(j):
            self.dfs(j + 1, None, frontier, split_at)
        self.state[j] = 0

    def replay(self, decisions: Sequence[int]) -> None:
        for j, d in enumerate(decisions):
            if d == 1:
                if self.try_include(j) is None:
                    raise InvalidStructureError("task prefix cannot be replayed")
            else:
                self.state[j] = -1

    def greedy(self) -> None:
        """Include every candidate that is allowed, in order; seeds the incumbent."""
        for j in range(self.m):
            if self.try_include(j) is None:
                self.state[j] = -1
        self._record()


def _run_task(args) -> TaskOutcome:
    """Worker entry point: replay a prefix and search its subtree."""
    index, instance, options, decisions, start_value = args
    engine = _Engine(instance, options)
    engine.replay(decisions)
    engine.best_value = start_value
    exhausted = False
    try:
        engine.dfs(len(decisions), None)
    except BudgetExhausted:
        exhausted = True
    edges = engine.best_edges if engine.improved else None
    return TaskOutcome(index, engine.best_value, edges, engine.nodes, exhausted)


# ==========================================
# Service
# ==========================================

class ExtremalService:
    """
    Runs extremal searches with the configured budget, parallelism and cache.

    Args:
        threads: Worker processes for subtree tasks (1 = in-process).
        split_depth: Depth at which the tree is cut into tasks.
        time_limit: Seconds per search; 0 means unlimited.
        exhaustive_max_candidates: Uniform searches with at most this many candidate
            edges run exhaustively instead of with branch and bound.
        cache: Optional CacheManager; hits are re-verified before use.
        snapshot_dir: When set, every fresh search dumps its merged SearchContext there.
    """

    def __init__(self, threads=1, split_depth=6, time_limit=0, exhaustive_max_candidates=21, cache: CacheManager | None = None, snapshot_dir: str | None = None):
        self.threads = max(1, int(threads))
        self.split_depth = max(0, int(split_depth))
        self.time_limit = float(time_limit or 0)
        self.exhaustive_max_candidates = int(exhaustive_max_candidates)
        self.cache = cache
        self.snapshot_dir = snapshot_dir or None

    # ------------------------------------------------------------------
    def max_edges_pattern_free(self, n: int, pattern: Complex, time_limit: float | None = None, strategy: str = "auto") -> SearchResult:
        if not pattern.generator_masks and pattern.n <= n:
            raise InvalidStructureError("every complex on n vertices contains an edgeless pattern")
        instance = SearchInstance("complex", n, pattern.dimension + 1, pattern=pattern)
        return self.run(instance, time_limit, exhaustive=strategy == "exhaustive")

    def max_cliques_forbidden(
        self,
        n: int,
        k: int,
        forbidden: Sequence[UniformHypergraph] = (),
        mode: str = "geq_k",
        forbidden_complex: Complex | None = None,
        time_limit: float | None = None,
        strategy: str = "auto",
    ) -> SearchResult:
        if mode not in ("all", "geq_k"):
            raise InvalidStructureError(f"unknown clique mode {mode!r}")
        self._check_forbidden(k, forbidden)
        if forbidden_complex is not None and forbidden_complex.dimension + 1 != k:
            raise InvalidStructureError("forbidden complex dimension must be k - 1")
        instance = SearchInstance("cliques", n, k, pattern=forbidden_complex, forbidden=tuple(forbidden), mode=mode)
        return self.run(instance, time_limit, exhaustive=self._exhaustive(n, k, strategy))

    def max_copies(
        self,
        n: int,
        k: int,
        target: UniformHypergraph,
        forbidden: UniformHypergraph | Sequence[UniformHypergraph],
        time_limit: float | None = None,
        strategy: str = "auto",
    ) -> SearchResult:
        forbidden = (forbidden,) if isinstance(forbidden, UniformHypergraph) else tuple(forbidden)
        self._check_forbidden(k, forbidden)
        if target.k != k or not target.edges:
            raise InvalidStructureError("target must be a nonempty k-graph")
        instance = SearchInstance("copies", n, k, forbidden=forbidden, target=target)
        return self.run(instance, time_limit, exhaustive=self._exhaustive(n, k, strategy))

    @staticmethod
    def _check_forbidden(k: int, forbidden: Sequence[UniformHypergraph]) -> None:
        for f in forbidden:
            if f.k != k:
                raise InvalidStructureError(f"forbidden hypergraph has uniformity {f.k}, expected {k}")
            if not f.edges:
                raise InvalidStructureError("forbidden hypergraph has no edges")

    def _exhaustive(self, n: int, k: int, strategy: str) -> bool:
        if strategy == "exhaustive":
            return True
        if strategy == "bnb":
            return False
        return math.comb(n, k) <= self.exhaustive_max_candidates

    # ------------------------------------------------------------------
    def run(self, instance: SearchInstance, time_limit: float | None = None, *, exhaustive: bool = False) -> SearchResult:
        key = instance.key()
        if self.cache is not None:
            record = self.cache.lookup(key, lambda rec: self._verify_record(rec, instance))
            if record is not None:
                return self._result_from_record(record, instance)

        started = time.monotonic()
        limit = self.time_limit if time_limit is None else float(time_limit)
        options = EngineOptions(exhaustive=exhaustive, deadline=started + limit if limit else None)
        context = SearchContext(instance.command, key, instance.parameters())

        seed = _Engine(instance, EngineOptions(exhaustive=exhaustive, deadline=None))
        seed.greedy()
        root = _Engine(instance, options)
        root.best_value, root.best_edges = seed.best_value, seed.best_edges
        frontier: list[tuple[int, ...]] = []
        prefix_exhausted = False
        try:
            root.dfs(0, None, frontier, min(self.split_depth, root.m))
        except BudgetExhausted:
            prefix_exhausted = True
        context.record_seed(root.best_value, root.best_edges or [], root.nodes)
        logger.info(f"[{instance.command}] n={instance.n}: {len(frontier)} tasks, {'exhaustive' if exhaustive else 'branch-and-bound'}")

        if not prefix_exhausted:
            tasks = [(i, instance, options, decisions, root.best_value) for i, decisions in enumerate(frontier)]
            if self.threads > 1 and len(tasks) > 1:
                with ProcessPoolExecutor(max_workers=self.threads) as pool:
                    for outcome in pool.map(_run_task, tasks, chunksize=1):
                        context.add_outcome(outcome)
            else:
                for task in tasks:
                    context.add_outcome(_run_task(task))

        optimum, edges = context.best()
        status = LOWER_BOUND_ONLY if (prefix_exhausted or context.exhausted) else EXACT
        witness = self._witness(instance, edges)
        result = SearchResult(
            instance_key=key,
            optimum=optimum,
            witness=witness,
            nodes_explored=context.nodes,
            wall_seconds=time.monotonic() - started,
            status=status,
            command=instance.command,
            parameters=instance.parameters(),
        )
        if status == EXACT:
            logger.info(f"[{instance.command}] optimum {optimum} after {result.nodes_explored} nodes ({result.wall_seconds:.2f}s)")
        else:
            logger.warning(f"[{instance.command}] budget exhausted; best lower bound {optimum}")
        if status == EXACT and self.cache is not None:
            self.cache.store(self._record_from_result(result))
        if self.snapshot_dir:
            context.save_snapshot(self.snapshot_dir)
        return result

    @staticmethod
    def _witness(instance: SearchInstance, edges: list[int]) -> GeneratingSet | UniformHypergraph:
        if instance.kind == "complex":
            return GeneratingSet(instance.n, frozenset(maximal_masks(edges)))
        return UniformHypergraph(instance.n, instance.k, frozenset(edges))

    # ------------------------------------------------------------------
    def verify_witness(self, result: SearchResult, instance: SearchInstance) -> bool:
        return verify_witness(result, instance)

    def _verify_record(self, record: CacheRecord, instance: SearchInstance) -> bool:
        try:
            result = self._result_from_record(record, instance)
        except Exception as e:
            logger.warning(f"Cache record could not be decoded: {e}")
            return False
        return verify_witness(result, instance)

    @staticmethod
    def _result_from_record(record: CacheRecord, instance: SearchInstance) -> SearchResult:
        return SearchResult(
            instance_key=record.instance_key,
            optimum=record.optimum,
            witness=_parse_witness_text(record.witness, instance),
            nodes_explored=record.nodes,
            wall_seconds=record.seconds,
            status=EXACT,
            command=record.command,
            parameters=record.parameters,
            from_cache=True,
        )

    @staticmethod
    def _record_from_result(result: SearchResult) -> CacheRecord:
        return CacheRecord(
            instance_key=result.instance_key,
            command=result.command,
            parameters=result.parameters,
            optimum=result.optimum,
            witness=result.witness_text(),
            nodes=result.nodes_explored,
            seconds=round(result.wall_seconds, 6),
            tool_version=__version__,
        )


def verify_witness(result: SearchResult, instance: SearchInstance) -> bool:
    """Recompute freeness and the objective of the witness from scratch."""
    if result.instance_key != instance.key():
        logger.warning("Witness belongs to a different instance")
        return False
    witness = result.witness
    if instance.kind == "complex":
        if not isinstance(witness, GeneratingSet) or witness.n != instance.n:
            return False
        host = Complex(witness)
        if contains_complex(host, instance.pattern) is not None:
            logger.warning("Witness complex contains the forbidden pattern")
            return False
        return len(host) == result.optimum
    if not isinstance(witness, UniformHypergraph) or witness.n != instance.n or witness.k != instance.k:
        return False
    for f in instance.forbidden:
        if contains_uniform(witness, f) is not None:
            logger.warning("Witness contains a forbidden hypergraph")
            return False
    if instance.pattern is not None and in_forbidden_family(witness, instance.pattern):
        logger.warning("Witness lies in the forbidden family")
        return False
    if instance.kind == "cliques":
        counts = count_cliques(witness, 1 if instance.mode == "all" else instance.k)
        value = counts.total_all if instance.mode == "all" else counts.total_geq_k
    else:
        value = count_copies(instance.target, witness)
    return value == result.optimum


# Function-style entry points with default service settings.

def max_edges_pattern_free(n: int, pattern: Complex, budget: float | None = None, **service_options) -> SearchResult:
    return ExtremalService(**service_options).max_edges_pattern_free(n, pattern, time_limit=budget)


def max_cliques_forbidden(n: int, k: int, forbidden: Sequence[UniformHypergraph] = (), mode: str = "geq_k", budget: float | None = None, **service_options) -> SearchResult:
    forbidden_complex = service_options.pop("forbidden_complex", None)
    strategy = service_options.pop("strategy", "auto")
    return ExtremalService(**service_options).max_cliques_forbidden(
        n, k, forbidden, mode, forbidden_complex=forbidden_complex, time_limit=budget, strategy=strategy
    )


def max_copies(n: int, k: int, target: UniformHypergraph, forbidden, budget: float | None = None, **service_options) -> SearchResult:
    strategy = service_options.pop("strategy", "auto")
    return ExtremalService(**service_options).max_copies(n, k, target, forbidden, time_limit=budget, strategy=strategy)
