"""
Project: Turán Workbench - exact simplicial Turán computations at desk scale
File: tools/constructions.py
Description:
    Builders for every named hypergraph and complex the workbench works with.

    Key Capabilities:
    1. Uniform families: complete, matching, linear cycles/paths, tight paths,
       stars S^k_{n,l}, Turán graphs and t-blow-ups.
    2. Named complexes: F1..F4, CaseIV(k), M32Plus(G), Jump/JumpBase,
       DisjointCliquePlusEdge, plus the BaberTalbotH and K222 3-graphs.
    3. PatternName: parses strings such as "Star(6,3,1)" or "BlowUp(BaberTalbotH,2)"
       so the CLI and suite definitions can refer to patterns by name.
    4. The greedy C4-free graph and the F4 lower-bound complex built on it.

    Vertices are 0-based; patterns usually written with 1-based labels are shifted.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from itertools import combinations, product
from typing import Union

from core.canonical import canonical_form
from core.errors import InvalidStructureError, UnknownPatternError
from core.hypergraph import Complex, GeneratingSet, UniformHypergraph, downward_closure
from core.vertex_set import iter_bits, mask_of

logger = logging.getLogger("Constructions")

Built = Union[UniformHypergraph, Complex]


def _edges(n: int, k: int, edge_lists) -> UniformHypergraph:
    return UniformHypergraph(n, k, frozenset(mask_of(e, n) for e in edge_lists))


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InvalidStructureError(message)


# ==========================================
# Uniform families
# ==========================================

def complete(k: int, t: int) -> UniformHypergraph:
    _require(k >= 2 and t >= k, f"complete({k},{t}) needs t >= k >= 2")
    return _edges(t, k, combinations(range(t), k))


def matching(k: int, t: int) -> UniformHypergraph:
    _require(k >= 2 and t >= 1, f"matching({k},{t}) needs k >= 2, t >= 1")
    return _edges(k * t, k, (range(i * k, (i + 1) * k) for i in range(t)))


def linear_cycle(k: int, t: int) -> UniformHypergraph:
    """t edges on t(k-1) vertices; edge i starts at i(k-1) and wraps around."""
    _require(k >= 2 and t >= 3, f"linear_cycle({k},{t}) needs k >= 2, t >= 3")
    n = t * (k - 1)
    return _edges(n, k, ([(i * (k - 1) + j) % n for j in range(k)] for i in range(t)))


def linear_path(k: int, t: int) -> UniformHypergraph:
    _require(k >= 2 and t >= 1, f"linear_path({k},{t}) needs k >= 2, t >= 1")
    n = t * (k - 1) + 1
    return _edges(n, k, (range(i * (k - 1), i * (k - 1) + k) for i in range(t)))


def tight_path(k: int, t: int) -> UniformHypergraph:
    _require(k >= 2 and t >= 1, f"tight_path({k},{t}) needs k >= 2, t >= 1")
    return _edges(k + t - 1, k, (range(i, i + k) for i in range(t)))


def star(n: int, k: int, ell: int) -> UniformHypergraph:
    """S^k_{n,l}: every k-subset of [n] meeting A = {0, ..., l-1}."""
    _require(k >= 2 and n >= k and 1 <= ell <= n, f"star({n},{k},{ell}) out of range")
    core = (1 << ell) - 1
    edges = []
    for combo in combinations(range(n), k):
        m = mask_of(combo)
        if m & core:
            edges.append(m)
    return UniformHypergraph(n, k, frozenset(edges))


def turan_parts(n: int, t: int) -> list[int]:
    """Balanced part sizes of T(n,t), larger parts first."""
    _require(t >= 1 and n >= 0, f"turan graph parameters ({n},{t}) out of range")
    base, extra = divmod(n, t)
    return [base + 1 if i < extra else base for i in range(t)]


def turan_graph(n: int, t: int) -> UniformHypergraph:
    part_of = []
    for index, size in enumerate(turan_parts(n, t)):
        part_of.extend([index] * size)
    return _edges(n, 2, ((u, v) for u, v in combinations(range(n), 2) if part_of[u] != part_of[v]))


def blow_up(h: UniformHypergraph, t: int) -> UniformHypergraph:
    """H(t): vertex v becomes the independent set {v*t, ..., v*t+t-1}."""
    _require(t >= 1, f"blow-up factor {t} must be >= 1")
    n = h.n * t
    edges = set()
    for e in h.edges:
        groups = [range(v * t, v * t + t) for v in iter_bits(e)]
        for choice in product(*groups):
            edges.add(mask_of(choice, n))
    return UniformHypergraph(n, h.k, frozenset(edges))


# ==========================================
# Named complexes
# ==========================================

_TRIPLES = [(0, 1, 2), (3, 4, 5)]

# Crossing graphs between the triples {0,1,2} and {3,4,5}. The three standard
# labelings (F2, F3, F4) are fixed here; the rest are resolved lazily to the
# lexicographically least placement.
_CROSSING_FIXED = {
    "K13": [(0, 3), (0, 4), (0, 5)],
    "C4": [(0, 3), (0, 4), (1, 3), (1, 4)],
    "C6": [(0, 3), (0, 5), (1, 3), (1, 4), (2, 4), (2, 5)],
}

# Abstract shapes of the remaining crossing graphs, as edge lists on their own vertices.
_CROSSING_SHAPES = {
    "K2": [(0, 1)],
    "2K2": [(0, 1), (2, 3)],
    "P2uP1": [(0, 1), (1, 2), (3, 4)],
    "2P2": [(0, 1), (1, 2), (3, 4), (4, 5)],
    "P3": [(0, 1), (1, 2), (2, 3)],
    "P4": [(0, 1), (1, 2), (2, 3), (3, 4)],
    "P5": [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)],
}

_CROSSING_ALIASES = {"P2+P1": "P2uP1", "P2|P1": "P2uP1", "K1,3": "K13", "K_{1,3}": "K13"}


def _compact(n: int, edge_masks) -> UniformHypergraph:
    """Relabel the support onto 0..s-1 (order preserving)."""
    support = 0
    for e in edge_masks:
        support |= e
    index = {v: i for i, v in enumerate(iter_bits(support))}
    moved = []
    for e in edge_masks:
        moved.append(mask_of(index[v] for v in iter_bits(e)))
    return UniformHypergraph(support.bit_count(), 2, frozenset(moved))


def crossing_graph(tag: str) -> list[tuple[int, int]]:
    """Pairs between {0,1,2} and {3,4,5} realising the crossing graph `tag`."""
    tag = _CROSSING_ALIASES.get(tag, tag)
    if tag in _CROSSING_FIXED:
        return list(_CROSSING_FIXED[tag])
    shape = _CROSSING_SHAPES.get(tag)
    if shape is None:
        raise UnknownPatternError(f"unknown crossing graph {tag!r}")
    want = canonical_form(_compact(6, [mask_of(p) for p in shape]))
    cross = [(a, b) for a in range(3) for b in range(3, 6)]
    for chosen in combinations(cross, len(shape)):
        if canonical_form(_compact(6, [mask_of(p) for p in chosen])) == want:
            return list(chosen)
    raise InvalidStructureError(f"crossing graph {tag} does not fit inside K33")


def m32_plus(tag: str) -> Complex:
    return downward_closure(GeneratingSet.from_edges(6, _TRIPLES + crossing_graph(tag)))


def f1() -> Complex:
    return downward_closure(GeneratingSet.from_edges(5, [(0, 1, 2), (0, 3, 4), (2, 3), (2, 4)]))


def case_iv(k: int) -> Complex:
    """{0..k-1}, {0, k..2k-3}, {1, k..2k-3} on 2k-2 vertices."""
    _require(k >= 3, f"CaseIV({k}) needs k >= 3")
    tail = list(range(k, 2 * k - 2))
    gens = [tuple(range(k)), tuple([0] + tail), tuple([1] + tail)]
    return downward_closure(GeneratingSet.from_edges(2 * k - 2, gens))


def baber_talbot_h() -> UniformHypergraph:
    return _edges(6, 3, [(0, 1, 2), (0, 1, 3), (2, 3, 4), (0, 4, 5)])


def jump_base(k: int, t: int) -> Complex:
    return downward_closure(tight_path(k, t))


def jump(k: int, t: int) -> Complex:
    """D(TP^k_t) plus the (2t-2)-edge made of its first and last t-1 vertices."""
    _require(k >= 2 * t - 2 >= 2, f"Jump({k},{t}) needs k >= 2t-2 >= 2")
    path = tight_path(k, t)
    last = path.n - 1
    extra = list(range(t - 1)) + list(range(last - t + 2, last + 1))
    gens = [tuple(iter_bits(e)) for e in path.edges] + [tuple(extra)]
    return downward_closure(GeneratingSet.from_edges(path.n, gens))


def disjoint_clique_plus_edge(k: int, t: int, q: int) -> Complex:
    """Graph K_{t+1} on 0..t, a k-edge right after it, singletons up to q vertices."""
    _require(k >= 2 and k - 1 <= t <= q - k - 1, f"DisjointCliquePlusEdge({k},{t},{q}) out of range")
    gens = [pair for pair in combinations(range(t + 1), 2)]
    gens.append(tuple(range(t + 1, t + 1 + k)))
    return downward_closure(GeneratingSet.from_edges(q, gens))


F_TABLE = {
    "F1": lambda: f1(),
    "F2": lambda: m32_plus("K13"),
    "F3": lambda: m32_plus("C4"),
    "F4": lambda: m32_plus("C6"),
}


def greedy_c4_free_graph(n_v: int) -> UniformHypergraph:
    """Add pairs of [n_v] in lexicographic order unless a path u-x-y-v already exists."""
    adj = [0] * n_v
    edges = []
    for u, v in combinations(range(n_v), 2):
        closes = False
        for x in iter_bits(adj[u]):
            if adj[x] & adj[v] & ~(1 << u):
                closes = True
                break
        if closes:
            continue
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        edges.append((u, v))
    return _edges(n_v, 2, edges)


def f4_lower_bound_construction(n_v: int, n_w: int) -> Complex:
    """
    Triples {u, v, w} for every edge uv of the greedy C4-free graph on V = [0, n_v)
    and every w in W = [n_v, n_v + n_w).
    """
    _require(n_v >= 1 and n_w >= 1, "F4 construction needs nV, nW >= 1")
    g = greedy_c4_free_graph(n_v)
    n = n_v + n_w
    gens = []
    for e in g.edges:
        for w in range(n_v, n):
            gens.append(e | (1 << w))
    logger.info(f"F4 construction: |E(G)|={len(g.edges)} on {n_v} vertices, {len(gens)} triples")
    return Complex(GeneratingSet(n, frozenset(gens)))


# ==========================================
# Pattern names
# ==========================================

@dataclass(frozen=True)
class PatternName:
    """Tag plus parameters; parameters are ints or nested PatternNames / crossing tags."""

    tag: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.tag
        return f"{self.tag}(" + ",".join(str(a) for a in self.args) + ")"


_CALL = re.compile(r"^\s*([A-Za-z][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*$", re.S)


def _split_args(text: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return [p.strip() for p in parts if p.strip()]


def parse_pattern_name(text: str) -> PatternName:
    if text.strip().startswith("M32Plus(") and text.strip().endswith(")"):
        inner = text.strip()[len("M32Plus("):-1].strip()
        return PatternName("M32Plus", (inner,))
    match = _CALL.match(text)
    if not match:
        raise UnknownPatternError(f"cannot parse pattern name {text!r}")
    tag, body = match.group(1), match.group(2)
    args: list = []
    for raw in _split_args(body or ""):
        if re.fullmatch(r"-?\d+", raw):
            args.append(int(raw))
        else:
            args.append(parse_pattern_name(raw))
    return PatternName(tag, tuple(args))


def _ints(name: PatternName, count: int) -> tuple[int, ...]:
    if len(name.args) != count or not all(isinstance(a, int) for a in name.args):
        raise UnknownPatternError(f"{name.tag} expects {count} integer parameters, got {name}")
    return name.args


_UNIFORM_BUILDERS = {
    "Complete": (2, complete),
    "Matching": (2, matching),
    "LinearPath": (2, linear_path),
    "LinearCycle": (2, linear_cycle),
    "TightPath": (2, tight_path),
    "Star": (3, star),
    "TuranGraph": (2, turan_graph),
}

_COMPLEX_BUILDERS = {
    "CaseIV": (1, case_iv),
    "Jump": (2, jump),
    "JumpBase": (2, jump_base),
    "DisjointCliquePlusEdge": (3, disjoint_clique_plus_edge),
}


def build(name: PatternName | str) -> Built:
    """Build the named object: a UniformHypergraph or a Complex."""
    if isinstance(name, str):
        name = parse_pattern_name(name)
    tag = name.tag
    if tag in _UNIFORM_BUILDERS:
        arity, fn = _UNIFORM_BUILDERS[tag]
        return fn(*_ints(name, arity))
    if tag in _COMPLEX_BUILDERS:
        arity, fn = _COMPLEX_BUILDERS[tag]
        return fn(*_ints(name, arity))
    if tag in F_TABLE:
        _ints(name, 0)
        return F_TABLE[tag]()
    if tag == "BaberTalbotH":
        _ints(name, 0)
        return baber_talbot_h()
    if tag == "K222":
        _ints(name, 0)
        return blow_up(complete(3, 3), 2)
    if tag == "M32Plus":
        if len(name.args) != 1:
            raise UnknownPatternError("M32Plus expects one crossing-graph tag")
        return m32_plus(str(name.args[0]))
    if tag == "BlowUp":
        if len(name.args) != 2 or not isinstance(name.args[1], int):
            raise UnknownPatternError("BlowUp expects (<name>, t)")
        base = build(name.args[0])
        if not isinstance(base, UniformHypergraph):
            raise InvalidStructureError("BlowUp needs a uniform base hypergraph")
        return blow_up(base, name.args[1])
    raise UnknownPatternError(f"unknown pattern {tag!r}")


def named_complex(name: PatternName | str) -> Built:
    """
    The named complex (uniform names are closed downward); BaberTalbotH and K222
    stay uniform since they are only ever used as forbidden 3-graphs.
    """
    built = build(name)
    tag = (parse_pattern_name(name) if isinstance(name, str) else name).tag
    if isinstance(built, UniformHypergraph) and tag not in ("BaberTalbotH", "K222", "BlowUp"):
        return downward_closure(built)
    return built


def build_complex(name: PatternName | str) -> Complex:
    built = build(name)
    return built if isinstance(built, Complex) else downward_closure(built)
