"""
Project: Turán Workbench - exact simplicial Turán computations at desk scale
File: tools/formulas.py
Description:
    Closed-form evaluators used as comparison targets for enumeration and search.
    Every value is an exact Python integer and carries a term breakdown, so the
    CLI can show where a number comes from.

    Binomials outside 0 <= r <= n evaluate to 0, which keeps the double sums total.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Iterable

from core.errors import InvalidStructureError
from tools.constructions import turan_parts


@dataclass(frozen=True)
class FormulaValue:
    value: int
    terms: list[tuple[str, int]] = field(default_factory=list)

    @classmethod
    def of_terms(cls, terms: Iterable[tuple[str, int]]) -> "FormulaValue":
        terms = list(terms)
        return cls(sum(v for _, v in terms), terms)


def binom(n: int, r: int) -> int:
    if r < 0 or n < 0 or r > n:
        return 0
    return comb(n, r)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InvalidStructureError(message)


def low_sets(n: int, k: int) -> int:
    """Number of subsets of [n] of size < k (the empty set included)."""
    return sum(binom(n, r) for r in range(k))


def trivial_lower_bound(n: int, k: int, exclplus: int) -> FormulaValue:
    _require(n >= k >= 2 and exclplus >= 0, f"trivial_lower_bound({n},{k},{exclplus}) out of range")
    terms = [("ex_cl+", exclplus)] + [(f"C({n},{r})", binom(n, r)) for r in range(k)]
    return FormulaValue.of_terms(terms)


def _star_double_sum(n: int, k: int, ell: int) -> list[tuple[str, int]]:
    terms = []
    for r in range(1, ell + 1):
        for i in range(1, r + 1):
            value = binom(ell, r) * binom(n - ell, k - i)
            terms.append((f"C({ell},{r})*C({n - ell},{k - i})", value))
    return terms


def matching_clique_formula(n: int, k: int, t: int) -> FormulaValue:
    """sum_{r=1}^{t-1} sum_{i=1}^{r} C(t-1,r) C(n-t+1,k-i); zero at t = 1."""
    _require(k >= 2 and t >= 1, f"matching_clique_formula({n},{k},{t}) out of range")
    return FormulaValue.of_terms(_star_double_sum(n, k, t - 1))


def star_clique_count(n: int, k: int, ell: int) -> FormulaValue:
    """Cliques of order >= k in S^k_{n,l}: the matching double sum with t - 1 = l."""
    _require(1 <= ell <= n, f"star_clique_count({n},{k},{ell}) out of range")
    return FormulaValue.of_terms(_star_double_sum(n, k, ell))


def star_complete_count(n: int, k: int, ell: int, r: int) -> FormulaValue:
    """
    r-cliques of S^k_{n,l} (r >= k): r-sets T with |T \\ A| <= k - 1, i.e.
    sum_{j <= k-1} C(l, r-j) C(n-l, j).
    """
    _require(r >= k >= 2 and 1 <= ell <= n, f"star_complete_count({n},{k},{ell},{r}) out of range")
    terms = [(f"C({ell},{r - j})*C({n - ell},{j})", binom(ell, r - j) * binom(n - ell, j)) for j in range(k)]
    return FormulaValue.of_terms(terms)


def disjoint_gens_formula(n: int, k: int, t: int) -> FormulaValue:
    match = matching_clique_formula(n, k, t)
    terms = [("matching", match.value)] + [(f"C({n},{r})", binom(n, r)) for r in range(k)]
    return FormulaValue.of_terms(terms)


def asymptrivial_leading(n: int, k: int, t: int) -> FormulaValue:
    """sum_{r=0}^{t-1} C(t-1,r) C(n,k-1) = 2^{t-1} C(n,k-1)."""
    _require(k >= 3 and t >= 2, f"asymptrivial_leading({n},{k},{t}) out of range")
    base = binom(n, k - 1)
    terms = [(f"C({t - 1},{r})*C({n},{k - 1})", binom(t - 1, r) * base) for r in range(t)]
    return FormulaValue.of_terms(terms)


def cliquelin_leading(n: int, k: int, t: int) -> FormulaValue:
    """The same sum started at r = 1; differs from asymptrivial_leading by C(n,k-1)."""
    _require(k >= 3 and t >= 2, f"cliquelin_leading({n},{k},{t}) out of range")
    base = binom(n, k - 1)
    return FormulaValue.of_terms(
        (f"C({t - 1},{r})*C({n},{k - 1})", binom(t - 1, r) * base) for r in range(1, t)
    )


def kmv_ell(t: int) -> int:
    _require(t >= 4, f"kmv_ell({t}) needs t >= 4")
    return (t - 1) // 2


def kmv_peel_bound(n: int, k: int, t: int, r: int) -> FormulaValue:
    """Upper bound on r-cliques destroyed while peeling: C(l, r-k+1) C(n, k-1), l = floor((t-1)/2)."""
    ell = kmv_ell(t)
    return FormulaValue.of_terms([(f"C({ell},{r - k + 1})*C({n},{k - 1})", binom(ell, r - k + 1) * binom(n, k - 1))])


def _elementary_symmetric(values: list[int]) -> list[int]:
    """e_0..e_m of `values`."""
    e = [1] + [0] * len(values)
    for x in values:
        for s in range(len(values), 0, -1):
            e[s] += e[s - 1] * x
    return e


def zykov_count(n: int, t: int, mode: str) -> FormulaValue:
    """Cliques of T(n,t): e_s of the part sizes, summed over s >= 1 (all) or s >= 2 (geq_2)."""
    _require(t >= 1, f"zykov_count needs t >= 1 (got {t})")
    if mode not in ("all", "geq_2"):
        raise InvalidStructureError(f"unknown zykov mode {mode!r}")
    e = _elementary_symmetric(turan_parts(n, t))
    start = 1 if mode == "all" else 2
    return FormulaValue.of_terms((f"N(K_{s})", e[s]) for s in range(start, len(e)) if e[s])


def lb_item2(n: int, layer_values: dict[int, int]) -> FormulaValue:
    """max over s of (exclplus_s + sum_{r<s} C(n,r)); `layer_values` maps s -> exclplus_s."""
    _require(bool(layer_values), "lb_item2 needs at least one layer value")
    best_s = max(sorted(layer_values), key=lambda s: layer_values[s] + low_sets(n, s))
    return FormulaValue.of_terms([(f"ex_cl+_{best_s}", layer_values[best_s])] + [(f"C({n},{r})", binom(n, r)) for r in range(best_s)])


# Registry used by the `formula` command: name -> (callable, parameter names).
REGISTRY = {
    "trivial_lower_bound": (trivial_lower_bound, ("n", "k", "exclplus")),
    "matching_clique_formula": (matching_clique_formula, ("n", "k", "t")),
    "star_clique_count": (star_clique_count, ("n", "k", "l")),
    "star_complete_count": (star_complete_count, ("n", "k", "l", "r")),
    "disjoint_gens_formula": (disjoint_gens_formula, ("n", "k", "t")),
    "asymptrivial_leading": (asymptrivial_leading, ("n", "k", "t")),
    "cliquelin_leading": (cliquelin_leading, ("n", "k", "t")),
    "kmv_ell": (kmv_ell, ("t",)),
    "kmv_peel_bound": (kmv_peel_bound, ("n", "k", "t", "r")),
    "zykov_count": (zykov_count, ("n", "t", "mode")),
    "binom": (binom, ("n", "r")),
}
