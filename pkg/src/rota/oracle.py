"""Brute-force reference implementations used as ground truth in tests.

Nothing here uses the span views, certificates or matching code of the
engines.  Every function works from the raw independence oracle, the
colour classes and plain Python sets, looping over definitions directly.
Budgets are enforced by refusing (``BudgetExceeded``), never by truncating.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable
from dataclasses import dataclass, field

from .errors import BudgetExceeded


@dataclass(frozen=True)
class OracleBudget:
    max_n: int = 4
    max_length: int = 3
    max_ground: int = 10

    def __post_init__(self):
        if min(self.max_n, self.max_length, self.max_ground) < 1:
            raise ValueError("oracle budgets must be positive")


Pair = tuple[int, int]


def _pairs(s: Iterable) -> set[Pair]:
    return {(int(x), int(c)) for x, c in s}


def _is_ris(inst, s: Iterable[Pair]) -> bool:
    s = list(s)
    xs = [x for x, _ in s]
    cs = [c for _, c in s]
    if len(set(xs)) != len(xs) or len(set(cs)) != len(cs):
        return False
    if any(x not in inst.bases[c] for x, c in s):
        return False
    return inst.matroid.is_independent(xs)


def _universe(inst) -> list[Pair]:
    return sorted((x, c) for c, b in enumerate(inst.bases) for x in b)


def _used(fam) -> set[Pair]:
    out: set[Pair] = set()
    for s in fam:
        out |= _pairs(s)
    return out


def _witness_addable(inst, used: set[Pair], s: set[Pair], b: int, target: Pair) -> list[int]:
    """Witnesses y for which ``target`` is (S, b)-addable through a simple swap."""
    out = []
    x, c = target
    for xp, cp in s:
        if cp != c:
            continue
        rest = s - {(xp, cp)}
        for y in sorted(inst.bases[b]):
            if (y, b) in used or (y, b) in s:
                continue
            if _is_ris(inst, rest | {(y, b), target}):
                out.append(y)
    return sorted(set(out))


def brute_force_addable(inst, fam, s: Iterable, b: int) -> set[Pair]:
    """Every (x, c) outside S that is (S, b)-addable, straight from the definition."""
    s = _pairs(s)
    if any(c == b for _, c in s):
        raise ValueError(f"colour {b} appears in S")
    used = _used(fam)
    out = set()
    for t in _universe(inst):
        if t in s:
            continue
        if _is_ris(inst, s | {t}) or _witness_addable(inst, used, s, b, t):
            out.add(t)
    return out


def brute_force_cascade_Q(inst, fam, sequence: list[int], budget: OracleBudget | None = None) -> set[Pair]:
    """Cascade-addable elements for the member sequence S_0..S_{l-1}, by exhaustive chains."""
    budget = budget or OracleBudget()
    ell = len(sequence)
    if ell == 0 or ell > budget.max_length:
        raise BudgetExceeded(f"chain length {ell} outside 1..{budget.max_length}")
    if len(set(sequence)) != ell:
        raise ValueError("sequence members must be distinct")
    members = [_pairs(fam[i]) for i in sequence]
    used = _used(fam)
    universe = _universe(inst)
    outside = set().union(*members)
    found: set[Pair] = set()
    seen: set[tuple] = set()

    def visit(i: int, base: set[Pair], colour: int, colours: frozenset[int]) -> None:
        # base = S_i - (x_i, c_i); colour = c_i; colours = {c_0..c_i}
        key = (i, frozenset(base), colour, colours)
        if key in seen:
            return
        seen.add(key)
        last = i == ell - 1
        pool = universe if last else sorted(members[i + 1])
        for t in pool:
            if t[1] in colours:
                continue
            if last and t in outside:
                continue
            if not _witness_addable(inst, used, base, colour, t):
                continue
            if last:
                found.add(t)
            else:
                visit(i + 1, members[i + 1] - {t}, t[1], colours | {t[1]})

    present = {c for _, c in members[0]}
    for c0 in range(inst.n):
        if c0 not in present:
            visit(0, members[0], c0, frozenset({c0}))
    return found


def transversal_bases(inst) -> list[frozenset[Pair]]:
    """All transversal bases, one element per colour, colours and elements ascending."""
    out = []
    for choice in itertools.product(*(sorted(b) for b in inst.bases)):
        if len(set(choice)) == inst.n and inst.matroid.is_independent(choice):
            out.append(frozenset((x, c) for c, x in enumerate(choice)))
    return out


@dataclass
class ExactResult:
    k: int
    bases: list[list[Pair]] = field(default_factory=list)


def exact_max_decomposition(inst, budget: OracleBudget | None = None) -> ExactResult:
    """Maximum number of pairwise disjoint transversal bases, by backtracking."""
    budget = budget or OracleBudget()
    if inst.n > budget.max_n:
        raise BudgetExceeded(f"n={inst.n} exceeds the exact-search budget {budget.max_n}")
    cands = transversal_bases(inst)
    # Every transversal basis uses colour 0 once, so at most n disjoint ones
    # exist; grouping by the colour-0 element lets the search try each group once.
    groups: dict[int, list[frozenset[Pair]]] = {}
    for t in cands:
        x0 = next(x for x, c in t if c == 0)
        groups.setdefault(x0, []).append(t)
    keys = sorted(groups)
    best: list[frozenset[Pair]] = []
    chosen: list[frozenset[Pair]] = []

    def search(j: int, used: frozenset[Pair]) -> bool:
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
            if len(best) == inst.n:
                return True
        if len(chosen) + (len(keys) - j) <= len(best):
            return False
        for gi in range(j, len(keys)):
            for t in groups[keys[gi]]:
                if used.isdisjoint(t):
                    chosen.append(t)
                    if search(gi + 1, used | t):
                        return True
                    chosen.pop()
        return False

    search(0, frozenset())
    return ExactResult(len(best), [sorted(t, key=lambda p: p[1]) for t in best])


@dataclass
class AxiomReport:
    ground_size: int
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def matroid_axiom_check(m, budget: OracleBudget | None = None, limit: int = 20) -> AxiomReport:
    """Exhaustively test the empty-set, hereditary and augmentation axioms.

    ``m`` needs only ``ground_size`` and ``is_independent``; at most ``limit``
    violations are listed.
    """
    budget = budget or OracleBudget()
    g = m.ground_size
    if g > budget.max_ground:
        raise BudgetExceeded(f"ground size {g} exceeds the axiom-check budget {budget.max_ground}")
    indep = [m.is_independent([i for i in range(g) if mask >> i & 1]) for mask in range(1 << g)]
    problems: list[str] = []

    def report(msg: str) -> bool:
        problems.append(msg)
        return len(problems) >= limit

    def members(mask: int) -> list[int]:
        return [i for i in range(g) if mask >> i & 1]

    if not indep[0]:
        report("the empty set is not independent")
    for a in range(1 << g):
        if not indep[a]:
            continue
        for i in members(a):
            if not indep[a & ~(1 << i)] and report(f"{members(a)} independent but drops {i} to a dependent set"):
                return AxiomReport(g, problems)
    by_size: dict[int, list[int]] = {}
    for mask in range(1 << g):
        if indep[mask]:
            by_size.setdefault(bin(mask).count("1"), []).append(mask)
    for sa, a_list in by_size.items():
        for sb, b_list in by_size.items():
            if sa <= sb:
                continue
            for a in a_list:
                for b in b_list:
                    if not any(indep[b | (1 << i)] for i in members(a & ~b)):
                        if report(f"cannot augment {members(b)} from {members(a)}"):
                            return AxiomReport(g, problems)
    return AxiomReport(g, problems)


def reference_gf_rank(vectors: list[list[int]], p: int) -> int:
    """Rank over GF(p) of a list of vectors by plain-Python row reduction."""
    rows = [[v % p for v in vec] for vec in vectors]
    rank = 0
    width = len(rows[0]) if rows else 0
    for col in range(width):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], p - 2, p)
        rows[rank] = [v * inv % p for v in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                factor = rows[r][col]
                rows[r] = [(v - factor * w) % p for v, w in zip(rows[r], rows[rank])]
        rank += 1
    return rank
