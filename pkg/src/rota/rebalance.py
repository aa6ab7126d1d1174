"""Concentrating missing colours so that cascades have a good starting point.

A round gives every non-transversal member a distinct missing colour
``b(S)``, builds a digraph with an arc ``S_1 -> S_0`` whenever ``S_1`` holds
more than ``E`` elements that are ``(S_0, b(S_0))``-addable, and then moves
``E + 1`` elements out of the centre of each vertex-disjoint out-star.  Every
move is a transfer, possibly with a simple swap, so volume never changes.

The counting thresholds behind the constants only bind for large ``n``;
assertions derived from them are checked only when they are at least one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ContractError, TheoremViolation
from .matching import max_matching
from .rainbow import RIS, Coloured, Family, Instance, is_ris
from .swaps import Certificate, FreeAddable, apply_free, enumerate_addable, many_good_dichotomy


def _gap(eps: float) -> float:
    return 1.0 / (1.0 - eps) - 1.0 - eps / 2.0


def compute_C(eps: float) -> float:
    """Smallest C (plus a hair of slack) with the cascade growth inequality for all l >= 1.

    The inequality ``C r^(l-1) / (1-eps) - l - 1 >= C r^l`` with
    ``r = 1 + eps/2`` rearranges to ``C >= (l+1) / (g r^(l-1))`` where
    ``g = 1/(1-eps) - 1 - eps/2 > 0``.  The right side increases while
    ``l < 2/eps - 1`` and decreases afterwards, so a finite scan finds its
    maximum.
    """
    if not 0 < eps < 1:
        raise ContractError("eps must lie strictly between 0 and 1")
    g, r = _gap(eps), 1.0 + eps / 2.0
    top = math.ceil(2.0 / eps) + 2
    best = max((ell + 1) / (g * r ** (ell - 1)) for ell in range(1, top + 1))
    return best * (1.0 + 1e-9)


def growth_condition_holds(eps: float, C: float, ell: int) -> bool:
    r = 1.0 + eps / 2.0
    lhs = C * r ** (ell - 1) / (1.0 - eps) - ell - 1
    rhs = C * r**ell
    return lhs >= rhs


@dataclass(frozen=True)
class RebalanceConstants:
    eps: float
    C: float
    D: float
    n: int
    M: tuple[float, ...]

    @property
    def e_cap(self) -> int:
        """Largest integer strictly below D."""
        return math.ceil(self.D) - 1

    def m(self, e: int) -> float:
        return (self.eps / (4.0 * self.D**2)) ** e * self.n


def compute_constants(eps: float, n: int) -> RebalanceConstants:
    C = compute_C(eps)
    D = 2.0 * C + 4.0
    M = tuple((eps / (4.0 * D**2)) ** e * n for e in range(math.ceil(D) + 1))
    return RebalanceConstants(eps, C, D, n, M)


def missing_count(inst: Instance, s: RIS) -> int:
    return inst.n - len(s)


@dataclass(frozen=True)
class Assignment:
    family: Family
    colours: dict[int, int]
    swaps: int = 0


@dataclass(frozen=True)
class VolumeIncrease:
    family: Family
    member: int
    certificate: Certificate


def assign_distinct_missing_colours(inst: Instance, fam: Family) -> Assignment | VolumeIncrease:
    """Give each member a distinct colour that every non-transversal member lacks."""
    n, f = inst.n, len(fam)
    if 2 * f > n:
        raise ContractError(f"distinct missing colours need f <= n/2, got f={f}, n={n}")
    taken: dict[int, int] = {}
    swaps = 0
    for i in range(f):
        s = fam[i]
        used = set(taken.values())
        if len(s) == n:
            taken[i] = min(c for c in range(n) if c not in used)
            continue
        missing = sorted(set(range(n)) - s.colours())
        fresh = [c for c in missing if c not in used]
        if fresh:
            taken[i] = fresh[0]
            continue
        c = missing[0]
        outcome = many_good_dichotomy(inst, fam, i, c)
        if isinstance(outcome, FreeAddable):
            cert = outcome.certificate
            return VolumeIncrease(apply_free(fam, i, cert), i, cert)
        options = [sc for sc in outcome.colours if sc.colour not in used]
        if not options:
            raise TheoremViolation(f"member {i}: every swappable colour is already assigned")
        sc = options[0]
        fam = fam.replace({i: s.minus(sc.removed).plus((sc.witness, c))})
        taken[i] = sc.colour
        swaps += 1
    return Assignment(fam, taken, swaps)


def compute_E(inst: Instance, fam: Family, consts: RebalanceConstants) -> int:
    """Largest E <= e_cap with at least max(M_E, 1) members missing E or more colours."""
    missing = [missing_count(inst, s) for s in fam]
    best = 0
    for e in range(consts.e_cap + 1):
        if sum(1 for m in missing if m >= e) >= max(consts.m(e), 1.0):
            best = e
    return best


@dataclass
class MissingDigraph:
    f: int
    E: int
    arcs: dict[tuple[int, int], list[Certificate]] = field(default_factory=dict)

    def out_neighbours(self, v: int) -> list[int]:
        return sorted(t for s, t in self.arcs if s == v)

    def in_degree(self, v: int) -> int:
        return sum(1 for _, t in self.arcs if t == v)


@dataclass(frozen=True)
class FoundPair:
    family: Family
    s0: int
    s1: int
    colour: int
    diagnostics: list = field(default_factory=list)


@dataclass(frozen=True)
class VolumeIncreased:
    family: Family
    diagnostics: list = field(default_factory=list)


@dataclass(frozen=True)
class FoundS0:
    family: Family
    s0: int
    diagnostics: list = field(default_factory=list)


@dataclass(frozen=True)
class NoProgress:
    family: Family
    diagnostics: list = field(default_factory=list)


def _addable_by_owner(
    inst: Instance, fam: Family, s0: int, b: int
) -> tuple[Certificate | None, dict[int, list[Certificate]]]:
    grouped: dict[int, list[Certificate]] = {}
    for cert in enumerate_addable(inst, fam, s0, b):
        owner = fam.owner(cert.target)
        if owner is None:
            return cert, {}
        grouped.setdefault(owner, []).append(cert)
    return None, grouped


def build_missing_digraph(
    inst: Instance, fam: Family, E: int, colours: dict[int, int], consts: RebalanceConstants | None = None
) -> MissingDigraph | FoundPair | VolumeIncreased:
    """Arcs ``S_1 -> S_0`` for members ``S_0`` missing at least ``max(E, 1)`` colours."""
    g = MissingDigraph(len(fam), E)
    n, f = inst.n, len(fam)
    for s0 in range(f):
        if missing_count(inst, fam[s0]) < max(E, 1):
            continue
        b = colours[s0]
        free, grouped = _addable_by_owner(inst, fam, s0, b)
        if free is not None:
            return VolumeIncreased(apply_free(fam, s0, free), [{"action": "free-addable", "member": s0}])
        for s1, certs in grouped.items():
            if consts is not None and len(certs) >= consts.D:
                return FoundPair(fam, s0, s1, b)
            if len(certs) >= E + 1:
                g.arcs[(s1, s0)] = certs
        if consts is not None and E >= 1 and 2 * f <= (1 - consts.eps) * n:
            bound = consts.eps * n / consts.D
            if bound >= 1 and g.in_degree(s0) < bound:
                raise TheoremViolation(f"member {s0} has in-degree {g.in_degree(s0)} < {bound:.3f}")
    return g


@dataclass(frozen=True)
class OutStar:
    centre: int
    leaves: tuple[int, ...]


def find_out_stars(g: MissingDigraph, E: int, want: int | None = None) -> list[OutStar]:
    """Greedy vertex-disjoint (E+1)-out-stars, scanning centres by index."""
    taken: set[int] = set()
    stars: list[OutStar] = []
    for v in range(g.f):
        if want is not None and len(stars) >= want:
            break
        if v in taken:
            continue
        leaves = [u for u in g.out_neighbours(v) if u not in taken and u != v]
        if len(leaves) >= E + 1:
            star = OutStar(v, tuple(leaves[: E + 1]))
            stars.append(star)
            taken.update((v,) + star.leaves)
    return stars


@dataclass(frozen=True)
class StarResult:
    family: Family
    moved: tuple[tuple[int, Coloured], ...]
    partial: bool
    matched: int = 0


def apply_out_star(inst: Instance, fam: Family, star: OutStar, colours: dict[int, int]) -> StarResult:
    """Move distinct centre elements into each leaf of the star."""
    centre = fam[star.centre]
    options: dict[int, dict[Coloured, Certificate]] = {}
    for leaf in star.leaves:
        b = colours[leaf]
        if b in fam[leaf].colours():
            options[leaf] = {}
            continue
        options[leaf] = {
            c.target: c for c in enumerate_addable(inst, fam, leaf, b) if c.target in centre
        }
    pick = max_matching({leaf: sorted(opts) for leaf, opts in options.items()}, list(star.leaves))
    # Swap certificates of different leaves may share a witness, so the moves are
    # applied one at a time against the current family, keeping the matched
    # target when it is still addable and otherwise taking any unreserved one.
    out = fam
    moved = []
    for leaf in star.leaves:
        if leaf not in pick:
            continue
        reserved = {pick[l] for l in star.leaves if l in pick and l != leaf}
        current = {
            c.target: c
            for c in enumerate_addable(inst, out, leaf, colours[leaf])
            if c.target in out[star.centre] and c.target not in reserved
        }
        target = pick[leaf] if pick[leaf] in current else min(current, default=None)
        if target is None:
            continue
        cert = current[target]
        out = out.replace({leaf: cert.apply(out[leaf]), star.centre: out[star.centre].minus(target)})
        moved.append((leaf, target))
    if out.volume != fam.volume:
        raise TheoremViolation("out-star transfer changed the volume")
    for m in (star.centre,) + star.leaves:
        if not is_ris(inst, out[m]):
            raise TheoremViolation(f"out-star transfer broke member {m}: {out[m]!r}")
    return StarResult(out, tuple(moved), len(moved) < len(star.leaves), len(pick))


def many_missing_step(
    inst: Instance, fam: Family, consts: RebalanceConstants, max_rounds: int | None = None
) -> VolumeIncreased | FoundS0 | FoundPair | NoProgress:
    """Run colour-concentration rounds until one of the outcomes fires."""
    rounds = math.ceil(consts.D) + 1 if max_rounds is None else max_rounds
    diagnostics: list[dict] = []
    seen = {fam.state_key()}
    for rnd in range(rounds):
        worst = max(range(len(fam)), key=lambda i: (missing_count(inst, fam[i]), -i), default=None)
        if worst is not None and missing_count(inst, fam[worst]) >= consts.D:
            return FoundS0(fam, worst, diagnostics)
        assigned = assign_distinct_missing_colours(inst, fam)
        if isinstance(assigned, VolumeIncrease):
            diagnostics.append({"round": rnd, "action": "volume-increase", "member": assigned.member})
            return VolumeIncreased(assigned.family, diagnostics)
        fam = assigned.family
        E = compute_E(inst, fam, consts)
        g = build_missing_digraph(inst, fam, E, assigned.colours, consts)
        if isinstance(g, VolumeIncreased):
            return VolumeIncreased(g.family, diagnostics + g.diagnostics)
        if isinstance(g, FoundPair):
            return FoundPair(g.family, g.s0, g.s1, g.colour, diagnostics)
        stars = find_out_stars(g, E)
        record = {"round": rnd, "E": E, "arcs": len(g.arcs), "stars": len(stars), "partial": 0}
        diagnostics.append(record)
        if not stars:
            record["outcome"] = "no-stars"
            return NoProgress(fam, diagnostics)
        for star in stars:
            res = apply_out_star(inst, fam, star, assigned.colours)
            record["partial"] += int(res.partial)
            fam = res.family
        key = fam.state_key()
        if key in seen:
            record["outcome"] = "repeated-state"
            return NoProgress(fam, diagnostics)
        seen.add(key)
    worst = max(range(len(fam)), key=lambda i: (missing_count(inst, fam[i]), -i), default=None)
    if worst is not None and missing_count(inst, fam[worst]) >= consts.D:
        return FoundS0(fam, worst, diagnostics)
    return NoProgress(fam, diagnostics)
