"""Cascading swaps along a sequence of family members.

A chain ``S_0, ..., S_{l-1}`` with freeing colours ``c_0, ..., c_{l-1}``
moves ``(x_i, c_i)`` from ``S_i`` into ``S_{i-1}`` after a simple swap that
brings the unused witness ``(y_i, c_i)`` into ``S_i``; at the end the target
``(x_l, c_l)`` can be added to the rewritten ``S_{l-1}``.  ``Q(S_0..S_{l-1})``
is the set of such targets outside the chain members; the engine stores one
executable chain per target.

Beyond the first level the engine builds ``Q`` constructively: for each
``(x_l, c_l)`` in ``S_l`` that is already a target, it looks at the witness
injections of ``S_l`` into every colour that is swappable for
``(S_l - (x_l, c_l), c_l)``.  That is a sound subset of the full ``Q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ContractError, StaleCertificateError, TheoremViolation
from .rainbow import RIS, Coloured, Family, Instance, is_ris
from .swaps import (
    Certificate,
    build_witness_injection,
    find_free_addable,
    swap_certificates,
    swappable_colours,
)


@dataclass(frozen=True)
class Chain:
    """One executable certificate that ``target`` is cascade-addable."""

    members: tuple[int, ...]
    colours: tuple[int, ...]
    transfers: tuple[Coloured, ...]
    witnesses: tuple[int, ...]
    target: Coloured
    version: int

    @property
    def length(self) -> int:
        return len(self.members)

    def sort_key(self) -> tuple:
        return (self.length, self.colours, self.witnesses, self.transfers, self.members)

    def witness_pairs(self) -> frozenset[Coloured]:
        return frozenset(Coloured(y, c) for y, c in zip(self.witnesses, self.colours))

    def extend(self, member: int, witness: int, target: Coloured) -> Chain:
        """Chain for ``target`` through this chain's target, now sitting in ``member``."""
        return Chain(
            self.members + (member,),
            self.colours + (self.target.c,),
            self.transfers + (self.target,),
            self.witnesses + (witness,),
            target,
            self.version,
        )


@dataclass(frozen=True)
class CascadeAugment:
    """A chain plus the addition that finishes it; executing gains one unit of volume."""

    chain: Chain
    final: Certificate

    def execute(self, inst: Instance, fam: Family) -> Family:
        return execute_cascade(inst, fam, self.chain, self.final)


@dataclass(frozen=True)
class NextQ:
    members: tuple[int, ...]
    entries: dict[Coloured, Chain]
    bound: int = 0
    stats: dict = field(default_factory=dict)


def _offer(q: dict[Coloured, Chain], chain: Chain) -> None:
    old = q.get(chain.target)
    if old is None or chain.sort_key() < old.sort_key():
        q[chain.target] = chain


def validate_chain(inst: Instance, fam: Family, chain: Chain) -> list[str]:
    """Check a chain against the definition of cascade-addability on ``fam``."""
    problems: list[str] = []
    ell = chain.length
    if ell == 0:
        return ["empty chain"]
    if len(set(chain.members)) != ell or any(not 0 <= m < len(fam) for m in chain.members):
        return ["chain members must be distinct member indices"]
    if len(chain.colours) != ell or len(chain.witnesses) != ell or len(chain.transfers) != ell - 1:
        return ["chain fields have inconsistent lengths"]
    if not inst.in_universe(chain.target):
        return [f"target {chain.target} is not in the universe"]
    seq = [fam[m] for m in chain.members]
    if any(chain.target in s for s in seq):
        problems.append(f"target {chain.target} lies in a chain member")
    all_colours = list(chain.colours) + [chain.target.c]
    if len(set(all_colours)) != len(all_colours):
        problems.append(f"freeing colours {all_colours} are not distinct")
    if chain.colours[0] in seq[0].colours():
        problems.append(f"colour {chain.colours[0]} appears in S_0")
    for i, t in enumerate(chain.transfers, start=1):
        if t not in seq[i]:
            problems.append(f"transfer {t} is not in member {chain.members[i]}")
    if problems:
        return problems
    for i in range(ell):
        base = seq[i] if i == 0 else seq[i].minus(chain.transfers[i - 1])
        nxt = chain.transfers[i] if i < ell - 1 else chain.target
        c_i, y_i = chain.colours[i], chain.witnesses[i]
        if not inst.in_universe((y_i, c_i)) or fam.is_used(y_i, c_i):
            problems.append(f"witness {(y_i, c_i)} is not an unused universe element")
            continue
        x_removed = base.element_of(nxt.c)
        if x_removed is None:
            problems.append(f"step {i}: no colour-{nxt.c} element to swap out")
            continue
        result = [p for p in base if p.c != nxt.c] + [(y_i, c_i), nxt]
        if not is_ris(inst, result):
            problems.append(f"step {i}: swap and addition do not give an RIS")
    return problems


def execute_cascade(
    inst: Instance, fam: Family, chain: Chain, final_addition: Certificate | None = None
) -> Family:
    """Rewrite the chain members; volume is unchanged unless ``final_addition`` is given.

    ``final_addition`` is either a direct certificate for ``chain.target`` on
    the last chain member (target unused), or a certificate on the member
    currently holding ``chain.target``, applied after the target moves out.
    Either way the volume grows by exactly one.
    """
    if chain.version != fam.version:
        raise StaleCertificateError(
            f"chain computed for family v{chain.version}, applied to v{fam.version}"
        )
    problems = validate_chain(inst, fam, chain)
    if problems:
        raise TheoremViolation("invalid cascade chain: " + "; ".join(problems))
    ell = chain.length
    updates: dict[int, RIS] = {}
    for i, m in enumerate(chain.members):
        s = fam[m]
        if i > 0:
            s = s.minus(chain.transfers[i - 1])
        nxt = chain.transfers[i] if i < ell - 1 else chain.target
        s = s.minus(Coloured(s.element_of(nxt.c), nxt.c)).plus((chain.witnesses[i], chain.colours[i]))
        if i < ell - 1:
            s = s.plus(nxt)
        updates[m] = s
    out = fam.replace(updates)
    last = out[chain.members[-1]]
    _post_check(inst, out, updates, fam.volume)
    if not is_ris(inst, list(last) + [chain.target]):
        raise TheoremViolation("rewritten last member cannot take the cascade target")
    if final_addition is None:
        return out

    owner = fam.owner(chain.target)
    if owner is None:
        if final_addition.target != chain.target or final_addition.witness is not None:
            raise ContractError("an unused target is finished by a direct addition of itself")
        updates = {chain.members[-1]: last.plus(chain.target)}
    else:
        if final_addition.base != owner:
            raise ContractError(f"final addition must act on member {owner}, which holds the target")
        if fam.is_used(*final_addition.target) or final_addition.target in chain.witness_pairs():
            raise ContractError(f"final target {final_addition.target} is not free")
        remainder = out[owner].minus(chain.target)
        updates = {chain.members[-1]: last.plus(chain.target), owner: final_addition.apply(remainder)}
    done = out.replace(updates)
    _post_check(inst, done, updates, fam.volume + 1)
    return done


def _post_check(inst: Instance, fam: Family, changed: dict[int, RIS], expected_volume: int) -> None:
    if fam.volume != expected_volume:
        raise TheoremViolation(f"volume {fam.volume}, expected {expected_volume}")
    for m, s in changed.items():
        if not is_ris(inst, s):
            raise TheoremViolation(f"member {m} is no longer an RIS: {s!r}")


def initial_Q(inst: Instance, fam: Family, s0: int) -> dict[Coloured, Chain]:
    """Targets that are (S_0, c_0)-addable with a witness, for some missing c_0."""
    s = fam[s0]
    if len(s) == inst.n:
        raise ContractError("S_0 is a transversal basis; it has no missing colour")
    view = inst.span(s.projection())
    q: dict[Coloured, Chain] = {}
    for c0 in sorted(set(range(inst.n)) - s.colours()):
        for target, cert in swap_certificates(inst, fam, s0, c0, view).items():
            _offer(q, Chain((s0,), (c0,), (), (cert.witness,), target, fam.version))
    return q


def choose_next(fam: Family, members: tuple[int, ...], q: dict[Coloured, Chain]) -> int:
    """Remaining member holding the most targets (smallest index on ties)."""
    counts = {i: 0 for i in range(len(fam)) if i not in members}
    if not counts:
        raise ContractError("no family member is left to extend the cascade")
    for t in q:
        owner = fam.owner(t)
        if owner is None or owner not in counts:
            raise ContractError(f"target {t} is not held by a remaining member; augment instead")
        counts[owner] += 1
    best = min(counts, key=lambda i: (-counts[i], i))
    if counts[best] * len(counts) < len(q):
        raise TheoremViolation(f"argmax member holds {counts[best]} of {len(q)} targets")
    return best


def extend_Q(
    inst: Instance, fam: Family, members: tuple[int, ...], q: dict[Coloured, Chain], nxt: int
) -> CascadeAugment | NextQ:
    """Grow the chain by member ``nxt``: an augmentation, or the next level's targets."""
    if nxt in members:
        raise ContractError(f"member {nxt} is already in the chain")
    s_next = fam[nxt]
    seq = members + (nxt,)
    chain_members = set(seq)
    ell = len(members)
    view = inst.span(s_next.projection())
    phi: dict[int, dict[Coloured, int]] = {}
    out: dict[Coloured, Chain] = {}
    here = sorted(t for t in q if t in s_next)
    for t in here:
        chain = q[t]
        if chain.members != members:
            raise ContractError("targets must come from a chain over the given members")
        rest = s_next.minus(t)
        rest_view = view.without(t.x)
        free = find_free_addable(inst, fam, rest, t.c, rest_view, exclude=chain.witness_pairs())
        if free is not None:
            return CascadeAugment(chain, Certificate(free.target, free.colour, free.removed, free.witness, nxt))
        for sc in swappable_colours(inst, fam, rest, t.c, rest_view):
            if sc.colour in chain.colours:
                continue
            if sc.colour not in phi:
                phi[sc.colour] = build_witness_injection(inst, s_next, sc.colour, view)
            target = Coloured(phi[sc.colour][t], sc.colour)
            owner = fam.owner(target)
            if owner in chain_members:
                continue
            if owner is None:
                raise TheoremViolation(f"unused addable {target} missed by the free search")
            _offer(out, chain.extend(nxt, sc.witness, target))
    f = len(fam)
    bound = len(here) * (inst.n - f - ell) - (ell + 1) * inst.n
    if inst.n - f - ell > 0 and bound > 0 and len(out) < bound:
        raise TheoremViolation(f"|Q| grew to {len(out)}, below the guaranteed {bound}")
    return NextQ(seq, out, bound, {"hits": len(here), "bound": bound})


@dataclass
class CascadeRun:
    outcome: CascadeAugment | None
    members: tuple[int, ...]
    q_sizes: list[int]


def run_cascade(
    inst: Instance,
    fam: Family,
    s0: int,
    max_length: int = 12,
    prefer_next: int | None = None,
    q0: dict[Coloured, Chain] | None = None,
) -> CascadeRun:
    """Search one cascade from ``S_0`` until it augments, runs dry or hits the length cap."""
    q = initial_Q(inst, fam, s0) if q0 is None else q0
    members: tuple[int, ...] = (s0,)
    sizes = [len(q)]
    cap = min(len(fam) - 1, max_length)
    while q:
        unused = [t for t in sorted(q) if not fam.is_used(*t)]
        if unused:
            chain = q[unused[0]]
            final = Certificate(chain.target, chain.target.c, base=chain.members[-1])
            return CascadeRun(CascadeAugment(chain, final), members, sizes)
        if len(members) > cap:
            break
        if prefer_next is not None and len(members) == 1 and any(t in fam[prefer_next] for t in q):
            nxt = prefer_next
        else:
            nxt = choose_next(fam, members, q)
        res = extend_Q(inst, fam, members, q, nxt)
        if isinstance(res, CascadeAugment):
            return CascadeRun(res, members + (nxt,), sizes)
        q, members = res.entries, res.members
        sizes.append(len(q))
    return CascadeRun(None, members, sizes)


def q_threshold(c_const: float, n: int) -> int:
    return math.ceil(c_const * n)
