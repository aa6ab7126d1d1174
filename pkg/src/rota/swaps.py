"""Addable elements, simple swaps and swappable colours.

Given an RIS ``S`` and a colour ``b`` missing from it, an element ``(x, c)``
is *(S, b)-addable* when either ``S + (x, c)`` is an RIS (a direct addition),
or some ``(x', c)`` in ``S`` can be swapped for an unused ``(y, b)`` so that
``S - (x', c) + (y, b) + (x, c)`` is an RIS; ``y`` is then the witness.
Only elements outside ``S`` are reported as addable.

All functions are pure in ``(instance, family)``.  ``S`` may be a member
index or any RIS (for instance a member with one element removed).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ContractError, TheoremViolation
from .matching import max_matching
from .matroid import SpanView
from .rainbow import RIS, Coloured, Family, Instance


@dataclass(frozen=True, order=True)
class Certificate:
    """Evidence that ``target`` is (S, colour)-addable.

    Direct when ``witness`` is None, otherwise a swap removing ``removed``
    from S and inserting ``(witness, colour)``.  ``base`` is the member index
    of S when S is a family member.
    """

    target: Coloured
    colour: int
    removed: Coloured | None = None
    witness: int | None = None
    base: int | None = None

    @property
    def kind(self) -> str:
        return "direct" if self.witness is None else "swap"

    def preference(self) -> tuple:
        if self.witness is None:
            return (0, -1, (-1, -1), self.target)
        return (1, self.witness, self.removed, self.target)

    def apply(self, s: RIS) -> RIS:
        if self.witness is None:
            return s.plus(self.target)
        return s.minus(self.removed).plus((self.witness, self.colour), self.target)

    def added(self) -> list[Coloured]:
        """Coloured elements this certificate brings into S."""
        if self.witness is None:
            return [self.target]
        return [Coloured(self.witness, self.colour), self.target]


@dataclass(frozen=True)
class SwappableColour:
    colour: int
    witness: int
    removed: Coloured


@dataclass(frozen=True)
class FreeAddable:
    certificate: Certificate


@dataclass(frozen=True)
class Swappables:
    colours: list[SwappableColour]


@dataclass(frozen=True)
class Augment:
    certificate: Certificate


@dataclass(frozen=True)
class AddableSet:
    certificates: list[Certificate]


def _resolve(fam: Family, s: RIS | int) -> tuple[RIS, int | None]:
    if isinstance(s, RIS):
        return s, fam.index_of(s)
    return fam[s], s


def _require_missing(s: RIS, b: int, n: int) -> None:
    if not 0 <= b < n:
        raise ContractError(f"colour {b} out of range")
    if b in s.colours():
        raise ContractError(f"colour {b} already appears in S")


def _view(inst: Instance, s: RIS, view: SpanView | None) -> SpanView:
    return inst.span(s.projection()) if view is None else view


def _swap_removals(view: SpanView, s: RIS, y: int) -> list[Coloured]:
    """Members (x', c) of S with S - (x', c) + (y, b) an RIS."""
    by_element = {p.x: p for p in s}
    return sorted((by_element[x] for x in view.exchanges(y)), key=lambda p: p.c)


def swap_certificates(
    inst: Instance, fam: Family, s: RIS | int, b: int, view: SpanView | None = None
) -> dict[Coloured, Certificate]:
    """Best witness-bearing certificate for every swap-addable target."""
    s, base = _resolve(fam, s)
    _require_missing(s, b, inst.n)
    view = _view(inst, s, view)
    projection = s.projection()
    used_b = fam.used.slice(b)
    best: dict[Coloured, Certificate] = {}

    def offer(cert: Certificate) -> None:
        old = best.get(cert.target)
        if old is None or cert.preference() < old.preference():
            best[cert.target] = cert

    for y in inst.sorted_bases[b]:
        if y in used_b:
            continue
        if view.independent(y):
            # J = P - x' + y spans more than P; query J directly.
            plus_y = inst.span(projection | {y})
            for removed in s:
                j_view = plus_y.without(removed.x)
                for x in inst.sorted_bases[removed.c]:
                    target = Coloured(x, removed.c)
                    if target in s or x == y:
                        continue
                    if j_view.independent(x):
                        offer(Certificate(target, b, removed, y, base))
        else:
            for removed in _swap_removals(view, s, y):
                # cl(P - x' + y) = cl(P): targets are exactly the x independent of P.
                for x in inst.sorted_bases[removed.c]:
                    if view.independent(x):
                        offer(Certificate(Coloured(x, removed.c), b, removed, y, base))
    return best


def enumerate_addable(
    inst: Instance, fam: Family, s: RIS | int, b: int, view: SpanView | None = None
) -> list[Certificate]:
    """Every (S, b)-addable element with one certificate each, sorted by target."""
    s, base = _resolve(fam, s)
    _require_missing(s, b, inst.n)
    view = _view(inst, s, view)
    certs = swap_certificates(inst, fam, s, b, view)
    present = s.colours()
    for c in range(inst.n):
        if c in present:
            continue
        for x in inst.sorted_bases[c]:
            if view.independent(x):
                target = Coloured(x, c)
                certs[target] = Certificate(target, b, base=base)
    return [certs[t] for t in sorted(certs)]


def swappable_colours(
    inst: Instance, fam: Family, s: RIS | int, b: int, view: SpanView | None = None
) -> list[SwappableColour]:
    """Colours of S that admit a simple swap with an unused b-coloured witness."""
    s, _ = _resolve(fam, s)
    _require_missing(s, b, inst.n)
    view = _view(inst, s, view)
    used_b = fam.used.slice(b)
    found: dict[int, SwappableColour] = {}
    for y in inst.sorted_bases[b]:
        if y in used_b:
            continue
        for removed in _swap_removals(view, s, y):
            found.setdefault(removed.c, SwappableColour(removed.c, y, removed))
        if len(found) == len(s):
            break
    return [found[c] for c in sorted(found)]


def find_free_addable(
    inst: Instance,
    fam: Family,
    s: RIS | int,
    b: int,
    view: SpanView | None = None,
    exclude: frozenset[Coloured] = frozenset(),
) -> Certificate | None:
    """An addable certificate whose target is unused, or None.

    ``exclude`` lists extra coloured elements to treat as used (a pending
    cascade's witnesses).
    """
    s, base = _resolve(fam, s)
    _require_missing(s, b, inst.n)
    view = _view(inst, s, view)

    def free(x: int, c: int) -> bool:
        return not fam.is_used(x, c) and Coloured(x, c) not in exclude

    direct = _free_direct(inst, s, view, free)
    if direct is not None:
        return Certificate(direct, b, base=base)
    # No unused (y, b) is independent of P here (it would be a direct target),
    # so every witness lies in cl(P) and swap targets are the x independent of P.
    return _free_swap(inst, fam, s, b, view, _free_targets(inst, s, view, free), exclude, base)


def _free_direct(inst: Instance, s: RIS, view: SpanView, free) -> Coloured | None:
    present = s.colours()
    for x, c in sorted((x, c) for c in range(inst.n) if c not in present for x in inst.sorted_bases[c]):
        if free(x, c) and view.independent(x):
            return Coloured(x, c)
    return None


def _free_targets(inst: Instance, s: RIS, view: SpanView, free) -> dict[int, list[int]]:
    return {
        c: [x for x in inst.sorted_bases[c] if free(x, c) and view.independent(x)]
        for c in s.colours()
    }


def _free_swap(
    inst: Instance,
    fam: Family,
    s: RIS,
    b: int,
    view: SpanView,
    targets: dict[int, list[int]],
    exclude: frozenset[Coloured],
    base: int | None,
) -> Certificate | None:
    if not any(targets.values()):
        return None
    best: Certificate | None = None
    used_b = fam.used.slice(b)
    for y in inst.sorted_bases[b]:
        if y in used_b or Coloured(y, b) in exclude:
            continue
        for removed in _swap_removals(view, s, y):
            for x in targets[removed.c]:
                cert = Certificate(Coloured(x, removed.c), b, removed, y, base)
                if best is None or cert.preference() < best.preference():
                    best = cert
        if best is not None:
            return best
    return best


def find_free_augment(
    inst: Instance, fam: Family, s: RIS | int, view: SpanView | None = None
) -> Certificate | None:
    """A free addable certificate for any missing colour, or None.

    Same answer as trying :func:`find_free_addable` for each missing colour
    in ascending order, but the colour-independent work is done once.
    """
    s, base = _resolve(fam, s)
    missing = sorted(set(range(inst.n)) - s.colours())
    if not missing:
        return None
    view = _view(inst, s, view)

    def free(x: int, c: int) -> bool:
        return not fam.is_used(x, c)

    direct = _free_direct(inst, s, view, free)
    if direct is not None:
        return Certificate(direct, missing[0], base=base)
    targets = _free_targets(inst, s, view, free)
    for b in missing:
        cert = _free_swap(inst, fam, s, b, view, targets, frozenset(), base)
        if cert is not None:
            return cert
    return None


def many_good_dichotomy(
    inst: Instance, fam: Family, s: RIS | int, b: int, view: SpanView | None = None
) -> FreeAddable | Swappables:
    """Either an unused addable (y, b), or at least n - |F_b| swappable colours."""
    s, base = _resolve(fam, s)
    if len(s) == 0:
        raise ContractError("many_good_dichotomy needs a nonempty RIS")
    _require_missing(s, b, inst.n)
    view = _view(inst, s, view)
    used_b = fam.used.slice(b)
    for y in inst.sorted_bases[b]:
        if y not in used_b and view.independent(y):
            return FreeAddable(Certificate(Coloured(y, b), b, base=base))
    sw = swappable_colours(inst, fam, s, b, view)
    bound = inst.n - len(used_b)
    if len(sw) < bound:
        raise TheoremViolation(
            f"only {len(sw)} swappable colours for colour {b}, expected at least {bound}"
        )
    return Swappables(sw)


def addable_via_swappable(
    inst: Instance,
    fam: Family,
    s: RIS | int,
    b: int,
    sc: SwappableColour,
    view: SpanView | None = None,
) -> list[Certificate]:
    """Swap certificates for every x in B_c independent of pi(S), with sc's witness."""
    s, base = _resolve(fam, s)
    _require_missing(s, b, inst.n)
    view = _view(inst, s, view)
    if s.element_of(sc.colour) != sc.removed.x:
        raise ContractError(f"{sc.removed} is not the colour-{sc.colour} element of S")
    if view.independent(sc.witness):
        raise ContractError("S + (witness, b) is an RIS: take the free addition instead")
    return [
        Certificate(Coloured(x, sc.colour), b, sc.removed, sc.witness, base)
        for x in inst.sorted_bases[sc.colour]
        if view.independent(x)
    ]


def build_witness_injection(
    inst: Instance, s: RIS, b: int, view: SpanView | None = None
) -> dict[Coloured, int]:
    """Injection phi_b: S -> B_b with phi_b((x, c)) independent of pi(S - (x, c))."""
    view = _view(inst, s, view)
    by_element = {p.x: p for p in s}
    adj: dict[Coloured, list[int]] = {p: [] for p in s}
    for y in inst.sorted_bases[b]:
        for x in view.exchanges(y):
            adj[by_element[x]].append(y)
    order = sorted(adj)
    phi = max_matching(adj, order)
    if len(phi) != len(s):
        raise TheoremViolation(
            f"witness injection into colour {b} covers {len(phi)} of {len(s)} elements"
        )
    return phi


def count_addable_or_augment(
    inst: Instance, fam: Family, s: RIS | int, b: int, f: int | None = None
) -> Augment | AddableSet:
    """Either a volume-increasing certificate or >= (n - |S|)(n - f) addable elements."""
    s, base = _resolve(fam, s)
    _require_missing(s, b, inst.n)
    f = len(fam) if f is None else f
    view = _view(inst, s, None)
    free = find_free_addable(inst, fam, s, b, view)
    if free is not None:
        return Augment(free)
    bound = (inst.n - len(s)) * (inst.n - f)
    if len(s) == 0:
        # Every class element is independent of the empty set, so all are used.
        if bound > 0:
            raise TheoremViolation("empty RIS with no unused addable element")
        return AddableSet([])
    outcome = many_good_dichotomy(inst, fam, s, b, view)
    if isinstance(outcome, FreeAddable):
        return Augment(outcome.certificate)
    certs: list[Certificate] = []
    for sc in outcome.colours:
        certs.extend(addable_via_swappable(inst, fam, s, b, sc, view))
    if inst.n - f > 0 and len(certs) < bound:
        raise TheoremViolation(f"{len(certs)} addable elements, expected at least {bound}")
    return AddableSet(sorted(certs))


def apply_free(fam: Family, index: int, cert: Certificate) -> Family:
    """Apply a certificate with an unused target to member ``index``."""
    if fam.is_used(*cert.target):
        raise ContractError(f"target {cert.target} is already used")
    return fam.replace({index: cert.apply(fam[index])})


def transfer(fam: Family, index: int, cert: Certificate) -> Family:
    """Move ``cert.target`` from its current owner into member ``index`` via ``cert``."""
    owner = fam.owner(cert.target)
    if owner is None:
        return apply_free(fam, index, cert)
    if owner == index:
        raise ContractError("cannot transfer an element into its own member")
    return fam.replace({owner: fam[owner].minus(cert.target), index: cert.apply(fam[index])})
