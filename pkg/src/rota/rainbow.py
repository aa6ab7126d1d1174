"""Coloured universe, rainbow independent sets and disjoint families of them.

Colours are 0-based internally (colour ``c`` is the class ``bases[c]``).  A
coloured element is a pair ``(x, c)`` with ``x`` in ``bases[c]``; since each
class is a set, the pair identifies a position in the class, so equal matroid
elements in two classes are different members of the universe.
"""

from __future__ import annotations

import threading
from collections import OrderedDict
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from typing import NamedTuple

from .errors import ContractError, InputError
from .matroid import Matroid, SpanView


class Coloured(NamedTuple):
    x: int
    c: int

    def __repr__(self) -> str:
        return f"({self.x},{self.c})"


class Instance:
    """A rank-``n`` matroid together with ``n`` colour classes, each a basis."""

    def __init__(
        self,
        matroid: Matroid,
        bases: Sequence[Sequence[int]],
        metadata: Mapping | None = None,
        span_cache: int = 512,
    ):
        self.matroid = matroid
        self.bases = tuple(tuple(int(x) for x in b) for b in bases)
        self.n = len(self.bases)
        self.metadata = dict(metadata or {})
        if self.n == 0:
            raise InputError("an instance needs at least one colour class", "bases")
        for c, b in enumerate(self.bases):
            where = f"bases[{c}]"
            if len(b) != self.n:
                raise InputError(f"expected {self.n} elements, got {len(b)}", where)
            if len(set(b)) != len(b):
                raise InputError("repeated element inside one class", where)
            try:
                ok = matroid.is_independent(b)
            except InputError as exc:
                raise InputError(str(exc), where) from None
            if not ok:
                raise InputError("class is not independent", where)
        self.base_sets = tuple(frozenset(b) for b in self.bases)
        self.sorted_bases = tuple(tuple(sorted(b)) for b in self.bases)
        self._spans: OrderedDict[frozenset[int], SpanView] = OrderedDict()
        self._span_cache = span_cache
        self._lock = threading.Lock()
        first = self.span(self.bases[0])
        if any(first.independent(y) for y in range(matroid.ground_size)):
            raise InputError(f"matroid rank exceeds the number of classes ({self.n})", "bases")

    def __repr__(self) -> str:
        return f"Instance(n={self.n}, matroid={self.matroid!r})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Instance) and (self.matroid, self.bases) == (
            other.matroid,
            other.bases,
        )

    def __hash__(self) -> int:
        return hash((self.matroid, self.bases))

    def span(self, elements: Iterable[int]) -> SpanView:
        """Cached :class:`SpanView` for an independent set of matroid elements."""
        key = frozenset(elements)
        with self._lock:
            view = self._spans.get(key)
            if view is not None:
                self._spans.move_to_end(key)
                return view
        view = self.matroid.span(key)
        with self._lock:
            self._spans[key] = view
            if len(self._spans) > self._span_cache:
                self._spans.popitem(last=False)
        return view

    def in_universe(self, pair: tuple[int, int]) -> bool:
        x, c = pair
        return 0 <= c < self.n and x in self.base_sets[c]

    def recoloured(self, perm: Sequence[int]) -> Instance:
        """Same instance with class ``perm[c]`` moved to colour ``c``."""
        return Instance(self.matroid, [self.bases[p] for p in perm], self.metadata)


class RIS:
    """Immutable set of coloured elements stored as a colour -> element map.

    Rainbowness (one element per colour) is structural; distinctness and
    independence of the elements are properties checked by :func:`is_ris`.
    """

    __slots__ = ("_by_colour", "_key")

    def __init__(self, pairs: Iterable[tuple[int, int]] = ()):
        by_colour: dict[int, int] = {}
        for x, c in pairs:
            if c in by_colour:
                raise ContractError(f"colour {c} appears twice")
            by_colour[int(c)] = int(x)
        self._by_colour = by_colour
        self._key = frozenset(Coloured(x, c) for c, x in by_colour.items())

    def __repr__(self) -> str:
        return "RIS{" + ", ".join(repr(p) for p in self) + "}"

    def __len__(self) -> int:
        return len(self._by_colour)

    def __iter__(self) -> Iterator[Coloured]:
        return (Coloured(self._by_colour[c], c) for c in sorted(self._by_colour))

    def __contains__(self, pair: object) -> bool:
        try:
            x, c = pair  # type: ignore[misc]
        except (TypeError, ValueError):
            return False
        return self._by_colour.get(c) == x

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RIS) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def elements(self) -> frozenset[Coloured]:
        return self._key

    def colours(self) -> frozenset[int]:
        return frozenset(self._by_colour)

    def projection(self) -> frozenset[int]:
        return frozenset(self._by_colour.values())

    def element_of(self, c: int) -> int | None:
        return self._by_colour.get(c)

    def plus(self, *pairs: tuple[int, int]) -> RIS:
        return RIS(list(self) + list(pairs))

    def minus(self, *pairs: tuple[int, int]) -> RIS:
        drop = {Coloured(*p) for p in pairs}
        missing = drop - self._key
        if missing:
            raise ContractError(f"cannot remove {sorted(missing)}: not members")
        return RIS(p for p in self if p not in drop)


def project(s: Iterable[tuple[int, int]]) -> frozenset[int]:
    """Matroid elements of a set of coloured elements."""
    return frozenset(x for x, _ in s)


def build_universe(inst: Instance) -> frozenset[Coloured]:
    return frozenset(Coloured(x, c) for c, b in enumerate(inst.bases) for x in b)


def is_ris(inst: Instance, s: Iterable[tuple[int, int]]) -> bool:
    """Distinct elements, distinct colours, independent projection."""
    pairs = [Coloured(int(x), int(c)) for x, c in s]
    for p in pairs:
        if not inst.in_universe(p):
            raise InputError(f"{p} is not in the coloured universe")
    xs = [p.x for p in pairs]
    cs = [p.c for p in pairs]
    if len(set(xs)) != len(xs) or len(set(cs)) != len(cs):
        return False
    return inst.matroid.is_independent(xs)


def missing_colours(s: RIS | Iterable[tuple[int, int]], n: int) -> frozenset[int]:
    present = s.colours() if isinstance(s, RIS) else {c for _, c in s}
    return frozenset(range(n)) - present


def is_transversal_basis(inst: Instance, s: RIS) -> bool:
    return len(s) == inst.n and is_ris(inst, s)


@dataclass(frozen=True)
class UsedSet:
    """The coloured elements used by a family, with per-colour slices."""

    elements: frozenset[Coloured]
    slices: Mapping[int, frozenset[int]]

    def __contains__(self, pair: object) -> bool:
        return pair in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def slice(self, c: int) -> frozenset[int]:
        return self.slices.get(c, frozenset())


class Family:
    """An ordered collection of pairwise disjoint RISs.

    Families are values: every rewrite returns a new family whose ``version``
    is one more than its parent's, which is how stale certificates are caught.
    """

    __slots__ = ("members", "version", "_owner", "_used")

    def __init__(self, members: Iterable[RIS], version: int = 0):
        self.members = tuple(members)
        self.version = version
        owner: dict[Coloured, int] = {}
        for i, s in enumerate(self.members):
            for p in s:
                j = owner.setdefault(p, i)
                if j != i:
                    raise ContractError(f"members {j} and {i} both contain {p}")
        self._owner = owner
        self._used: UsedSet | None = None

    @classmethod
    def empty(cls, f: int) -> Family:
        return cls([RIS() for _ in range(f)])

    def __repr__(self) -> str:
        return f"Family(v{self.version}, {list(self.members)})"

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, i: int) -> RIS:
        return self.members[i]

    def __iter__(self) -> Iterator[RIS]:
        return iter(self.members)

    @property
    def volume(self) -> int:
        return len(self._owner)

    @property
    def used(self) -> UsedSet:
        if self._used is None:
            slices: dict[int, set[int]] = {}
            for x, c in self._owner:
                slices.setdefault(c, set()).add(x)
            self._used = UsedSet(
                frozenset(self._owner), {c: frozenset(v) for c, v in slices.items()}
            )
        return self._used

    def owner(self, pair: tuple[int, int]) -> int | None:
        return self._owner.get(Coloured(*pair))

    def is_used(self, x: int, c: int) -> bool:
        return Coloured(x, c) in self._owner

    def index_of(self, s: RIS) -> int | None:
        for i, m in enumerate(self.members):
            if m == s:
                return i
        return None

    def replace(self, updates: Mapping[int, RIS]) -> Family:
        members = list(self.members)
        for i, s in updates.items():
            members[i] = s
        return Family(members, self.version + 1)

    def state_key(self) -> tuple[frozenset[Coloured], ...]:
        return tuple(s.elements() for s in self.members)


def volume(fam: Family | Iterable[RIS]) -> int:
    return sum(len(s) for s in fam)


def used_set(fam: Family | Iterable[RIS]) -> UsedSet:
    if not isinstance(fam, Family):
        fam = Family(fam)  # raises ContractError on overlap
    return fam.used


def is_disjoint(sets: Iterable[Iterable[tuple[int, int]]]) -> bool:
    seen: set[tuple[int, int]] = set()
    for s in sets:
        for p in s:
            key = (p[0], p[1])
            if key in seen:
                return False
            seen.add(key)
    return True


def check_family(inst: Instance, fam: Family) -> list[str]:
    """Structural problems with a family (empty list when it is valid)."""
    problems = []
    for i, s in enumerate(fam):
        if not is_ris(inst, s):
            problems.append(f"member {i} is not an RIS: {s!r}")
    if not is_disjoint(fam):
        problems.append("members are not pairwise disjoint")
    return problems
