"""Matroids given by an independence oracle.

Three backends are provided: uniform matroids, graphic matroids (edge sets of
a multigraph, independent iff acyclic) and linear matroids (columns over a
prime field GF(p)).  Every backend answers ``is_independent``; rank and
augmentation helpers are derived from that oracle alone.

For the search engines a second, faster interface exists: ``span(P)`` returns
a :class:`SpanView` of an independent set ``P`` which answers "is ``P + y``
independent?" and "which ``x`` in ``P`` can be exchanged for ``y``?" without
re-running the oracle for every query.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from .errors import ContractError, InputError, PreconditionViolation

_INT64_LIMIT = 2**63 - 1


class SpanView:
    """Independence queries relative to a fixed independent set ``P``.

    ``independent(y)`` is true iff ``y`` is not in ``P`` and ``P + y`` is
    independent.  ``exchanges(y)`` is the set of ``x`` in ``P`` such that
    ``y`` is not in ``P - x`` and ``P - x + y`` is independent; for ``y`` in
    ``P`` this is ``{y}``, for ``y`` independent of ``P`` it is all of ``P``,
    and otherwise it is the fundamental circuit of ``y`` minus ``y``.

    This base implementation asks the matroid oracle directly.
    """

    def __init__(self, matroid: Matroid, members: Iterable[int]):
        self.matroid = matroid
        self.members = frozenset(members)
        self._indep: dict[int, bool] = {}
        self._exch: dict[int, frozenset[int]] = {}

    def independent(self, y: int) -> bool:
        hit = self._indep.get(y)
        if hit is None:
            hit = y not in self.members and self._independent(y)
            self._indep[y] = hit
        return hit

    def exchanges(self, y: int) -> frozenset[int]:
        hit = self._exch.get(y)
        if hit is None:
            if y in self.members:
                hit = frozenset((y,))
            elif self.independent(y):
                hit = self.members
            else:
                hit = self._circuit(y)
            self._exch[y] = hit
        return hit

    def without(self, x: int) -> SpanView:
        """View of ``P - x``, derived from this one without new oracle work."""
        if x not in self.members:
            raise ContractError(f"element {x} is not in the spanned set")
        return _DerivedView(self, x)

    def _independent(self, y: int) -> bool:
        return self.matroid.is_independent(self.members | {y})

    def _circuit(self, y: int) -> frozenset[int]:
        return frozenset(
            x for x in self.members if self.matroid.is_independent((self.members - {x}) | {y})
        )


class _DerivedView(SpanView):
    # Uses: for y in cl(P) - P with circuit C, y is in cl(P - x) iff x is in C,
    # and the circuit is unchanged when it is.
    def __init__(self, parent: SpanView, removed: int):
        super().__init__(parent.matroid, parent.members - {removed})
        self._parent = parent
        self._removed = removed

    def _independent(self, y: int) -> bool:
        if y == self._removed or self._parent.independent(y):
            return True
        return self._removed in self._parent.exchanges(y)

    def _circuit(self, y: int) -> frozenset[int]:
        return self._parent.exchanges(y)


class Matroid:
    """Abstract matroid on the ground set ``{0, ..., ground_size - 1}``."""

    ground_size: int

    def is_independent(self, s: Iterable[int]) -> bool:
        items = self._check(s)
        return self._independent(items)

    def span(self, members: Iterable[int]) -> SpanView:
        items = self._check(members)
        if not self._independent(items):
            raise ContractError("span() requires an independent set")
        return self._span(items)

    def _check(self, s: Iterable[int]) -> frozenset[int]:
        items = frozenset(s)
        for x in items:
            if not isinstance(x, (int, np.integer)) or not 0 <= x < self.ground_size:
                raise InputError(f"invalid element id {x!r} (ground size {self.ground_size})")
        return items

    def _independent(self, items: frozenset[int]) -> bool:
        raise NotImplementedError

    def _span(self, items: frozenset[int]) -> SpanView:
        return SpanView(self, items)

    def rank(self) -> int:
        return rank_of(self, range(self.ground_size))


class UniformMatroid(Matroid):
    """U(r, m): every set of at most ``rank`` elements is independent."""

    def __init__(self, elements: int, rank: int):
        if elements < 0 or not 0 <= rank <= elements:
            raise InputError(f"uniform matroid needs 0 <= rank <= elements, got {rank}, {elements}")
        self.ground_size = int(elements)
        self.rank_cap = int(rank)

    def __repr__(self) -> str:
        return f"UniformMatroid(elements={self.ground_size}, rank={self.rank_cap})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, UniformMatroid) and (self.ground_size, self.rank_cap) == (
            other.ground_size,
            other.rank_cap,
        )

    def __hash__(self) -> int:
        return hash(("uniform", self.ground_size, self.rank_cap))

    def _independent(self, items: frozenset[int]) -> bool:
        return len(items) <= self.rank_cap

    def _span(self, items: frozenset[int]) -> SpanView:
        return _UniformView(self, items)


class _UniformView(SpanView):
    def _independent(self, y: int) -> bool:
        return len(self.members) < self.matroid.rank_cap

    def _circuit(self, y: int) -> frozenset[int]:
        # P is a basis here, so every member lies on the circuit of y.
        return self.members


class GraphicMatroid(Matroid):
    """Cycle matroid of a multigraph; element ``i`` is ``edges[i]``."""

    def __init__(self, vertices: int, edges: Sequence[Sequence[int]]):
        self.vertices = int(vertices)
        checked = []
        for i, e in enumerate(edges):
            if len(e) != 2:
                raise InputError("edge must have two endpoints", f"edges[{i}]")
            u, w = int(e[0]), int(e[1])
            if not (0 <= u < self.vertices and 0 <= w < self.vertices):
                raise InputError(f"endpoint out of range 0..{self.vertices - 1}", f"edges[{i}]")
            checked.append((u, w))
        self.edges = tuple(checked)
        self.ground_size = len(self.edges)

    def __repr__(self) -> str:
        return f"GraphicMatroid(vertices={self.vertices}, edges={list(self.edges)})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GraphicMatroid) and (self.vertices, self.edges) == (
            other.vertices,
            other.edges,
        )

    def __hash__(self) -> int:
        return hash(("graphic", self.vertices, self.edges))

    def _independent(self, items: frozenset[int]) -> bool:
        parent = list(range(self.vertices))

        def find(v: int) -> int:
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for i in items:
            u, w = self.edges[i]
            ru, rw = find(u), find(w)
            if ru == rw:
                return False
            parent[ru] = rw
        return True

    def _span(self, items: frozenset[int]) -> SpanView:
        return _ForestView(self, items)


class _ForestView(SpanView):
    """Span of an acyclic edge set, backed by a rooted spanning forest."""

    def __init__(self, matroid: GraphicMatroid, members: frozenset[int]):
        super().__init__(matroid, members)
        adj: dict[int, list[tuple[int, int]]] = {}
        for i in sorted(members):
            u, w = matroid.edges[i]
            adj.setdefault(u, []).append((w, i))
            adj.setdefault(w, []).append((u, i))
        self._root: dict[int, int] = {}
        self._up: dict[int, tuple[int, int]] = {}
        self._depth: dict[int, int] = {}
        for start in sorted(adj):
            if start in self._root:
                continue
            self._root[start] = start
            self._depth[start] = 0
            stack = [start]
            while stack:
                v = stack.pop()
                for w, i in adj[v]:
                    if w not in self._root:
                        self._root[w] = start
                        self._depth[w] = self._depth[v] + 1
                        self._up[w] = (v, i)
                        stack.append(w)

    def _component(self, v: int) -> int:
        return self._root.get(v, -1 - v)

    def _independent(self, y: int) -> bool:
        u, w = self.matroid.edges[y]
        return u != w and self._component(u) != self._component(w)

    def _circuit(self, y: int) -> frozenset[int]:
        u, w = self.matroid.edges[y]
        path = set()
        while u != w:
            if self._depth.get(u, 0) < self._depth.get(w, 0):
                u, w = w, u
            u, edge = self._up[u]
            path.add(edge)
        return frozenset(path)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class LinearMatroid(Matroid):
    """Column matroid of a matrix over GF(p), ``p`` prime and at most 2**31."""

    def __init__(self, p: int, cols: Sequence[Sequence[int]]):
        p = int(p)
        if not is_prime(p) or p > 2**31:
            raise InputError(f"p must be a prime <= 2**31, got {p}", "p")
        dims = {len(c) for c in cols}
        if len(dims) > 1:
            raise InputError("columns have differing lengths", "cols")
        self.p = p
        self.dim = dims.pop() if dims else 0
        self.cols = tuple(tuple(int(v) % p for v in c) for c in cols)
        self.ground_size = len(self.cols)
        # Products stay below p**2 < 2**62; dot products of length dim may not.
        self._dtype = np.int64 if self.dim * (p - 1) ** 2 <= _INT64_LIMIT else object
        self._matrix = np.array(self.cols, dtype=self._dtype).reshape(self.ground_size, self.dim).T

    def __repr__(self) -> str:
        return f"LinearMatroid(p={self.p}, cols={[list(c) for c in self.cols]})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LinearMatroid) and (self.p, self.dim, self.cols) == (
            other.p,
            other.dim,
            other.cols,
        )

    def __hash__(self) -> int:
        return hash(("linear", self.p, self.cols))

    def _independent(self, items: frozenset[int]) -> bool:
        if len(items) > self.dim:
            return False
        sub = self._matrix[:, sorted(items)]
        return gf_rank(sub, self.p) == len(items)

    def _span(self, items: frozenset[int]) -> SpanView:
        return _LinearView(self, items)


class _LinearView(SpanView):
    """Coordinates of every ground column in terms of ``P`` plus a residual.

    Row reduction of ``[P | I]`` gives ``T`` with ``T @ P = [I; 0]``; for any
    column ``y`` the top block of ``T @ y`` holds its coefficients on ``P``
    and the bottom block is zero iff ``y`` lies in the span of ``P``.
    """

    def __init__(self, matroid: LinearMatroid, members: frozenset[int]):
        super().__init__(matroid, members)
        p = matroid.p
        self._order = sorted(members)
        s, d = len(self._order), matroid.dim
        a = np.concatenate(
            [matroid._matrix[:, self._order], np.eye(d, dtype=np.int64).astype(matroid._dtype)], axis=1
        )
        for j in range(s):
            rows = np.nonzero(a[j:, j] % p)[0]
            if rows.size == 0:
                raise ContractError("span() requires an independent set")
            r = j + int(rows[0])
            if r != j:
                a[[j, r]] = a[[r, j]]
            a[j] = (a[j] * pow(int(a[j, j]), -1, p)) % p
            factors = a[:, j].copy()
            factors[j] = 0
            a = (a - np.outer(factors, a[j])) % p
        coords = (a[:, s:] @ matroid._matrix) % p
        self._free = np.asarray(coords[s:].any(axis=0), dtype=bool)
        self._support = np.asarray(coords[:s] != 0, dtype=bool)

    def _independent(self, y: int) -> bool:
        return bool(self._free[y])

    def _circuit(self, y: int) -> frozenset[int]:
        rows = np.nonzero(self._support[:, y])[0]
        return frozenset(self._order[i] for i in rows)


def gf_rank(matrix: np.ndarray, p: int) -> int:
    """Rank of ``matrix`` over GF(p) by Gaussian elimination."""
    a = np.array(matrix, copy=True) % p
    rows, cols = a.shape if a.ndim == 2 else (0, 0)
    rank = 0
    for j in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(a[rank:, j])[0]
        if nz.size == 0:
            continue
        r = rank + int(nz[0])
        if r != rank:
            a[[rank, r]] = a[[r, rank]]
        a[rank] = (a[rank] * pow(int(a[rank, j]), -1, p)) % p
        below = a[rank + 1 :, j].copy()
        a[rank + 1 :] = (a[rank + 1 :] - np.outer(below, a[rank])) % p
        rank += 1
    return rank


def rank_of(m: Matroid, s: Iterable[int], order: Sequence[int] | None = None) -> int:
    """Size of a maximal independent subset of ``s``, found greedily.

    ``order`` fixes the greedy scan order (defaults to ascending ids); the
    result does not depend on it.
    """
    items = m._check(s)
    scan = sorted(items) if order is None else list(order)
    if set(scan) != items:
        raise ContractError("order must be a permutation of s")
    chosen: list[int] = []
    for x in scan:
        if m.is_independent(chosen + [x]):
            chosen.append(x)
    return len(chosen)


def augment(m: Matroid, a: Iterable[int], b: Iterable[int]) -> int | None:
    """Smallest ``x`` in ``a - b`` with ``b + x`` independent.

    ``None`` can only come back when the oracle violates the augmentation
    axiom.
    """
    a, b = m._check(a), m._check(b)
    if not (m.is_independent(a) and m.is_independent(b)):
        raise ContractError("augment() needs two independent sets")
    if len(a) <= len(b):
        raise ContractError("augment() needs |a| > |b|")
    for x in sorted(a - b):
        if m.is_independent(b | {x}):
            return x
    return None


def extend_to_size(m: Matroid, base: Iterable[int], pool: Iterable[int], k: int) -> frozenset[int]:
    """Greedily extend ``base`` by ``pool`` elements to an independent set of size ``k``."""
    base, pool = m._check(base), m._check(pool)
    if not m.is_independent(base):
        raise ContractError("extend_to_size() needs an independent base")
    if len(base) > k:
        raise ContractError(f"base already has {len(base)} > {k} elements")
    current = set(base)
    for x in sorted(pool - base):
        if len(current) == k:
            break
        if m.is_independent(current | {x}):
            current.add(x)
    if len(current) < k:
        raise PreconditionViolation(
            f"no independent extension of size {k} inside the pool (reached {len(current)})"
        )
    return frozenset(current)
