"""JSON instance and decomposition files, plus seeded instance generators.

Element ids are 0-based ground-set indices everywhere.  Colours are 0-based
in memory and 1-based in files.  Keys are written in a fixed order so equal
objects serialize to identical bytes.
"""

from __future__ import annotations

import json
import random
from collections.abc import Sequence
from typing import Any

from .errors import InputError, RotaError
from .matroid import GraphicMatroid, LinearMatroid, Matroid, UniformMatroid, is_prime
from .rainbow import RIS, Instance
from .solver import Decomposition

KINDS = ("uniform-identical", "uniform-random", "linear-random", "graphic-random")
GRAPH_RETRIES = 100


def _int(v: Any, path: str, minimum: int | None = None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError(f"expected an integer, got {json.dumps(v)}", path)
    if minimum is not None and v < minimum:
        raise InputError(f"must be at least {minimum}", path)
    return v


def _list(v: Any, path: str) -> list:
    if not isinstance(v, list):
        raise InputError("expected a list", path)
    return v


def _object(v: Any, path: str) -> dict:
    if not isinstance(v, dict):
        raise InputError("expected an object", path)
    return v


def matroid_to_dict(m: Matroid) -> dict:
    if isinstance(m, UniformMatroid):
        return {"type": "uniform", "elements": m.ground_size, "rank": m.rank_cap}
    if isinstance(m, GraphicMatroid):
        return {"type": "graphic", "vertices": m.vertices, "edges": [list(e) for e in m.edges]}
    if isinstance(m, LinearMatroid):
        return {"type": "linear", "p": m.p, "cols": [list(c) for c in m.cols]}
    raise TypeError(f"cannot serialize {type(m).__name__}")


def matroid_from_dict(d: Any, path: str = "matroid") -> Matroid:
    d = _object(d, path)
    kind = d.get("type")
    try:
        if kind == "uniform":
            return UniformMatroid(_int(d.get("elements"), f"{path}.elements", 0), _int(d.get("rank"), f"{path}.rank", 0))
        if kind == "graphic":
            edges = _list(d.get("edges"), f"{path}.edges")
            for i, e in enumerate(edges):
                e = _list(e, f"{path}.edges[{i}]")
                if len(e) != 2:
                    raise InputError("an edge needs two endpoints", f"{path}.edges[{i}]")
                for j, v in enumerate(e):
                    _int(v, f"{path}.edges[{i}][{j}]", 0)
            return GraphicMatroid(_int(d.get("vertices"), f"{path}.vertices", 0), edges)
        if kind == "linear":
            p = _int(d.get("p"), f"{path}.p", 2)
            cols = _list(d.get("cols"), f"{path}.cols")
            for i, c in enumerate(cols):
                for j, v in enumerate(_list(c, f"{path}.cols[{i}]")):
                    _int(v, f"{path}.cols[{i}][{j}]")
            return LinearMatroid(p, cols)
    except InputError as exc:
        if exc.path is None:
            raise InputError(str(exc), path) from None
        if not exc.path.startswith(path):
            raise InputError(str(exc).split(": ", 1)[-1], f"{path}.{exc.path}") from None
        raise
    raise InputError(f"unknown matroid type {json.dumps(kind)}", f"{path}.type")


def instance_to_dict(inst: Instance) -> dict:
    out = {"matroid": matroid_to_dict(inst.matroid), "bases": [list(b) for b in inst.bases]}
    if inst.metadata:
        out["metadata"] = inst.metadata
    return out


def instance_from_dict(d: Any, path: str = "") -> Instance:
    d = _object(d, path or "instance")
    pre = f"{path}." if path else ""
    if "matroid" not in d:
        raise InputError("missing key", f"{pre}matroid")
    if "bases" not in d:
        raise InputError("missing key", f"{pre}bases")
    m = matroid_from_dict(d["matroid"], f"{pre}matroid")
    bases = _list(d["bases"], f"{pre}bases")
    for c, b in enumerate(bases):
        for i, x in enumerate(_list(b, f"{pre}bases[{c}]")):
            _int(x, f"{pre}bases[{c}][{i}]", 0)
    meta = d.get("metadata") or {}
    try:
        return Instance(m, bases, _object(meta, f"{pre}metadata"))
    except InputError as exc:
        if pre and exc.path is not None:
            raise InputError(str(exc).split(": ", 1)[-1], pre + exc.path) from None
        raise


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})") from None


def _dumps(obj: Any) -> str:
    return json.dumps(obj, ensure_ascii=False) + "\n"


def parse_instance(text: str) -> Instance:
    return instance_from_dict(_loads(text))


def serialize_instance(inst: Instance) -> str:
    return _dumps(instance_to_dict(inst))


def _ris_to_list(s: RIS) -> list[list[int]]:
    return [[x, c + 1] for x, c in s]


def _ris_from_list(v: Any, path: str) -> RIS:
    pairs = []
    for i, p in enumerate(_list(v, path)):
        p = _list(p, f"{path}[{i}]")
        if len(p) != 2:
            raise InputError("expected an [element, colour] pair", f"{path}[{i}]")
        x = _int(p[0], f"{path}[{i}][0]", 0)
        c = _int(p[1], f"{path}[{i}][1]", 1)
        pairs.append((x, c - 1))
    try:
        return RIS(pairs)
    except RotaError as exc:
        raise InputError(str(exc), path) from None


def decomposition_to_dict(dec: Decomposition, inst: Instance | None = None) -> dict:
    out = {
        "k": dec.k,
        "volume": dec.volume,
        "complete": [_ris_to_list(s) for s in dec.complete],
        "partial": [_ris_to_list(s) for s in dec.partial],
        "rounds": dec.rounds,
        "config": dec.config,
    }
    if inst is not None:
        out["instance"] = instance_to_dict(inst)
    return out


def decomposition_from_dict(d: Any) -> tuple[Decomposition, Instance | None]:
    d = _object(d, "decomposition")
    for key in ("k", "volume", "complete", "partial"):
        if key not in d:
            raise InputError("missing key", key)
    complete = [_ris_from_list(s, f"complete[{i}]") for i, s in enumerate(_list(d["complete"], "complete"))]
    partial = [_ris_from_list(s, f"partial[{i}]") for i, s in enumerate(_list(d["partial"], "partial"))]
    dec = Decomposition(
        complete,
        partial,
        _int(d["k"], "k", 0),
        _int(d["volume"], "volume", 0),
        rounds=_int(d.get("rounds", 0), "rounds", 0),
        config=_object(d.get("config", {}), "config"),
    )
    inst = instance_from_dict(d["instance"], "instance") if "instance" in d else None
    return dec, inst


def parse_decomposition(text: str) -> tuple[Decomposition, Instance | None]:
    return decomposition_from_dict(_loads(text))


def serialize_decomposition(dec: Decomposition, inst: Instance | None = None) -> str:
    return _dumps(decomposition_to_dict(dec, inst))


def _greedy_basis(m: Matroid, pool: Sequence[int], n: int) -> list[int]:
    chosen: list[int] = []
    for x in pool:
        if m.is_independent(chosen + [x]):
            chosen.append(x)
            if len(chosen) == n:
                break
    return sorted(chosen)


def generate_instance(kind: str, n: int, seed: int, p: int = 5) -> Instance:
    """A seeded random instance with ``n`` colour classes.

    ``linear-random`` draws ``2n`` random vectors in GF(p)^n and
    ``graphic-random`` a random connected multigraph-free pool of ``2n``
    edges on ``n + 1`` vertices; each class is a greedy basis of a freshly
    shuffled copy of the pool, so classes overlap.
    """
    if n < 1:
        raise InputError("n must be at least 1", "n")
    rng = random.Random(f"{kind}:{n}:{seed}:{p}")
    meta: dict[str, Any] = {"generator": kind, "n": n, "seed": seed}
    if kind == "uniform-identical":
        return Instance(UniformMatroid(n, n), [list(range(n))] * n, meta)
    if kind == "uniform-random":
        m = UniformMatroid(2 * n, n)
        return Instance(m, [sorted(rng.sample(range(2 * n), n)) for _ in range(n)], meta)
    if kind == "linear-random":
        if not is_prime(p):
            raise InputError(f"p={p} is not prime", "p")
        meta["p"] = p
        size = 2 * n
        for _ in range(GRAPH_RETRIES):
            cols = [[rng.randrange(p) for _ in range(n)] for _ in range(size)]
            m = LinearMatroid(p, cols)
            if m.rank() == n:
                break
        else:
            raise InputError(f"no rank-{n} vector pool after {GRAPH_RETRIES} draws")
        pool = list(range(size))
        bases = []
        for _ in range(n):
            rng.shuffle(pool)
            bases.append(_greedy_basis(m, pool, n))
        return Instance(m, bases, meta)
    if kind == "graphic-random":
        v = n + 1
        all_edges = [(a, b) for a in range(v) for b in range(a + 1, v)]
        size = min(2 * n, len(all_edges))
        for _ in range(GRAPH_RETRIES):
            edges = sorted(rng.sample(all_edges, size))
            m = GraphicMatroid(v, edges)
            if m.rank() == n:
                break
        else:
            raise InputError(f"no connected graph on {v} vertices after {GRAPH_RETRIES} draws")
        pool = list(range(size))
        bases = []
        for _ in range(n):
            rng.shuffle(pool)
            bases.append(_greedy_basis(m, pool, n))
        return Instance(m, bases, meta)
    raise InputError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}", "kind")
