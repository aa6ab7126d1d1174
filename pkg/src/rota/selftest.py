"""Seeded randomized suites that cross-check the engines against their guarantees.

Each suite draws random instances and families from one ``random.Random``,
so a (seed, trials, n) triple always produces the same counts.  The suites
back both the ``selftest`` command and the acceptance tests.
"""

from __future__ import annotations

import random
from collections.abc import Callable
from dataclasses import dataclass, field

from .cascade import CascadeAugment, execute_cascade, extend_Q, initial_Q
from .errors import RotaError, TheoremViolation
from .io import generate_instance
from .matroid import GraphicMatroid, LinearMatroid, UniformMatroid
from .oracle import brute_force_addable, matroid_axiom_check
from .rainbow import RIS, Coloured, Family, Instance, check_family, is_ris
from .rebalance import (
    NoProgress,
    VolumeIncreased,
    apply_out_star,
    assign_distinct_missing_colours,
    build_missing_digraph,
    compute_E,
    find_out_stars,
    many_missing_step,
    missing_count,
    RebalanceConstants,
    VolumeIncrease,
    FoundPair,
    compute_constants,
)
from .swaps import (
    Swappables,
    build_witness_injection,
    count_addable_or_augment,
    enumerate_addable,
    many_good_dichotomy,
)


@dataclass
class SuiteResult:
    name: str
    trials: int = 0
    passed: int = 0
    skipped: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.trials > 0 and self.passed == self.trials

    def fail(self, msg: str) -> None:
        self.trials += 1
        if len(self.failures) < 20:
            self.failures.append(msg)

    def succeed(self) -> None:
        self.trials += 1
        self.passed += 1

    def line(self) -> str:
        return f"{self.name}: {self.passed}/{self.trials} passed, {self.skipped} skipped"


def random_matroid(rng: random.Random, max_ground: int = 8):
    """A random matroid of one of the three backends with ground size <= max_ground."""
    kind = rng.choice(["uniform", "graphic", "linear"])
    g = rng.randint(1, max_ground)
    if kind == "uniform":
        return UniformMatroid(g, rng.randint(0, g))
    if kind == "graphic":
        v = rng.randint(2, 5)
        return GraphicMatroid(v, [tuple(rng.sample(range(v), 2)) if rng.random() > 0.1 else (0, 0) for _ in range(g)])
    p = rng.choice([2, 3, 5, 7])
    d = rng.randint(1, 4)
    return LinearMatroid(p, [[rng.randrange(p) for _ in range(d)] for _ in range(g)])


def random_instance(rng: random.Random, n: int) -> Instance:
    kind = rng.choice(["uniform-identical", "uniform-random", "linear-random", "linear-random", "graphic-random"])
    p = rng.choice([2, 3, 5]) if kind == "linear-random" else 5
    return generate_instance(kind, n, rng.randrange(10**9), p)


def random_family(rng: random.Random, inst: Instance, f: int, fill: float | None = None) -> Family:
    """``f`` disjoint RISs grown greedily from a shuffled universe."""
    universe = [Coloured(x, c) for c, b in enumerate(inst.bases) for x in b]
    used: set[Coloured] = set()
    members = []
    for _ in range(f):
        target = rng.randint(0, inst.n) if fill is None else round(fill * inst.n)
        rng.shuffle(universe)
        chosen: list[Coloured] = []
        for p in universe:
            if len(chosen) >= target:
                break
            if p in used or any(q.c == p.c or q.x == p.x for q in chosen):
                continue
            if inst.matroid.is_independent([q.x for q in chosen] + [p.x]):
                chosen.append(p)
        used.update(chosen)
        members.append(RIS(chosen))
    return Family(members)


def _setup(rng: random.Random, max_n: int, min_n: int = 1, f_max: int | None = None) -> tuple[Instance, Family]:
    n = rng.randint(min_n, max_n)
    inst = random_instance(rng, n)
    hi = n - 1 if f_max is None else min(f_max, n - 1)
    f = rng.randint(1, max(1, hi))
    return inst, random_family(rng, inst, f)


def suite_axioms(seed: int, trials: int = 200, max_ground: int = 8) -> SuiteResult:
    res = SuiteResult("axioms")
    rng = random.Random(seed)
    for t in range(trials):
        m = random_matroid(rng, max_ground)
        report = matroid_axiom_check(m)
        if report.ok:
            res.succeed()
        else:
            res.fail(f"trial {t} {m!r}: {report.violations[0]}")
    return res


def suite_addable(seed: int, trials: int = 1000, max_n: int = 6) -> SuiteResult:
    res = SuiteResult("addable")
    rng = random.Random(seed)
    while res.trials < trials:
        inst, fam = _setup(rng, max_n, min_n=2)
        i = rng.randrange(len(fam))
        s = fam[i]
        missing = sorted(set(range(inst.n)) - s.colours())
        if not missing:
            res.skipped += 1
            continue
        b = rng.choice(missing)
        engine = {c.target for c in enumerate_addable(inst, fam, i, b)}
        oracle = brute_force_addable(inst, fam, s, b)
        if engine == oracle:
            res.succeed()
        else:
            res.fail(f"{inst!r} {fam!r} b={b}: engine-only {sorted(engine - oracle)}, oracle-only {sorted(oracle - engine)}")
    return res


def suite_dichotomy(seed: int, trials: int = 1000, max_n: int = 8) -> SuiteResult:
    res = SuiteResult("dichotomy")
    rng = random.Random(seed)
    while res.trials < trials:
        inst, fam = _setup(rng, max_n, min_n=2)
        i = rng.randrange(len(fam))
        s = fam[i]
        missing = sorted(set(range(inst.n)) - s.colours())
        if not missing:
            res.skipped += 1
            continue
        b = rng.choice(missing)
        try:
            if len(s):
                out = many_good_dichotomy(inst, fam, i, b)
                if isinstance(out, Swappables) and len(out.colours) < inst.n - len(fam.used.slice(b)):
                    raise TheoremViolation("too few swappable colours")
            count_addable_or_augment(inst, fam, i, b)
        except TheoremViolation as exc:
            res.fail(f"{inst!r} {fam!r} b={b}: {exc}")
            continue
        res.succeed()
    return res


def suite_matching(seed: int, trials: int = 1000, max_n: int = 8) -> SuiteResult:
    res = SuiteResult("matching")
    rng = random.Random(seed)
    while res.trials < trials:
        inst, fam = _setup(rng, max_n)
        s = fam[rng.randrange(len(fam))]
        b = rng.randrange(inst.n)
        try:
            phi = build_witness_injection(inst, s, b)
        except TheoremViolation as exc:
            res.fail(f"{inst!r} {s!r} b={b}: {exc}")
            continue
        proj = s.projection()
        ok = (
            set(phi) == set(s)
            and len(set(phi.values())) == len(phi)
            and all(
                y in inst.base_sets[b] and inst.matroid.is_independent((proj - {p.x}) | {y})
                for p, y in phi.items()
            )
        )
        if ok:
            res.succeed()
        else:
            res.fail(f"{inst!r} {s!r} b={b}: bad injection {phi}")
    return res


def _family_problems(inst: Instance, fam: Family) -> list[str]:
    return check_family(inst, fam)


def suite_cascade(seed: int, trials: int = 1000, max_n: int = 8, max_length: int = 3) -> tuple[SuiteResult, SuiteResult]:
    """Executed cascades (first result) and the growth bound of each extension (second)."""
    exe = SuiteResult("cascade-execution")
    growth = SuiteResult("cascade-growth")
    rng = random.Random(seed)
    attempts = 0
    while exe.trials < trials and attempts < 50 * trials:
        attempts += 1
        inst, fam = _setup(rng, max_n, min_n=2)
        open_members = [i for i, s in enumerate(fam) if len(s) < inst.n]
        if not open_members:
            continue
        s0 = rng.choice(open_members)
        q = initial_Q(inst, fam, s0)
        members = (s0,)
        depth = rng.randint(1, max_length)
        augment: CascadeAugment | None = None
        while len(members) < depth:
            holders = sorted({fam.owner(t) for t in q} - {None} - set(members))
            if not holders:
                break
            nxt = rng.choice(holders)
            hits = sum(1 for t in q if t in fam[nxt])
            try:
                out = extend_Q(inst, fam, members, q, nxt)
            except TheoremViolation as exc:
                growth.fail(f"{inst!r} {fam!r} {members}+{nxt}: {exc}")
                break
            if isinstance(out, CascadeAugment):
                augment = out
                break
            ell = len(members)
            bound = hits * (inst.n - len(fam) - ell) - (ell + 1) * inst.n
            if inst.n - len(fam) - ell > 0 and bound > 0:
                if len(out.entries) >= bound:
                    growth.succeed()
                else:
                    growth.fail(f"{inst!r} {fam!r}: |NextQ|={len(out.entries)} < {bound}")
            else:
                growth.skipped += 1
            q, members = out.entries, out.members
        if augment is not None:
            _check_execution(exe, inst, fam, augment.chain, augment.final)
            continue
        if not q:
            continue
        chain = q[rng.choice(sorted(q))]
        _check_execution(exe, inst, fam, chain, None)
    return exe, growth


def _check_execution(res: SuiteResult, inst: Instance, fam: Family, chain, final) -> None:
    try:
        out = execute_cascade(inst, fam, chain, final)
    except RotaError as exc:
        res.fail(f"{inst!r} {fam!r} {chain}: {exc}")
        return
    want = fam.volume + (0 if final is None else 1)
    problems = _family_problems(inst, out)
    if out.volume != want:
        problems.append(f"volume {out.volume}, expected {want}")
    if final is None and not is_ris(inst, list(out[chain.members[-1]]) + [chain.target]):
        problems.append("last member cannot take the target")
    if any(fam.is_used(y, c) for y, c in chain.witness_pairs()):
        problems.append("a witness was already used")
    if problems:
        res.fail(f"{inst!r} {fam!r} {chain}: {'; '.join(problems)}")
    else:
        res.succeed()


def suite_rebalance(
    seed: int, trials: int = 500, max_n: int = 10, eps: float = 0.3, stats: dict[str, int] | None = None
) -> SuiteResult:
    """many_missing_step rounds: volume, disjointness and out-star centre checks."""
    res = SuiteResult("rebalance")
    rng = random.Random(seed)
    while res.trials < trials:
        n = rng.randint(4, max_n)
        inst = random_instance(rng, n)
        f = rng.randint(1, max(1, int((1 - eps) * n / 2)))
        fam = random_family(rng, inst, f)
        consts = compute_constants(eps, n)
        problems = check_star_round(inst, fam, consts, stats)
        try:
            out = many_missing_step(inst, fam, consts, max_rounds=3)
        except TheoremViolation as exc:
            problems.append(str(exc))
            out = None
        if out is not None:
            want = fam.volume + (1 if isinstance(out, VolumeIncreased) else 0)
            if out.family.volume != want:
                problems.append(f"volume {out.family.volume}, expected {want}")
            problems += _family_problems(inst, out.family)
        if problems:
            res.fail(f"{inst!r} {fam!r}: {'; '.join(problems)}")
        else:
            res.succeed()
    return res


def check_star_round(
    inst: Instance, fam: Family, consts: RebalanceConstants, stats: dict[str, int] | None = None
) -> list[str]:
    """Run one assignment/digraph/star round by hand and check every applied star.

    ``stats`` (if given) counts applied stars and those whose centre check ran.
    """
    stats = {} if stats is None else stats
    problems: list[str] = []
    assigned = assign_distinct_missing_colours(inst, fam)
    if isinstance(assigned, VolumeIncrease):
        return problems
    fam2 = assigned.family
    if fam2.volume != fam.volume:
        problems.append("colour assignment changed the volume")
    cols = assigned.colours
    if len(set(cols.values())) != len(cols):
        problems.append("assigned colours are not distinct")
    for i, b in cols.items():
        if len(fam2[i]) < inst.n and b in fam2[i].colours():
            problems.append(f"member {i} contains its assigned colour {b}")
    E = compute_E(inst, fam2, consts)
    g = build_missing_digraph(inst, fam2, E, cols, consts)
    if isinstance(g, (VolumeIncreased, FoundPair)):
        return problems
    for star in find_out_stars(g, E):
        before = missing_count(inst, fam2[star.centre])
        res = apply_out_star(inst, fam2, star, cols)
        after = missing_count(inst, res.family[star.centre])
        stats["stars"] = stats.get("stars", 0) + 1
        stats["full_stars"] = stats.get("full_stars", 0) + int(not res.partial)
        if res.family.volume != fam2.volume:
            problems.append("out-star changed the volume")
        if not res.partial and after < E + 1:
            problems.append(f"centre {star.centre} misses {after} < {E + 1} colours")
        if after != before + len(res.moved):
            problems.append("centre lost a different number of elements than were moved")
        if len({t for _, t in res.moved}) != len(res.moved) or len({l for l, _ in res.moved}) != len(res.moved):
            problems.append("out-star moves are not distinct")
        problems += _family_problems(inst, res.family)
        fam2 = res.family
    return problems


SUITES: dict[str, Callable[..., object]] = {
    "axioms": suite_axioms,
    "addable": suite_addable,
    "dichotomy": suite_dichotomy,
    "matching": suite_matching,
    "cascade": suite_cascade,
    "rebalance": suite_rebalance,
}


def run_all(seed: int, trials: int, n: int) -> list[SuiteResult]:
    results = [
        suite_axioms(seed, trials, max_ground=min(8, max(n, 1))),
        suite_addable(seed, trials, max_n=max(2, min(n, 6))),
        suite_dichotomy(seed, trials, max_n=max(2, n)),
        suite_matching(seed, trials, max_n=max(1, n)),
    ]
    results.extend(suite_cascade(seed, trials, max_n=max(2, n)))
    results.append(suite_rebalance(seed, trials, max_n=max(4, n)))
    return results
