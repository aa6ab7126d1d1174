"""The volume-increasing search loop and its output.

Each round first tries a free augmentation of one member (direct or after
a simple swap) and then a cascade ending in an augmentation.  Failing both,
a colour-concentration pass reshuffles members.  Only augmentations change
the volume, and
each changes it by exactly one.  The best family seen (by number of
complete members, then volume) is what gets reported.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import asdict, dataclass, field

from .cascade import run_cascade, initial_Q
from .errors import ContractError, InputError, TheoremViolation
from .oracle import OracleBudget, exact_max_decomposition
from .rainbow import RIS, Coloured, Family, Instance, is_ris
from .rebalance import (
    FoundPair,
    FoundS0,
    NoProgress,
    RebalanceConstants,
    VolumeIncreased,
    compute_constants,
    many_missing_step,
)
from .swaps import apply_free, find_free_augment

log = logging.getLogger(__name__)

MODES = ("proof-faithful", "greedy", "hybrid")


@dataclass(frozen=True)
class SolverConfig:
    eps: float = 0.2
    f: int | None = None
    mode: str = "hybrid"
    max_length: int = 12
    max_rounds: int | None = None
    seed: int = 0
    restarts: int = 8
    exhaustive_fallback_n: int = 4
    patience: int = 4

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise InputError(f"epsilon must lie strictly between 0 and 1, got {self.eps}", "eps")
        if self.mode not in MODES:
            raise InputError(f"mode must be one of {', '.join(MODES)}", "mode")
        if self.f is not None and self.f < 0:
            raise InputError("f must be non-negative", "f")
        if self.max_length < 1 or self.restarts < 1 or self.patience < 1:
            raise InputError("max_length, restarts and patience must be positive")

    def target(self, n: int) -> int:
        if self.f is None:
            return math.floor((1 - self.eps) * n / 2 + 1e-9)
        if self.f > n:
            raise InputError(f"f={self.f} exceeds n={n}", "f")
        return self.f

    def round_cap(self, n: int, f: int) -> int:
        return self.max_rounds if self.max_rounds is not None else max(10 * n * f, 1)

    def echo(self) -> dict:
        return asdict(self)


@dataclass
class Decomposition:
    complete: list[RIS]
    partial: list[RIS]
    k: int
    volume: int
    rounds: int = 0
    trace: list[dict] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @classmethod
    def from_family(cls, fam: Family, **extra) -> Decomposition:
        n_full = max((len(s) for s in fam), default=0)
        return cls.from_members(list(fam), n_full, **extra)

    @classmethod
    def from_members(cls, members: list[RIS], n: int, **extra) -> Decomposition:
        complete = [s for s in members if len(s) == n and n > 0]
        partial = [s for s in members if not (len(s) == n and n > 0)]
        return cls(complete, partial, len(complete), sum(len(s) for s in members), **extra)


def verify(inst: Instance, dec: Decomposition) -> list[str]:
    """Every problem with a decomposition; an empty list means it is valid."""
    problems: list[str] = []
    seen: dict[tuple[int, int], str] = {}
    groups = [("complete", dec.complete), ("partial", dec.partial)]
    for label, sets in groups:
        for i, s in enumerate(sets):
            name = f"{label}[{i}]"
            for x, c in s:
                if not inst.in_universe((x, c)):
                    problems.append(f"{name}: ({x},{c}) is not in the coloured universe")
                    continue
                other = seen.setdefault((x, c), name)
                if other != name:
                    problems.append(f"{name}: ({x},{c}) also appears in {other}")
            if all(inst.in_universe(p) for p in s) and not is_ris(inst, s):
                problems.append(f"{name}: not a rainbow independent set")
    for i, s in enumerate(dec.complete):
        if len(s) != inst.n:
            problems.append(f"complete[{i}]: size {len(s)}, expected {inst.n}")
    for i, s in enumerate(dec.partial):
        if len(s) == inst.n:
            problems.append(f"partial[{i}]: is a full transversal basis but not counted in k")
    if dec.k != len(dec.complete):
        problems.append(f"k={dec.k} but {len(dec.complete)} complete bases are listed")
    vol = sum(len(s) for _, sets in groups for s in sets)
    if dec.volume != vol:
        problems.append(f"volume={dec.volume} but the listed sets hold {vol} elements")
    return problems


def _score(fam: Family, n: int) -> tuple[int, int]:
    return (sum(1 for s in fam if len(s) == n), fam.volume)


class _Run:
    """One search from a fixed starting family on a fixed instance."""

    def __init__(self, inst: Instance, cfg: SolverConfig, fam: Family, consts: RebalanceConstants):
        self.inst = inst
        self.cfg = cfg
        self.fam = fam
        self.consts = consts
        self.trace: list[dict] = []
        self.rounds = 0
        self.best = fam
        self.best_score = _score(fam, inst.n)

    def note(self, action: str, **info) -> None:
        rec = {"round": self.rounds, "action": action, "volume": self.fam.volume}
        rec.update(info)
        self.trace.append(rec)
        score = _score(self.fam, self.inst.n)
        if score > self.best_score:
            self.best, self.best_score = self.fam, score

    def members_by_fullness(self) -> list[int]:
        n = self.inst.n
        return sorted((i for i, s in enumerate(self.fam) if len(s) < n), key=lambda i: (-len(self.fam[i]), i))

    def free_augment(self) -> bool:
        for i in self.members_by_fullness():
            cert = find_free_augment(self.inst, self.fam, i)
            if cert is not None:
                before = self.fam.volume
                self.fam = apply_free(self.fam, i, cert)
                if self.fam.volume != before + 1:
                    raise TheoremViolation("a free augmentation must add exactly one element")
                self.note("augment", member=i, kind=cert.kind)
                return True
        return False

    def try_cascade(self, s0: int, prefer_next: int | None = None, q0=None) -> bool:
        if len(self.fam) < 1:
            return False
        run = run_cascade(self.inst, self.fam, s0, self.cfg.max_length, prefer_next, q0)
        if run.outcome is None:
            return False
        before = self.fam.volume
        self.fam = run.outcome.execute(self.inst, self.fam)
        if self.fam.volume != before + 1:
            raise TheoremViolation("a cascade augmentation must add exactly one element")
        self.note("cascade", members=list(run.members), q_sizes=run.q_sizes, length=len(run.outcome.chain.members))
        return True

    def cascade_search(self) -> bool:
        n, consts = self.inst.n, self.consts
        threshold = consts.C * n
        ranked = []
        for i in self.members_by_fullness():
            q = initial_Q(self.inst, self.fam, i)
            if not q:
                continue
            many_missing = n - len(self.fam[i]) >= consts.D
            big_q = len(q) >= threshold
            if self.cfg.mode == "proof-faithful" and not (many_missing or big_q):
                continue
            ranked.append(((not many_missing, not big_q, -len(q), i), i, q))
        for _, i, q in sorted(ranked, key=lambda r: r[0]):
            if self.try_cascade(i, q0=q):
                return True
        return False

    def rebalance(self) -> str:
        if 2 * len(self.fam) > self.inst.n:
            return "skipped"
        out = many_missing_step(self.inst, self.fam, self.consts)
        rounds = len(out.diagnostics)
        if isinstance(out, VolumeIncreased):
            self.fam = out.family
            self.note("rebalance-augment", rebalance_rounds=rounds)
            return "augmented"
        self.fam = out.family
        if isinstance(out, FoundS0):
            self.note("rebalance", outcome="found-s0", member=out.s0, rebalance_rounds=rounds)
            return "augmented" if self.try_cascade(out.s0) else "neutral"
        if isinstance(out, FoundPair):
            self.note("rebalance", outcome="found-pair", members=[out.s0, out.s1], rebalance_rounds=rounds)
            return "augmented" if self.try_cascade(out.s0, prefer_next=out.s1) else "neutral"
        assert isinstance(out, NoProgress)
        self.note("rebalance", outcome="no-progress", rebalance_rounds=rounds)
        return "neutral"

    def run(self) -> Family:
        n, f = self.inst.n, len(self.fam)
        cap = self.cfg.round_cap(n, f)
        idle = 0
        seen = {self.fam.state_key()}
        while self.rounds < cap and self.fam.volume < n * f:
            self.rounds += 1
            if self.free_augment():
                idle = 0
                continue
            if self.cfg.mode == "greedy":
                break
            if self.cascade_search():
                idle = 0
                continue
            status = self.rebalance()
            if status == "augmented":
                idle = 0
                continue
            key = self.fam.state_key()
            idle += 1
            if status == "skipped" or key in seen or idle >= self.cfg.patience:
                break
            seen.add(key)
        return self.best


def _seed_family(inst: Instance, f: int, cfg: SolverConfig) -> Family:
    if inst.n > cfg.exhaustive_fallback_n:
        return Family.empty(f)
    exact = exact_max_decomposition(inst, OracleBudget(max_n=cfg.exhaustive_fallback_n))
    bases = [RIS(b) for b in exact.bases[:f]]
    return Family(bases + [RIS() for _ in range(f - len(bases))])


def _recolour(fam: Family, perm: list[int]) -> Family:
    return Family([RIS(Coloured(x, perm[c]) for x, c in s) for s in fam])


def solve(inst: Instance, cfg: SolverConfig | None = None) -> Decomposition:
    """Search for many disjoint transversal bases; see :class:`SolverConfig`."""
    cfg = cfg or SolverConfig()
    n = inst.n
    f = cfg.target(n)
    echo = cfg.echo()
    if f == 0:
        return Decomposition([], [], 0, 0, 0, [], echo)
    consts = compute_constants(cfg.eps, n)
    rng = random.Random(cfg.seed)
    best: tuple[tuple[int, int], Family, _Run] | None = None
    for attempt in range(cfg.restarts):
        perm = list(range(n))
        if attempt > 0:
            rng.shuffle(perm)
        work = inst if attempt == 0 else inst.recoloured(perm)
        inv = [0] * n
        for c, p in enumerate(perm):
            inv[p] = c
        start = _seed_family(inst, f, cfg)
        run = _Run(work, cfg, _recolour(start, inv), consts)
        found = _recolour(run.run(), perm)
        for rec in run.trace:
            rec["restart"] = attempt
        score = _score(found, n)
        log.debug("restart %d: k=%d volume=%d rounds=%d", attempt, score[0], score[1], run.rounds)
        if best is None or score > best[0]:
            best = (score, found, run)
        if score[0] == f:
            break
    score, fam, run = best
    trace = run.trace
    dec = Decomposition.from_members(list(fam), n, rounds=run.rounds, trace=trace, config=echo)
    problems = verify(inst, dec)
    if problems:
        raise TheoremViolation("solver produced an invalid decomposition: " + "; ".join(problems))
    return dec


def solve_family(inst: Instance, fam: Family, cfg: SolverConfig | None = None) -> Family:
    """Continue the search from an existing family (no restarts)."""
    cfg = cfg or SolverConfig()
    if any(not is_ris(inst, s) for s in fam):
        raise ContractError("starting family contains an invalid member")
    return _Run(inst, cfg, fam, compute_constants(cfg.eps, inst.n)).run()
