"""Command-line entry point: solve, verify, gen, oracle, selftest, bench.

Exit codes: 0 success, 1 verification failure or invariant violation,
2 input error.  Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import statistics
import sys
import time
from collections.abc import Sequence

from . import io
from .errors import BudgetExceeded, ContractError, InputError, RotaError, TheoremViolation
from .oracle import (
    OracleBudget,
    brute_force_addable,
    brute_force_cascade_Q,
    exact_max_decomposition,
    matroid_axiom_check,
)
from .rainbow import Family
from .selftest import run_all
from .solver import MODES, SolverConfig, solve, verify

log = logging.getLogger("rota")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read file: {exc.strerror}", path) from None


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _family_arg(text: str) -> Family:
    data = io._loads(text)
    if isinstance(data, dict) and "complete" in data:
        dec, _ = io.decomposition_from_dict(data)
        return Family(dec.complete + dec.partial)
    return Family(io._ris_from_list(s, f"family[{i}]") for i, s in enumerate(io._list(data, "family")))


def cmd_solve(args) -> int:
    inst = io.parse_instance(_read(args.instance))
    cfg = SolverConfig(
        eps=args.epsilon,
        f=args.f,
        mode=args.mode,
        max_length=args.max_length,
        max_rounds=args.max_rounds,
        seed=args.seed,
        restarts=args.restarts,
    )
    dec = solve(inst, cfg)
    if args.trace:
        _write(args.trace, "".join(json.dumps(rec) + "\n" for rec in dec.trace))
    _write(args.out, io.serialize_decomposition(dec, inst))
    log.info("k=%d volume=%d rounds=%d", dec.k, dec.volume, dec.rounds)
    return 0


def cmd_verify(args) -> int:
    dec, embedded = io.parse_decomposition(_read(args.decomposition))
    inst = io.parse_instance(_read(args.instance)) if args.instance else embedded
    if inst is None:
        raise InputError("no instance: pass --instance or embed one in the file", "instance")
    problems = verify(inst, dec)
    for p in problems:
        print(p)
    print(f"{'FAIL' if problems else 'OK'}: k={dec.k} volume={dec.volume} violations={len(problems)}", file=sys.stderr)
    return 1 if problems else 0


def cmd_gen(args) -> int:
    inst = io.generate_instance(args.kind, args.n, args.seed, args.p)
    _write(args.out, io.serialize_instance(inst))
    return 0


def cmd_oracle(args) -> int:
    inst = io.parse_instance(_read(args.instance))
    budget = OracleBudget(max_n=args.max_n)
    if args.op == "exact":
        res = exact_max_decomposition(inst, budget)
        out = {"k": res.k, "bases": [[[x, c + 1] for x, c in b] for b in res.bases]}
    elif args.op == "axioms":
        report = matroid_axiom_check(inst.matroid, budget)
        out = {"ok": report.ok, "violations": report.violations}
    else:
        if not args.family:
            raise InputError(f"oracle {args.op} needs --family", "family")
        fam = _family_arg(_read(args.family))
        if args.op == "addable":
            if args.member is None or args.colour is None:
                raise InputError("oracle addable needs --member and --colour")
            found = brute_force_addable(inst, fam, fam[args.member], args.colour - 1)
        else:
            seq = [int(v) for v in (args.sequence or "").split(",") if v.strip()]
            found = brute_force_cascade_Q(inst, fam, seq, budget)
        out = {"elements": [[x, c + 1] for x, c in sorted(found)]}
    print(json.dumps(out))
    return 0


def cmd_selftest(args) -> int:
    results = run_all(args.seed, args.trials, args.n)
    bad = 0
    for r in results:
        print(r.line())
        for msg in r.failures[:3]:
            print(f"  {msg}")
        bad += r.trials - r.passed
    return 1 if bad else 0


def cmd_bench(args) -> int:
    kinds = [k.strip() for k in args.kinds.split(",")]
    sizes = [int(v) for v in args.sizes.split(",")]
    print(f"{'kind':<18} {'n':>4} {'runs':>5} {'f':>4} {'k_min':>6} {'k_mean':>7} {'hit':>6} {'t_mean':>8} {'t_max':>8}")
    for kind in kinds:
        for n in sizes:
            ks, times = [], []
            cfg = SolverConfig(eps=args.epsilon, mode=args.mode, restarts=args.restarts)
            for seed in range(args.seeds):
                inst = io.generate_instance(kind, n, seed, args.p)
                t0 = time.perf_counter()
                dec = solve(inst, SolverConfig(**{**cfg.echo(), "seed": seed}))
                times.append(time.perf_counter() - t0)
                ks.append(dec.k)
            target = int(args.ratio * n)
            hit = sum(k >= target for k in ks) / len(ks)
            print(
                f"{kind:<18} {n:>4} {len(ks):>5} {cfg.target(n):>4} {min(ks):>6} {statistics.mean(ks):>7.2f}"
                f" {hit:>6.0%} {statistics.mean(times):>7.2f}s {max(times):>7.2f}s"
            )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rota", description="Disjoint transversal bases from n bases of a rank-n matroid.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="search for disjoint transversal bases")
    p.add_argument("instance", nargs="?", default="-", help="instance JSON file (default stdin)")
    p.add_argument("--epsilon", type=float, default=0.2)
    p.add_argument("--f", type=int, default=None, help="number of RISs to grow (default floor((1-eps)n/2))")
    p.add_argument("--mode", choices=MODES, default="hybrid")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-rounds", type=int, default=None)
    p.add_argument("--max-length", type=int, default=12, help="longest cascade to try")
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--trace", help="write one JSON record per solver action to this file")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a decomposition file")
    p.add_argument("decomposition", nargs="?", default="-")
    p.add_argument("--instance", help="instance file, if not embedded in the decomposition")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="write a seeded random instance")
    p.add_argument("--kind", choices=io.KINDS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=int, default=5, help="field size for linear-random")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="run a brute-force reference computation")
    p.add_argument("op", choices=["exact", "axioms", "addable", "cascade"])
    p.add_argument("instance")
    p.add_argument("--family", help="JSON list of RISs as [element, colour] pairs, or a decomposition file")
    p.add_argument("--member", type=int, help="0-based member index for addable")
    p.add_argument("--colour", type=int, help="1-based missing colour for addable")
    p.add_argument("--sequence", help="comma-separated 0-based member indices for cascade")
    p.add_argument("--max-n", type=int, default=4)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("selftest", help="run the seeded randomized suites")
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selftest)

    p = sub.add_parser("bench", help="time the solver on the seeded suite")
    p.add_argument("--kinds", default="uniform-identical,linear-random")
    p.add_argument("--sizes", default="10,20,40")
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--epsilon", type=float, default=0.2)
    p.add_argument("--mode", choices=MODES, default="hybrid")
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--p", type=int, default=5)
    p.add_argument("--ratio", type=float, default=0.3, help="report the share of runs with k >= ratio*n")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (InputError, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (TheoremViolation, ContractError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 1
    except RotaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


run_cli = main

if __name__ == "__main__":
    sys.exit(main())
