from __future__ import annotations

import itertools
import random

import pytest

from conftest import A, B, C, pairs
from rota.errors import ContractError, InputError
from rota.io import generate_instance
from rota.oracle import exact_max_decomposition
from rota.rainbow import RIS, Family
from rota.selftest import random_instance
from rota.solver import Decomposition, SolverConfig, solve, solve_family, verify


def test_uniform_identical_full():
    from rota.matroid import UniformMatroid
    from rota.rainbow import Instance

    inst = Instance(UniformMatroid(3, 3), [[0, 1, 2]] * 3)
    dec = solve(inst, SolverConfig(f=3))
    assert dec.k == 3 and dec.volume == 9
    assert verify(inst, dec) == []


def test_triangle_single_basis(f2):
    dec = solve(f2, SolverConfig(f=1))
    assert dec.k == 1
    assert verify(f2, dec) == []
    assert solve(f2, SolverConfig(f=2)).k == exact_max_decomposition(f2).k == 2


def test_zero_target_is_empty(f2):
    dec = solve(f2, SolverConfig(f=0))
    assert (dec.k, dec.volume, dec.complete, dec.partial) == (0, 0, [], [])
    # With eps near 1 the default target is floor of something below 1.
    assert solve(f2, SolverConfig(eps=0.9)).k == 0


def test_default_target():
    cfg = SolverConfig(eps=0.2)
    assert [cfg.target(n) for n in (1, 5, 10, 40)] == [0, 2, 4, 16]
    with pytest.raises(InputError):
        SolverConfig(f=5).target(4)


@pytest.mark.parametrize(
    "kwargs", [{"eps": 0}, {"eps": 1.0}, {"mode": "fast"}, {"f": -1}, {"restarts": 0}, {"max_length": 0}]
)
def test_config_validation(kwargs):
    with pytest.raises(InputError):
        SolverConfig(**kwargs)


def test_verify_accepts_and_rejects(f2):
    good = Decomposition([pairs((A, 1), (C, 2))], [pairs((B, 1))], 1, 3)
    assert verify(f2, good) == []
    dup = Decomposition([pairs((A, 1), (C, 2))], [pairs((A, 1))], 1, 3)
    assert any("also appears" in p for p in verify(f2, dup))
    short = Decomposition([pairs((A, 1))], [], 1, 1)
    assert any("size 1, expected 2" in p for p in verify(f2, short))
    dependent = Decomposition([], [pairs((B, 1), (B, 2))], 0, 2)
    assert any("not a rainbow independent set" in p for p in verify(f2, dependent))
    wrong_k = Decomposition([pairs((A, 1), (C, 2))], [], 2, 2)
    assert any("k=2" in p for p in verify(f2, wrong_k))
    wrong_vol = Decomposition([pairs((A, 1), (C, 2))], [], 1, 5)
    assert any("volume=5" in p for p in verify(f2, wrong_vol))
    stray = Decomposition([], [RIS([(C, 0)])], 0, 1)
    assert any("not in the coloured universe" in p for p in verify(f2, stray))
    hidden = Decomposition([], [pairs((A, 1), (C, 2))], 0, 2)
    assert any("not counted" in p for p in verify(f2, hidden))


def test_solver_is_deterministic():
    inst = generate_instance("linear-random", 10, 3, p=3)
    cfg = SolverConfig(eps=0.2, seed=5, restarts=3)
    a, b = solve(inst, cfg), solve(inst, cfg)
    assert (a.k, a.volume, a.complete, a.partial, a.trace) == (b.k, b.volume, b.complete, b.partial, b.trace)


def test_hybrid_never_worse_than_greedy():
    rng = random.Random(21)
    for _ in range(25):
        n = rng.randint(2, 7)
        inst = random_instance(rng, n)
        f = rng.randint(1, n)
        greedy = solve(inst, SolverConfig(f=f, mode="greedy", restarts=2, exhaustive_fallback_n=0))
        hybrid = solve(inst, SolverConfig(f=f, mode="hybrid", restarts=2, exhaustive_fallback_n=0))
        assert (hybrid.k, hybrid.volume) >= (greedy.k, greedy.volume)


def test_trace_volume_never_decreases():
    rng = random.Random(8)
    for _ in range(20):
        n = rng.randint(3, 8)
        inst = random_instance(rng, n)
        dec = solve(inst, SolverConfig(f=rng.randint(1, n), restarts=2, exhaustive_fallback_n=0))
        assert verify(inst, dec) == []
        for _, recs in itertools.groupby(dec.trace, key=lambda r: r["restart"]):
            vols = [r["volume"] for r in recs]
            assert vols == sorted(vols)


@pytest.mark.parametrize("mode", ["proof-faithful", "greedy", "hybrid"])
def test_every_mode_returns_valid_output(mode):
    inst = generate_instance("graphic-random", 8, 2)
    dec = solve(inst, SolverConfig(mode=mode, restarts=2))
    assert verify(inst, dec) == []
    assert dec.config["mode"] == mode


def test_solve_family_continues(f2):
    fam = Family([pairs((B, 1)), pairs((C, 2))])
    out = solve_family(f2, fam, SolverConfig())
    assert out.volume >= fam.volume
    bad = Family([pairs((B, 1), (B, 2))])
    with pytest.raises(ContractError):
        solve_family(f2, bad)
