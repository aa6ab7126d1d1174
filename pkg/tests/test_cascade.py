from __future__ import annotations

import random

import pytest

from conftest import A, B, C, pairs
from rota.cascade import (
    CascadeAugment,
    Chain,
    NextQ,
    choose_next,
    execute_cascade,
    extend_Q,
    initial_Q,
    run_cascade,
    validate_chain,
)
from rota.errors import ContractError, StaleCertificateError, TheoremViolation
from rota.oracle import brute_force_cascade_Q
from rota.rainbow import Coloured, Family, check_family, is_ris
from rota.selftest import random_family, random_instance
from rota.swaps import Certificate


def test_initial_q_pair_example(f2, f2_pair):
    q = initial_Q(f2, f2_pair, 0)
    assert set(q) == {(A, 0)}
    chain = q[(A, 0)]
    assert chain.colours == (1,) and chain.witnesses == (B,)
    assert set(q) == brute_force_cascade_Q(f2, f2_pair, [0])


def test_initial_q_excludes_direct_only_targets(f2, f2_single):
    q = initial_Q(f2, f2_single, 0)
    # (b,2) and (c,2) are only directly addable, so they need no witness and are left out.
    assert set(q) == {(B, 0)}
    assert set(q) == brute_force_cascade_Q(f2, f2_single, [0])


def test_initial_q_rejects_full_member(f2):
    fam = Family([pairs((A, 1), (C, 2))])
    with pytest.raises(ContractError):
        initial_Q(f2, fam, 0)


def _fake_chain(target):
    return Chain((0,), (3,), (), (0,), Coloured(*target), 0)


def test_choose_next_argmax(f1):
    fam = Family([pairs((0, 1)), pairs((1, 1), (2, 2), (0, 3)), pairs((2, 1), (0, 2))])
    all_in_one = {t: _fake_chain(t) for t in [(1, 0), (2, 1)]}
    assert choose_next(fam, (0,), all_in_one) == 1
    split = {t: _fake_chain(t) for t in [(1, 0), (2, 1), (0, 2), (2, 0)]}
    assert choose_next(fam, (0,), split) == 1


def test_choose_next_ties_break_by_index(f1):
    fam = Family([pairs((0, 1)), pairs((1, 1)), pairs((2, 1))])
    q = {t: _fake_chain(t) for t in [(1, 0), (2, 0)]}
    assert choose_next(fam, (0,), q) == 1


def test_choose_next_rejects_unused_target(f1):
    fam = Family([pairs((0, 1)), pairs((1, 1))])
    with pytest.raises(ContractError):
        choose_next(fam, (0,), {(2, 0): _fake_chain((2, 0))})


def test_execute_single_step_with_final_addition(f2, f2_pair):
    chain = initial_Q(f2, f2_pair, 0)[(A, 0)]
    final = Certificate(Coloured(A, 0), 0, base=0)
    out = execute_cascade(f2, f2_pair, chain, final)
    assert out[0] == pairs((B, 2), (A, 1))
    assert out[1] == pairs((C, 2))
    assert (f2_pair.volume, out.volume) == (2, 3)
    assert check_family(f2, out) == []


def test_execute_without_final_keeps_volume(f2, f2_pair):
    chain = initial_Q(f2, f2_pair, 0)[(A, 0)]
    out = execute_cascade(f2, f2_pair, chain)
    assert out.volume == f2_pair.volume
    assert out[0] == pairs((B, 2))
    assert is_ris(f2, list(out[0]) + [(A, 0)])


def test_execute_stale_chain(f2, f2_pair):
    chain = initial_Q(f2, f2_pair, 0)[(A, 0)]
    moved = f2_pair.replace({})
    with pytest.raises(StaleCertificateError):
        execute_cascade(f2, moved, chain)


def test_execute_invalid_chain(f2, f2_pair):
    bogus = Chain((0,), (1,), (), (C,), Coloured(A, 0), f2_pair.version)
    assert validate_chain(f2, f2_pair, bogus)
    with pytest.raises(TheoremViolation):
        execute_cascade(f2, f2_pair, bogus)


def test_run_cascade_f2(f2, f2_pair):
    run = run_cascade(f2, f2_pair, 0)
    assert isinstance(run.outcome, CascadeAugment)
    assert run.outcome.execute(f2, f2_pair).volume == 3


def _find_two_level(seed: int):
    """A family where a cascade through two members ends in an augmentation."""
    rng = random.Random(seed)
    for _ in range(3000):
        n = rng.randint(3, 6)
        inst = random_instance(rng, n)
        fam = random_family(rng, inst, rng.randint(2, n - 1), fill=rng.choice([0.6, 0.8, 1.0]))
        for s0 in range(len(fam)):
            if len(fam[s0]) == n:
                continue
            q = initial_Q(inst, fam, s0)
            holders = sorted({fam.owner(t) for t in q} - {None})
            for h in holders:
                out = extend_Q(inst, fam, (s0,), q, h)
                if isinstance(out, CascadeAugment):
                    return inst, fam, out
    raise AssertionError("no two-level cascade found")


def test_two_level_augment_executes():
    inst, fam, aug = _find_two_level(1)
    out = aug.execute(inst, fam)
    assert out.volume == fam.volume + 1
    assert check_family(inst, out) == []
    # Every witness was unused beforehand and the freeing colours are distinct.
    assert not any(fam.is_used(y, c) for y, c in aug.chain.witness_pairs())
    cols = aug.chain.colours + (aug.chain.target.c,)
    assert len(set(cols)) == len(cols)


def test_extend_q_is_sound_against_oracle():
    rng = random.Random(4)
    checked = 0
    for _ in range(400):
        n = rng.randint(3, 5)
        inst = random_instance(rng, n)
        fam = random_family(rng, inst, rng.randint(2, n), fill=rng.choice([0.6, 1.0]))
        open_members = [i for i, s in enumerate(fam) if len(s) < n]
        if not open_members:
            continue
        s0 = open_members[0]
        q = initial_Q(inst, fam, s0)
        assert set(q) == brute_force_cascade_Q(inst, fam, [s0])
        holders = sorted({fam.owner(t) for t in q} - {None})
        if not holders:
            continue
        out = extend_Q(inst, fam, (s0,), q, holders[0])
        if isinstance(out, NextQ):
            assert set(out.entries) <= brute_force_cascade_Q(inst, fam, list(out.members))
            for chain in out.entries.values():
                assert validate_chain(inst, fam, chain) == []
            checked += 1
    assert checked > 0


def test_extend_q_rejects_member_in_chain(f2, f2_pair):
    q = initial_Q(f2, f2_pair, 0)
    with pytest.raises(ContractError):
        extend_Q(f2, f2_pair, (0,), q, 0)
