from __future__ import annotations

import itertools
import random

import pytest

from conftest import A, B, C, pairs
from rota.errors import BudgetExceeded
from rota.matroid import UniformMatroid
from rota.oracle import (
    OracleBudget,
    brute_force_addable,
    brute_force_cascade_Q,
    exact_max_decomposition,
    matroid_axiom_check,
    reference_gf_rank,
    transversal_bases,
)
from rota.rainbow import Family, Instance
from rota.selftest import random_instance


def test_exact_examples(f1, f2):
    assert exact_max_decomposition(f1).k == 3
    assert exact_max_decomposition(f2).k == 2
    single = Instance(UniformMatroid(1, 1), [[0]])
    assert exact_max_decomposition(single).k == 1


def test_exact_bases_are_disjoint_transversals(f2):
    res = exact_max_decomposition(f2)
    flat = [p for b in res.bases for p in b]
    assert len(flat) == len(set(flat))
    assert all(frozenset(b) in transversal_bases(f2) for b in res.bases)


def test_transversal_bases_counts(f1, f2):
    assert len(transversal_bases(f1)) == 6
    assert set(transversal_bases(f2)) == {
        frozenset({(A, 0), (B, 1)}),
        frozenset({(A, 0), (C, 1)}),
        frozenset({(B, 0), (C, 1)}),
    }


def test_exact_matches_naive_subset_search():
    rng = random.Random(13)
    for _ in range(40):
        inst = random_instance(rng, rng.randint(1, 3))
        cands = transversal_bases(inst)
        naive = 0
        for k in range(1, inst.n + 1):
            if any(
                len(set().union(*combo)) == k * inst.n for combo in itertools.combinations(cands, k)
            ):
                naive = k
        assert exact_max_decomposition(inst).k == naive


def test_exact_refuses_large_instances():
    inst = Instance(UniformMatroid(5, 5), [list(range(5))] * 5)
    with pytest.raises(BudgetExceeded):
        exact_max_decomposition(inst)
    assert exact_max_decomposition(inst, OracleBudget(max_n=5)).k == 5


def test_budget_validation():
    with pytest.raises(ValueError):
        OracleBudget(max_n=0)


def test_axiom_check_budget():
    with pytest.raises(BudgetExceeded):
        matroid_axiom_check(UniformMatroid(11, 3))


def test_brute_force_addable_examples(f2, f2_single, f2_pair):
    assert brute_force_addable(f2, f2_single, f2_single[0], 1) == {(B, 1), (C, 1), (B, 0)}
    assert brute_force_addable(f2, f2_pair, f2_pair[0], 1) == {(A, 0), (C, 1)}


def test_brute_force_cascade_examples(f2, f2_pair):
    assert brute_force_cascade_Q(f2, f2_pair, [0]) == {(A, 0)}
    with pytest.raises(BudgetExceeded):
        brute_force_cascade_Q(f2, f2_pair, [0, 1, 0, 1])
    with pytest.raises(ValueError):
        brute_force_cascade_Q(f2, f2_pair, [0, 0])


def test_brute_force_cascade_two_members(f2):
    fam = Family([pairs((A, 1)), pairs((B, 1), (C, 2))])
    q = brute_force_cascade_Q(f2, fam, [0, 1])
    assert all(t not in fam[0] and t not in fam[1] for t in q)


def test_reference_rank_examples():
    assert reference_gf_rank([[1, 0], [0, 1], [1, 1]], 2) == 2
    assert reference_gf_rank([[1, 1], [2, 2]], 3) == 1
    assert reference_gf_rank([], 5) == 0
    assert reference_gf_rank([[0, 0, 0]], 7) == 0
    assert reference_gf_rank([[1, 2], [3, 4]], 2) == 1
