from __future__ import annotations

import pytest

from conftest import A, B, C, pairs
from rota.errors import ContractError, InputError
from rota.matroid import GraphicMatroid, UniformMatroid
from rota.rainbow import (
    RIS,
    Coloured,
    Family,
    Instance,
    build_universe,
    check_family,
    is_disjoint,
    is_ris,
    is_transversal_basis,
    missing_colours,
    project,
    used_set,
    volume,
)


def test_universe_sizes(f1, f2):
    assert len(build_universe(f1)) == 9
    assert build_universe(f2) == {(A, 0), (B, 0), (B, 1), (C, 1)}
    assert len(build_universe(f2)) == f2.n**2


def test_projection():
    assert project(pairs((A, 1), (C, 2))) == {A, C}
    assert project(RIS()) == frozenset()
    assert project(pairs((B, 2))) == {B}


def test_is_ris_examples(f2):
    assert is_ris(f2, [(A, 0), (C, 1)])
    assert not is_ris(f2, [(B, 0), (B, 1)])
    assert not is_ris(f2, [(A, 0), (B, 0)])


def test_is_ris_outside_universe(f2):
    with pytest.raises(InputError):
        is_ris(f2, [(C, 0)])


def test_volume_examples(f1):
    assert volume(Family.empty(3)) == 0
    assert volume(Family([pairs((0, 1), (1, 2), (2, 3))])) == 3
    assert volume(Family([pairs((A, 1)), pairs((C, 2))])) == 2


def test_used_set_examples():
    used = used_set(Family([pairs((A, 1)), pairs((C, 2))]))
    assert used.elements == {(A, 0), (C, 1)}
    assert used.slice(0) == {A} and used.slice(1) == {C}
    assert len(used_set(Family([]))) == 0
    full = used_set(Family([pairs((0, 1), (1, 2), (2, 3))]))
    assert [full.slice(c) for c in range(3)] == [{0}, {1}, {2}]


def test_used_set_rejects_overlap():
    with pytest.raises(ContractError):
        used_set([pairs((A, 1)), pairs((A, 1))])


def test_missing_colours():
    assert missing_colours(RIS(), 3) == {0, 1, 2}
    assert missing_colours(pairs((0, 1), (1, 2), (2, 3)), 3) == frozenset()
    assert missing_colours(pairs((A, 1)), 2) == {1}


def test_transversal_basis(f1):
    s = pairs((0, 1), (1, 2), (2, 3))
    assert is_transversal_basis(f1, s)
    assert len(s) == f1.n and f1.matroid.is_independent(s.projection())


def test_ris_structure():
    s = pairs((A, 1), (C, 2))
    assert (A, 0) in s and Coloured(C, 1) in s and (C, 0) not in s
    assert s.element_of(1) == C and s.element_of(5) is None
    with pytest.raises(ContractError):
        s.plus((B, 1))
    with pytest.raises(ContractError):
        s.minus((B, 0))
    assert s.minus((A, 0)) == pairs((C, 2))
    assert list(s) == [(A, 0), (C, 1)]


def test_family_replace_bumps_version():
    fam = Family([pairs((A, 1)), RIS()])
    fam2 = fam.replace({1: pairs((C, 2))})
    assert fam2.version == fam.version + 1
    assert fam2.owner((C, 1)) == 1 and fam.owner((C, 1)) is None
    assert fam2.volume == len(fam2.used) == 2


def test_check_family_reports_problems(f2):
    assert check_family(f2, Family([pairs((A, 1), (C, 2))])) == []
    bad = Family([pairs((A, 1), (B, 2))]).replace({0: pairs((B, 1), (B, 2))})
    assert check_family(f2, bad)


def test_is_disjoint():
    assert is_disjoint([pairs((A, 1)), pairs((A, 2))]) is True
    assert is_disjoint([pairs((A, 1)), pairs((A, 1))]) is False


def test_instance_validation():
    tri = GraphicMatroid(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(InputError, match=r"bases\[1\]"):
        Instance(tri, [[0, 1], [1]])
    with pytest.raises(InputError, match=r"bases\[0\]"):
        Instance(tri, [[0, 0], [1, 2]])
    with pytest.raises(InputError, match="rank"):
        Instance(UniformMatroid(4, 3), [[0, 1], [2, 3]])
    with pytest.raises(InputError):
        Instance(tri, [])


def test_duplicate_elements_across_classes_are_distinct(f1):
    u = build_universe(f1)
    assert (0, 0) in u and (0, 1) in u and (0, 2) in u
