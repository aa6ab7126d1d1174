from __future__ import annotations

import pytest

from rota.matroid import GraphicMatroid, LinearMatroid, UniformMatroid
from rota.rainbow import RIS, Family, Instance

# Triangle edges and the GF(2) vectors used throughout the tests.
A, B, C = 0, 1, 2
E1, E2, S = 0, 1, 2


def pairs(*ps):
    """Build an RIS from (element, colour) pairs with 1-based colours."""
    return RIS((x, c - 1) for x, c in ps)


@pytest.fixture
def f1() -> Instance:
    return Instance(UniformMatroid(3, 3), [[0, 1, 2]] * 3)


@pytest.fixture
def triangle() -> GraphicMatroid:
    return GraphicMatroid(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def f2(triangle) -> Instance:
    return Instance(triangle, [[A, B], [B, C]])


@pytest.fixture
def gf2() -> LinearMatroid:
    return LinearMatroid(2, [[1, 0], [0, 1], [1, 1]])


@pytest.fixture
def f3(gf2) -> Instance:
    return Instance(gf2, [[E1, E2], [E1, S]])


@pytest.fixture
def f2_single(f2) -> Family:
    """S0 = {(a,1)} alone."""
    return Family([pairs((A, 1))])


@pytest.fixture
def f2_pair(f2) -> Family:
    """S0 = {(b,1)}, S1 = {(c,2)}."""
    return Family([pairs((B, 1)), pairs((C, 2))])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])
