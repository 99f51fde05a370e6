from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bielliptic import multiplicity as mult
from bielliptic.diagram import InvalidDiagram, automorphism_factor, flat_complement_cycles, genus, make_diagram
from bielliptic.enumeration import enumerate_diagrams
from bielliptic.multiplicity import (
    fiber_invariants,
    multiplicity_enumerative,
    multiplicity_refined,
    one_cycle_insertion_leading,
    point_insertion_leading,
    r_series,
    vertex_factor,
)
from bielliptic.series import sigma
from bielliptic.surface import ALL_TYPES, surface_type
from figures import figure1, figure2, figure3, genus2_loop

A = surface_type("a")


def test_genus2_loop():
    assert multiplicity_enumerative(genus2_loop(), A) == 4


@pytest.mark.parametrize("kind,value", [("a", 0), ("b", 24), ("c", 32), ("d", 24)])
def test_figure1(kind, value):
    t = surface_type(kind)
    assert multiplicity_enumerative(figure1(), t) == t.tau(2) * 8 == value


def test_figure1_vertex_classes():
    t = surface_type("c")
    got = multiplicity_enumerative(figure1(a1=2, a3=3), t)
    assert got == t.tau(2) * 4 * sigma(1, 2) * 9 * sigma(1, 3) * 8


@pytest.mark.parametrize("t", ALL_TYPES)
def test_figure3_vanishes(t):
    assert multiplicity_enumerative(figure3(), t) == 0


@pytest.mark.parametrize("w,a", [(1, 1), (2, 3), (3, 2)])
def test_figure2(w, a):
    for t in ALL_TYPES:
        assert multiplicity_enumerative(figure2(w, a), t) == t.tau(2) * a * sigma(1, a) * w**3


def test_rejects_invalid():
    with pytest.raises(InvalidDiagram):
        multiplicity_enumerative(genus2_loop(h=0), A)
    with pytest.raises(InvalidDiagram):
        multiplicity_refined(genus2_loop(h=0), A, 4)


def test_automorphism_division_flag(monkeypatch):
    # identical parallel edges always sit on a cycle of winding 0
    ds = [d for d in enumerate_diagrams(4, 4, 2) if automorphism_factor(d) > 1]
    assert ds
    for d in ds:
        for t in ALL_TYPES:
            assert multiplicity_enumerative(d, t, divide_automorphisms=False) == 0
    t = surface_type("b")
    divided = [multiplicity_enumerative(d, t) for d in enumerate_diagrams(5, 2, 3)]
    monkeypatch.setattr(mult, "DIVIDE_AUTOMORPHISMS", False)
    assert [multiplicity_enumerative(d, t) for d in enumerate_diagrams(5, 2, 3)] == divided


def test_r_series_examples():
    r = r_series(1, [1, -1], 6)
    assert r[2] == 1
    assert r[4] == Fraction(-1, 12)
    assert r_series(2, [1, -1], 4)[2] == 6


def test_r_series_errors():
    with pytest.raises(ValueError):
        r_series(1, [1, 0, -1], 4)
    with pytest.raises(ValueError):
        r_series(1, [1, 1], 4)
    with pytest.raises(ValueError):
        r_series(0, [1, -1], 4)


profiles = st.lists(st.integers(1, 4), min_size=1, max_size=3).flatmap(
    lambda outs: st.just(outs + [-sum(outs)])
)


@given(st.integers(1, 6), profiles)
def test_r_series_leading_and_parity(a, mu):
    n = len(mu)
    r = r_series(a, mu, n + 4)
    for e in range(n):
        assert r[e] == 0
    assert r[n] == vertex_factor(a, n) * Fraction(1)
    for e in range(n + 5):
        if (e - n) % 2:
            assert r[e] == 0


def test_refined_loop():
    r = multiplicity_refined(genus2_loop(), A, 6)
    assert r[0] == 0
    assert r[2] == 4
    assert r[4] == Fraction(-1, 3)


@pytest.mark.parametrize("g,a,b", [(2, 3, 3), (3, 2, 3), (4, 2, 2)])
def test_leading_order_degeneration(g, a, b):
    for d in enumerate_diagrams(g, a, b):
        for t in ALL_TYPES:
            r = multiplicity_refined(d, t, 2 * g)
            assert r[2 * g - 2] == multiplicity_enumerative(d, t)
            assert all(r[j] == 0 for j in range(2 * g - 2))


@pytest.mark.parametrize("g,a,b", [(3, 2, 3), (4, 2, 3)])
def test_zero_winding_kills(g, a, b):
    for d in enumerate_diagrams(g, a, b):
        for t in ALL_TYPES:
            if any(c.winding % t.n == 0 for c in flat_complement_cycles(d)):
                assert multiplicity_enumerative(d, t) == 0


def test_building_blocks():
    assert point_insertion_leading(2, [1, -1]) == 6
    assert point_insertion_leading(1, [3, -3]) == 9
    assert one_cycle_insertion_leading(1, [2, -2]) == 4
    assert fiber_invariants(3) == (1, Fraction(1, 3))
    assert fiber_invariants(3, g=1) == (0, 0)
