import math

import pytest

from bielliptic.surface import ALL_TYPES, mat_pow, surface_type, tau

TAU_TABLES = {
    "A": (0, 4),
    "B": (0, 3, 3),
    "C": (0, 2, 4, 2),
    "D": (0, 1, 3, 4, 3, 1),
}


def test_surface_examples():
    assert surface_type("A").n == 2
    assert surface_type("a").monodromy == ((-1, 0), (0, -1))
    assert surface_type("C").monodromy == ((0, -1), (1, 0))
    assert surface_type("D").monodromy == ((0, -1), (1, 1))
    assert surface_type("B").n == 3


def test_unknown_type():
    with pytest.raises(ValueError):
        surface_type("e")


def test_tau_examples():
    assert tau(surface_type("A"), 1) == 4
    assert tau(surface_type("D"), 3) == 4
    for t in ALL_TYPES:
        assert tau(t, 0) == 0


@pytest.mark.parametrize("t", ALL_TYPES, ids=lambda t: t.kind)
def test_tau_tables(t):
    assert t.tau_table == TAU_TABLES[t.kind]


@pytest.mark.parametrize("t", ALL_TYPES, ids=lambda t: t.kind)
def test_monodromy_order(t):
    ident = ((1, 0), (0, 1))
    assert mat_pow(t.monodromy, t.n) == ident
    assert all(mat_pow(t.monodromy, h) != ident for h in range(1, t.n))


@pytest.mark.parametrize("t", ALL_TYPES, ids=lambda t: t.kind)
def test_tau_symmetries(t):
    units = [u for u in range(1, t.n) if math.gcd(u, t.n) == 1]
    for h in range(-12, 13):
        assert tau(t, h) == tau(t, -h)
        for u in units:
            assert tau(t, h) == tau(t, u * h)


def test_json_echo():
    js = surface_type("d").to_json()
    assert js["n"] == 6 and js["tau"] == [0, 1, 3, 4, 3, 1]
