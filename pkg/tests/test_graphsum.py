import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bielliptic.graphsum import (
    DecoratedGraph,
    GEdge,
    check_contour,
    check_loop_examples,
    check_loop_factorization,
    check_telescoping,
    constant_coefficient_check,
    graph_sum,
    loop_classes,
    loop_factor,
    orbit,
    propagator_fourier,
    single_loop,
)
from bielliptic.invariants import genus2_B
from bielliptic.series import QSeries, eisenstein, substitute_power
from bielliptic.surface import ALL_TYPES

Q = 12


def e(weight, power=1, qmax=Q):
    return substitute_power(eisenstein(weight, qmax + 1), power)


def test_single_loop_examples():
    assert graph_sum(single_loop(1, 2), Q) == e(4)
    assert graph_sum(single_loop(2, 2, [0]), Q) == e(4, 2)
    assert graph_sum(single_loop(4, 2, [2]), Q) == e(4, 2) - e(4, 4)


def test_loop_factor_examples():
    assert loop_factor(2, 0, 2, Q) == e(4, 2)
    assert loop_factor(2, 1, 2, Q) == e(4) - e(4, 2)
    assert loop_factor(4, 2, 2, Q) == e(4, 2) - e(4, 4)
    assert loop_factor(4, 4, 2, Q) == loop_factor(4, 0, 2, Q)


def test_loop_factor_errors():
    with pytest.raises(ValueError):
        loop_factor(4, 3, 2, Q)
    with pytest.raises(ValueError):
        loop_factor(4, 1, 1, Q)


def test_orbits():
    assert orbit(6, 1) == {1, 5}
    assert orbit(6, 2) == {2, 4}
    assert orbit(6, 0) == {0}
    assert loop_classes(6) == [0, 1, 2, 3]


def test_examples_and_telescoping():
    assert all(r["ok"] for r in check_loop_examples(Q))
    assert all(r["ok"] for r in check_telescoping(Q))


def test_propagator_examples():
    assert propagator_fourier(0, 1, 4, 4)[(1, 0)] == 1
    assert propagator_fourier(1, 2, 4, 4)[(1, 0)] == 0
    assert propagator_fourier(1, 2, 4, 4)[(-1, 1)] == 1
    assert propagator_fourier(0, 1, 4, 4, m=2)[(2, 2)] == 8
    with pytest.raises(IndexError):
        propagator_fourier(0, 1, 4, 4)[(5, 0)]
    with pytest.raises(ValueError):
        propagator_fourier(2, 2, 4, 4)


def test_contour_examples():
    two = DecoratedGraph(2, (GEdge(1, 2), GEdge(1, 2)))
    assert constant_coefficient_check(two, 8) == graph_sum(two, 8)
    assert not graph_sum(two, 8).is_zero()
    con = DecoratedGraph(2, (GEdge(1, 2, 0, 1), GEdge(1, 2)), 2)
    assert constant_coefficient_check(con, 8) == graph_sum(con, 8)
    tri = DecoratedGraph(3, (GEdge(1, 2, 2), GEdge(2, 3, 2), GEdge(1, 3, 2)))
    assert constant_coefficient_check(tri, 6) == graph_sum(tri, 6)


def test_two_parallel_edges_by_hand():
    # one edge up with h >= 0, one down with h >= 1, equal weights: sum_w w^2 q^(w(h1+h2))
    two = DecoratedGraph(2, (GEdge(1, 2), GEdge(1, 2)))
    want = {}
    for w in range(1, 7):
        for s in range(1, 7):
            if w * s <= 6:
                # orientations: both choices of which edge goes up; s splits as h_up + h_down
                want[w * s] = want.get(w * s, 0) + 2 * s * w**2
    assert graph_sum(two, 6) == QSeries(want, 7)


def test_contour_rejects_loops():
    with pytest.raises(ValueError):
        constant_coefficient_check(single_loop(1, 0), 4)


def test_invalid_graphs():
    with pytest.raises(ValueError):
        DecoratedGraph(1, (GEdge(1, 1, 1),))
    with pytest.raises(ValueError):
        DecoratedGraph(1, (GEdge(1, 1, 0, None, frozenset({1})),), 3)
    with pytest.raises(ValueError):
        DecoratedGraph(1, (GEdge(1, 2),))
    with pytest.raises(ValueError):
        DecoratedGraph(2, (GEdge(1, 2, 0, None, frozenset({0})),), 2)


def test_json_roundtrip():
    dg = DecoratedGraph(2, (GEdge(1, 2, 2, 1), GEdge(2, 1), GEdge(2, 2, 0, None, frozenset({1, 2}))), 3)
    js = json.loads(json.dumps(dg.to_json()))
    assert DecoratedGraph.from_json(js) == dg


@pytest.mark.parametrize("t", ALL_TYPES)
def test_pearl_consistency(t):
    # the genus-two loop series, split by orbit class of the height
    total = QSeries({}, Q + 1)
    for d in loop_classes(t.n):
        total = total + loop_factor(t.n, d, 2, Q) * t.tau(d)
        assert graph_sum(single_loop(t.n, 2, sorted(orbit(t.n, d))), Q) == loop_factor(t.n, d, 2, Q)
    assert total == genus2_B(t, Q)


def test_contour_suite_small():
    assert all(r["ok"] for r in check_contour(6, ns=(1, 2), max_vertices=3, max_edges=3))


loop_sets = st.sampled_from([None, (0,), (1, 2), (0, 1, 2)])


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from([(1, 2), (2, 1)]), min_size=0, max_size=2),
       st.lists(st.tuples(st.sampled_from([1, 2]), st.sampled_from([0, 2]), loop_sets), min_size=1, max_size=2))
def test_loop_factorization(pairs, loops):
    edges = [GEdge(t, h) for t, h in pairs]
    edges += [GEdge(v, v, m, None, None if u is None else frozenset(u)) for v, m, u in loops]
    dg = DecoratedGraph(2, tuple(edges), 3)
    assert check_loop_factorization(dg, 6)
