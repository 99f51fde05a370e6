from collections import Counter

import pytest

from bielliptic.diagram import degree, genus, validate
from bielliptic.enumeration import (
    Shape,
    circulations,
    compositions,
    enumerate_decorations,
    enumerate_diagrams,
    enumerate_shapes,
    height_assignments,
    orientations,
    shape_labelings,
)
from brute import brute_force_diagrams


def test_shape_census():
    assert len(enumerate_shapes(2)) == 1
    assert len(enumerate_shapes(3)) == 2
    assert len(enumerate_shapes(4)) == 7


def test_genus3_shapes_are_the_two_figures():
    shapes = enumerate_shapes(3)
    assert Shape(("flat", "nonflat"), ((1, 2), (1, 2), (2, 2))) in shapes
    assert Shape(("nonflat", "nonflat"), ((1, 2), (1, 2))) in shapes


def test_census_with_leaves_is_larger():
    # shapes with a univalent vertex cannot be balanced, so they are left out by default
    assert len(enumerate_shapes(4, allow_leaves=True)) > 7


def test_small_diagram_counts():
    (d,) = enumerate_diagrams(2, 1, 1)
    assert [(e.w, e.h) for e in d.edges] == [(1, 1)] and d.vertices[0].a == 1
    assert sorted((d.edges[0].w, d.edges[0].h) for d in enumerate_diagrams(2, 1, 2)) == [(1, 2), (2, 1)]
    (d,) = enumerate_diagrams(2, 3, 1)
    assert d.vertices[0].a == 3


def test_enumerate_decorations_examples():
    loop = Shape(("nonflat",), ((1, 1),))
    (arcs,) = orientations(loop)
    got = sorted((d.edges[0].w, d.edges[0].h) for d in enumerate_decorations(loop, None, arcs, 1, 4))
    assert got == [(1, 4), (2, 2), (4, 1)]

    pair = Shape(("nonflat", "nonflat"), ((1, 2), (1, 2)))
    (arcs,) = orientations(pair)
    ds = enumerate_decorations(pair, None, arcs, 2, 1)
    assert len(ds) == 1
    d = ds[0]
    assert [v.a for v in d.vertices] == [1, 1]
    assert {(e.tail, e.head, e.w, e.h) for e in d.edges} == {(1, 2, 1, 0), (2, 1, 1, 1)}

    assert enumerate_decorations(pair, None, arcs, 1, 3) == []


def test_type_one_has_two_labelings():
    shape = Shape(("flat", "nonflat"), ((1, 2), (1, 2), (2, 2)))
    assert len(shape_labelings(shape)) == 2


def test_circulations_on_triangle():
    arcs = [(1, 2), (2, 3), (3, 1)]
    assert list(circulations(3, arcs, 3)) == [(1, 1, 1), (2, 2, 2), (3, 3, 3)]


def test_heights_and_compositions():
    assert sorted(height_assignments([1, 2], [0, 1], 3)) == [(1, 1)]
    assert sorted(height_assignments([1, 1], [0, 1], 2)) == [(0, 2), (1, 1)]
    assert list(compositions(3, 2)) == [(1, 2), (2, 1)]
    assert list(compositions(1, 2)) == []


@pytest.mark.parametrize("g,a,b", [(2, 2, 4), (3, 3, 3), (4, 3, 3)])
def test_soundness(g, a, b):
    ds = enumerate_diagrams(g, a, b)
    assert len({d.key() for d in ds}) == len(ds)
    for d in ds:
        assert validate(d) == []
        assert genus(d) == g
        c = degree(d)
        assert (c.a, c.b) == (a, b)
        assert max(e.w for e in d.edges) <= b
        assert max(e.h for e in d.edges) <= b


@pytest.mark.parametrize("g", [2, 3])
@pytest.mark.parametrize("a", [1, 2, 3])
@pytest.mark.parametrize("b", [1, 2, 3, 4])
def test_matches_brute_force(g, a, b):
    ours = Counter(d.key() for d in enumerate_diagrams(g, a, b))
    theirs = Counter(d.key() for d in brute_force_diagrams(g, a, b))
    assert ours == theirs


def test_parallel_runs_identical():
    one = [d.key() for d in enumerate_diagrams(4, 2, 3, workers=1)]
    many = [d.key() for d in enumerate_diagrams(4, 2, 3, workers=8)]
    assert one == many


def test_figure_diagrams_are_enumerated():
    from figures import figure1, genus3_type2

    assert figure1().key() in {d.key() for d in enumerate_diagrams(4, 2, 3)}
    assert genus3_type2(w=1, h_up=1, h_down=1).key() in {d.key() for d in enumerate_diagrams(3, 2, 2)}
