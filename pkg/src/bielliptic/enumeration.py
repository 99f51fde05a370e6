"""Exhaustive generation of pearl diagrams and of their underlying shapes.

Pipeline: labeled shapes -> orientations -> balanced weights -> heights ->
classes ``a_V``.  A *shape* is an undirected multigraph (loops allowed) on
vertices ``1..N`` with a flat/non-flat kind per vertex.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from .diagram import FLAT, NONFLAT, Edge, PearlDiagram, Vertex

Arc = Tuple[int, int]

WORKERS_ENV = "BIELLIPTIC_WORKERS"


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    if n < 1:
        raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
    return n


@dataclass(frozen=True, order=True)
class Shape:
    """Vertex kinds (index ``i`` holds label ``i+1``) and sorted undirected edges ``(i, j)``, ``i <= j``."""

    kinds: Tuple[str, ...]
    edges: Tuple[Arc, ...]

    @property
    def N(self) -> int:
        return len(self.kinds)

    @property
    def betti(self) -> int:
        return len(self.edges) - self.N + 1

    @property
    def genus(self) -> int:
        return self.betti + sum(k == NONFLAT for k in self.kinds)

    def flat(self) -> set:
        return {i + 1 for i, k in enumerate(self.kinds) if k == FLAT}

    def to_json(self) -> dict:
        return {
            "vertices": [{"label": i + 1, "kind": k} for i, k in enumerate(self.kinds)],
            "edges": [{"ends": [i, j]} for i, j in self.edges],
        }


def relabel(shape: Shape, perm: Sequence[int]) -> Shape:
    """Move vertex ``i`` to label ``perm[i-1]``."""
    kinds = [None] * shape.N
    for i, k in enumerate(shape.kinds):
        kinds[perm[i] - 1] = k
    edges = sorted(tuple(sorted((perm[i - 1], perm[j - 1]))) for i, j in shape.edges)
    return Shape(tuple(kinds), tuple(edges))


def canonical_shape(shape: Shape) -> Shape:
    """Minimal relabeling; two shapes are isomorphic iff their canonical forms agree."""
    return min(relabel(shape, p) for p in itertools.permutations(range(1, shape.N + 1)))


# -- structural conditions on shapes ---------------------------------------

def _connected(n: int, edges: Sequence[Arc], allowed: Optional[set] = None) -> List[set]:
    verts = set(range(1, n + 1)) if allowed is None else set(allowed)
    adj = {v: set() for v in verts}
    for i, j in edges:
        if i in verts and j in verts:
            adj[i].add(j)
            adj[j].add(i)
    comps, seen = [], set()
    for v in sorted(verts):
        if v in seen:
            continue
        stack, comp = [v], set()
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(adj[x] - comp)
        seen |= comp
        comps.append(comp)
    return comps


def shape_is_structural(shape: Shape, allow_leaves: bool = False) -> bool:
    """(F) valency, connectivity, unique cycle per flat-complement component, #flat = b1 - 1."""
    n = shape.N
    val = [0] * (n + 1)
    for i, j in shape.edges:
        val[i] += 1
        val[j] += 1
    fl = shape.flat()
    for v in fl:
        if val[v] != 2 or (v, v) in shape.edges:
            return False
    if not allow_leaves and any(val[v] == 1 for v in range(1, n + 1)):
        return False
    if len(_connected(n, shape.edges)) != 1:
        return False
    if len(fl) != shape.betti - 1:
        return False
    rest = set(range(1, n + 1)) - fl
    rest_edges = [(i, j) for i, j in shape.edges if i in rest and j in rest]
    for comp in _connected(n, rest_edges, rest):
        ne = sum(1 for i, j in rest_edges if i in comp)
        if ne - len(comp) + 1 != 1:
            return False
    return True


def labeled_shapes(g: int, allow_leaves: bool = False) -> List[Shape]:
    """All labeled structural shapes of genus ``g`` (vertices ``1..g-1``)."""
    if g < 2:
        raise ValueError("genus must be >= 2")
    n = g - 1
    slots = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    out = []
    for b1 in range(1, g):
        nflat = b1 - 1
        nedges = b1 + g - 2
        for flats in itertools.combinations(range(1, n + 1), nflat):
            kinds = tuple(FLAT if i + 1 in flats else NONFLAT for i in range(n))
            for edges in itertools.combinations_with_replacement(slots, nedges):
                s = Shape(kinds, tuple(edges))
                if shape_is_structural(s, allow_leaves):
                    out.append(s)
    return sorted(out)


def enumerate_shapes(g: int, allow_leaves: bool = False) -> List[Shape]:
    """Shapes of genus ``g`` up to relabeling and orientation.

    Vertices of valency one are excluded by default: they cannot be balanced,
    so such shapes carry no diagram at all.
    """
    return sorted({canonical_shape(s) for s in labeled_shapes(g, allow_leaves)})


def shape_labelings(shape: Shape) -> List[Tuple[Tuple[int, ...], Shape]]:
    """Distinct labeled versions of ``shape`` with a witnessing permutation each."""
    seen = {}
    for p in itertools.permutations(range(1, shape.N + 1)):
        s = relabel(shape, p)
        if s not in seen:
            seen[s] = p
    return sorted(((p, s) for s, p in seen.items()), key=lambda t: t[1])


# -- orientations ----------------------------------------------------------

def orientations(shape: Shape) -> List[Tuple[Arc, ...]]:
    """Orientations modulo permuting parallel edges, each as a sorted arc tuple."""
    groups = sorted(set(shape.edges))
    choices = []
    for i, j in groups:
        c = shape.edges.count((i, j))
        if i == j:
            choices.append([((i, i),) * c])
        else:
            choices.append([((i, j),) * k + ((j, i),) * (c - k) for k in range(c + 1)])
    out = []
    for combo in itertools.product(*choices):
        arcs = tuple(sorted(a for part in combo for a in part))
        if _orientation_admissible(shape, arcs):
            out.append(arcs)
    return out


def _orientation_admissible(shape: Shape, arcs: Sequence[Arc]) -> bool:
    """Flat vertices need one arc in and one out; every arc must lie on a directed cycle."""
    for v in shape.flat():
        if sum(t == v for t, _ in arcs) != 1 or sum(h == v for _, h in arcs) != 1:
            return False
    return _strongly_connected(shape.N, arcs)


def _strongly_connected(n: int, arcs: Sequence[Arc]) -> bool:
    def reach(adj):
        seen, stack = set(), [1]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(adj[x])
        return len(seen) == n

    fwd = {v: [] for v in range(1, n + 1)}
    bwd = {v: [] for v in range(1, n + 1)}
    for t, h in arcs:
        fwd[t].append(h)
        bwd[h].append(t)
    return reach(fwd) and reach(bwd)


# -- weights, heights, classes ---------------------------------------------

def height_lower_bound(tail: int, head: int) -> int:
    return 0 if tail < head else 1


def circulations(n: int, arcs: Sequence[Arc], cap: int, budget: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Balanced positive weights ``1 <= w <= cap`` on ``arcs``.

    Non-tree arcs of a spanning forest are free; tree arcs are then forced by
    peeling leaves.  With ``budget`` set, assignments with
    ``sum(w * height_lower_bound) > budget`` are skipped.
    """
    m = len(arcs)
    lo = [height_lower_bound(t, h) for t, h in arcs]
    parent_arc = {}
    order = []
    seen = set()
    tree = set()
    for root in range(1, n + 1):
        if root in seen:
            continue
        seen.add(root)
        queue = [root]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for idx, (t, h) in enumerate(arcs):
                if t == h or idx in tree:
                    continue
                other = h if t == v else t if h == v else None
                if other is None or other in seen:
                    continue
                seen.add(other)
                tree.add(idx)
                parent_arc[other] = idx
                queue.append(other)
    free = [i for i in range(m) if i not in tree]
    incident = {v: [i for i, (t, h) in enumerate(arcs) if t == v or h == v] for v in range(1, n + 1)}

    for vals in itertools.product(range(1, cap + 1), repeat=len(free)):
        w = [0] * m
        spent = 0
        for i, x in zip(free, vals):
            w[i] = x
            spent += x * lo[i]
        if budget is not None and spent > budget:
            continue
        ok = True
        for v in reversed(order):
            if v not in parent_arc:
                continue
            pa = parent_arc[v]
            net = 0
            for i in incident[v]:
                if i == pa:
                    continue
                t, h = arcs[i]
                if t == v:
                    net += w[i]
                if h == v:
                    net -= w[i]
            x = -net if arcs[pa][0] == v else net
            if x < 1 or x > cap:
                ok = False
                break
            w[pa] = x
            spent += x * lo[pa]
        if not ok or (budget is not None and spent > budget):
            continue
        yield tuple(w)


def height_assignments(weights: Sequence[int], lows: Sequence[int], b: int) -> Iterator[Tuple[int, ...]]:
    """All ``h_e >= lows[e]`` with ``sum(w_e * h_e) == b``."""
    m = len(weights)
    suffix_min = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix_min[i] = suffix_min[i + 1] + weights[i] * lows[i]
    hs = [0] * m

    def rec(i, left):
        if i == m:
            if left == 0:
                yield tuple(hs)
            return
        w = weights[i]
        h = lows[i]
        while w * h + suffix_min[i + 1] <= left:
            hs[i] = h
            yield from rec(i + 1, left - w * h)
            h += 1

    if suffix_min[0] <= b:
        yield from rec(0, b)


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Ordered tuples of ``parts`` positive integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for cut in itertools.combinations(range(1, total), parts - 1):
        bounds = (0,) + cut + (total,)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(parts))


def skeletons(shape: Shape, arcs: Sequence[Arc], b: int) -> List[Tuple[Edge, ...]]:
    """Weighted, heighted edge multisets on a labeled, oriented shape with total ``b``."""
    lows = [height_lower_bound(t, h) for t, h in arcs]
    found = set()
    for w in circulations(shape.N, arcs, b, budget=b):
        # a positive circulation splits into directed cycles, each of at least one turn
        assert max(w) <= b
        for hs in height_assignments(w, lows, b):
            found.add(tuple(sorted(Edge(t, h, wi, hi) for (t, h), wi, hi in zip(arcs, w, hs))))
    return sorted(found)


def enumerate_decorations(shape: Shape, labeling: Optional[Sequence[int]], orientation: Sequence[Arc], a: int, b: int) -> List[PearlDiagram]:
    """All decorations of one labeled, oriented shape in degree ``(a, b)``."""
    lab = relabel(shape, labeling) if labeling is not None else shape
    arcs = tuple(sorted(orientation))
    if sorted(tuple(sorted(x)) for x in arcs) != list(lab.edges):
        raise ValueError("orientation does not match the labeled shape")
    nonflat = [i + 1 for i, k in enumerate(lab.kinds) if k == NONFLAT]
    if a < len(nonflat):
        return []
    out = []
    for edges in skeletons(lab, arcs, b):
        for avals in compositions(a, len(nonflat)):
            amap = dict(zip(nonflat, avals))
            verts = [Vertex(i + 1, k, amap.get(i + 1)) for i, k in enumerate(lab.kinds)]
            out.append(PearlDiagram(verts, edges))
    out.sort(key=PearlDiagram.key)
    return out


def _tasks(g: int) -> List[Tuple[Shape, Tuple[Arc, ...]]]:
    return [(s, arcs) for s in labeled_shapes(g) for arcs in orientations(s)]


def _pmap(fn, items, workers: Optional[int]):
    workers = default_workers() if workers is None else workers
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def enumerate_diagrams(g: int, a: int, b: int, workers: Optional[int] = None) -> List[PearlDiagram]:
    """All valid pearl diagrams of genus ``g`` and degree ``(a, b)``, in canonical order."""
    if g < 2 or a < 1 or b < 1:
        raise ValueError("need g >= 2, a >= 1, b >= 1")
    tasks = _tasks(g)
    chunks = _pmap(lambda t: enumerate_decorations(t[0], None, t[1], a, b), tasks, workers)
    merged = {d.key(): d for chunk in chunks for d in chunk}
    return [merged[k] for k in sorted(merged)]


def enumerate_skeletons(g: int, b: int, workers: Optional[int] = None) -> List[Tuple[Shape, Tuple[Edge, ...]]]:
    """Diagrams of genus ``g`` and q-degree ``b`` with the classes ``a_V`` left out."""
    tasks = _tasks(g)
    chunks = _pmap(lambda t: [(t[0], e) for e in skeletons(t[0], t[1], b)], tasks, workers)
    merged = {(s.kinds, e): (s, e) for chunk in chunks for s, e in chunk}
    return [merged[k] for k in sorted(merged)]
