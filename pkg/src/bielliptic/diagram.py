"""Pearl diagrams: data model, validation, genus/degree and cycle windings.

A pearl diagram has vertices labeled ``1..N``.  Each vertex is either
*flat* (bivalent, genus 0) or *non-flat* (genus 1, carrying a class
``a_V >= 1``).  Its oriented edges carry a weight ``w >= 1`` and a height
``h >= 0``.  Picture the vertices sitting at the points ``k/(N+1)`` of the
circle ``R/Z``.  An edge then winds around the circle, and its height
counts how many times it crosses the base point.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

FLAT = "flat"
NONFLAT = "nonflat"


@dataclass(frozen=True, order=True)
class Vertex:
    label: int
    kind: str
    a: Optional[int] = None

    @property
    def is_flat(self) -> bool:
        return self.kind == FLAT


@dataclass(frozen=True, order=True)
class Edge:
    tail: int
    head: int
    w: int
    h: int

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class CurveClass:
    a: int
    b: int


@dataclass(frozen=True)
class Violation:
    condition: str
    where: str
    message: str

    def __str__(self):
        return f"({self.condition}) {self.where}: {self.message}"


@dataclass(frozen=True)
class CycleData:
    component_id: int
    cycle_edges: Tuple[Tuple[Edge, int], ...]
    winding: int


class InvalidDiagram(ValueError):
    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in violations))


@dataclass(frozen=True)
class PearlDiagram:
    """Vertices are kept sorted by label and edges in canonical sorted order."""

    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...]

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[Edge]):
        object.__setattr__(self, "vertices", tuple(sorted(vertices)))
        object.__setattr__(self, "edges", tuple(sorted(edges)))

    @property
    def N(self) -> int:
        return len(self.vertices)

    def vertex(self, label: int) -> Vertex:
        for v in self.vertices:
            if v.label == label:
                return v
        raise KeyError(label)

    def key(self) -> tuple:
        """Canonical sort/dedup key."""
        return (
            self.N,
            tuple((v.label, v.kind, v.a or 0) for v in self.vertices),
            tuple((e.tail, e.head, e.w, e.h) for e in self.edges),
        )

    def to_json(self) -> dict:
        verts = []
        for v in self.vertices:
            rec = {"label": v.label, "kind": v.kind}
            if not v.is_flat:
                rec["a"] = v.a
            verts.append(rec)
        return {
            "vertices": verts,
            "edges": [{"tail": e.tail, "head": e.head, "w": e.w, "h": e.h} for e in self.edges],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "PearlDiagram":
        verts = []
        for rec in data["vertices"]:
            kind = str(rec["kind"]).lower().replace("-", "").replace("_", "")
            if kind not in (FLAT, NONFLAT):
                raise ValueError(f"unknown vertex kind {rec['kind']!r}")
            a = rec.get("a")
            verts.append(Vertex(int(rec["label"]), kind, None if a is None else int(a)))
        edges = [Edge(int(e["tail"]), int(e["head"]), int(e["w"]), int(e["h"])) for e in data["edges"]]
        return cls(verts, edges)


def make_diagram(vertices: Sequence[Tuple[int, str, Optional[int]]], edges: Sequence[Tuple[int, int, int, int]]) -> PearlDiagram:
    """Shorthand constructor: ``vertices=[(label, kind, a)]``, ``edges=[(tail, head, w, h)]``."""
    return PearlDiagram([Vertex(*v) for v in vertices], [Edge(*e) for e in edges])


# -- graph helpers ----------------------------------------------------------

def _components(labels: Iterable[int], edges: Iterable[Edge]) -> List[List[int]]:
    parent = {v: v for v in labels}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        ra, rb = find(e.tail), find(e.head)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: Dict[int, List[int]] = defaultdict(list)
    for v in parent:
        groups[find(v)].append(v)
    return [sorted(g) for _, g in sorted(groups.items())]


def betti_number(d: PearlDiagram) -> int:
    """First Betti number ``E - V + #components``."""
    comps = _components([v.label for v in d.vertices], d.edges)
    return len(d.edges) - d.N + len(comps)


def flat_labels(d: PearlDiagram) -> set:
    return {v.label for v in d.vertices if v.is_flat}


def adjacent_to_flat(d: PearlDiagram, e: Edge) -> bool:
    fl = flat_labels(d)
    return e.tail in fl or e.head in fl


def signed_weights(d: PearlDiagram, label: int) -> List[int]:
    """The vector ``mu_V``: ``+w`` per outgoing flag, ``-w`` per incoming flag."""
    mu = []
    for e in d.edges:
        if e.tail == label:
            mu.append(e.w)
        if e.head == label:
            mu.append(-e.w)
    return mu


def valency(d: PearlDiagram, label: int) -> int:
    return sum((e.tail == label) + (e.head == label) for e in d.edges)


# -- validation ------------------------------------------------------------

def validate(d: PearlDiagram) -> List[Violation]:
    out: List[Violation] = []
    labels = [v.label for v in d.vertices]
    counts = Counter(labels)
    for lab, c in sorted(counts.items()):
        if c > 1:
            out.append(Violation("M''", f"vertex {lab}", f"label used {c} times"))
    expected = set(range(1, d.N + 1))
    if set(labels) != expected:
        out.append(Violation("M''", "vertices", f"labels {sorted(set(labels))} are not 1..{d.N}"))
    if not d.vertices:
        out.append(Violation("G", "diagram", "no vertices"))
        return out

    for v in d.vertices:
        if v.kind not in (FLAT, NONFLAT):
            out.append(Violation("G", f"vertex {v.label}", f"unknown kind {v.kind!r}"))
        elif v.is_flat and v.a is not None:
            out.append(Violation("G", f"vertex {v.label}", "flat vertex carries a class"))
        elif not v.is_flat and (v.a is None or v.a < 1):
            out.append(Violation("G", f"vertex {v.label}", "non-flat vertex needs a >= 1"))

    known = set(labels)
    good_edges = []
    for e in d.edges:
        where = f"edge {e.tail}->{e.head} (w={e.w}, h={e.h})"
        if e.tail not in known or e.head not in known:
            out.append(Violation("G", where, "unknown endpoint"))
            continue
        good_edges.append(e)
        if e.w < 1:
            out.append(Violation("B", where, "weight must be >= 1"))
        if e.h < 0:
            out.append(Violation("H'", where, "height must be >= 0"))
        elif e.tail >= e.head and e.h < 1:
            out.append(Violation("H'", where, "edge going down in label order (or loop) needs h >= 1"))

    for v in d.vertices:
        outw = sum(e.w for e in good_edges if e.tail == v.label)
        inw = sum(e.w for e in good_edges if e.head == v.label)
        if outw != inw:
            out.append(Violation("B", f"vertex {v.label}", f"outgoing weight {outw} != incoming weight {inw}"))
        if v.is_flat:
            ins = [e for e in good_edges if e.head == v.label]
            outs = [e for e in good_edges if e.tail == v.label]
            if len(ins) != 1 or len(outs) != 1:
                out.append(Violation("F", f"vertex {v.label}", "flat vertex needs one incoming and one outgoing edge"))
            elif ins[0].w != outs[0].w:
                out.append(Violation("F", f"vertex {v.label}", "flat vertex edges differ in weight"))

    comps = _components(labels, good_edges)
    if len(comps) != 1:
        out.append(Violation("connectivity", "diagram", f"{len(comps)} connected components"))

    fl = {v.label for v in d.vertices if v.is_flat}
    rest = [lab for lab in labels if lab not in fl]
    rest_edges = [e for e in good_edges if e.tail not in fl and e.head not in fl]
    for comp in _components(rest, rest_edges):
        cs = set(comp)
        ne = sum(1 for e in rest_edges if e.tail in cs)
        b1 = ne - len(comp) + 1
        if b1 != 1:
            out.append(Violation("cycle", f"component {comp}", f"Betti number {b1}, expected 1"))

    b1 = len(good_edges) - len(labels) + len(comps)
    if len(fl) != b1 - 1:
        out.append(Violation("flat-count", "diagram", f"{len(fl)} flat vertices but b1 - 1 = {b1 - 1}"))
    return out


def is_valid(d: PearlDiagram) -> bool:
    return not validate(d)


def _require_valid(d: PearlDiagram):
    problems = validate(d)
    if problems:
        raise InvalidDiagram(problems)


def genus(d: PearlDiagram) -> int:
    _require_valid(d)
    return betti_number(d) + sum(1 for v in d.vertices if not v.is_flat)


def degree(d: PearlDiagram) -> CurveClass:
    _require_valid(d)
    return CurveClass(sum(v.a for v in d.vertices if not v.is_flat), sum(e.w * e.h for e in d.edges))


def automorphism_factor(d: PearlDiagram) -> int:
    """Product of ``c!`` over groups of ``c`` identical parallel edges."""
    return math.prod(math.factorial(c) for c in Counter(d.edges).values())


# -- cycles ----------------------------------------------------------------

def _unique_cycle(comp: Sequence[int], edges: Sequence[Edge]) -> List[Tuple[Edge, int]]:
    """Traverse the unique cycle of a connected unicyclic multigraph."""
    idx = list(range(len(edges)))
    alive = set(idx)
    deg = Counter()
    for i in idx:
        deg[edges[i].tail] += 1
        deg[edges[i].head] += 1
    # strip pendant trees
    leaves = [v for v in comp if deg[v] == 1]
    while leaves:
        v = leaves.pop()
        for i in sorted(alive):
            e = edges[i]
            if v in (e.tail, e.head):
                alive.discard(i)
                other = e.head if e.tail == v else e.tail
                deg[v] -= 1
                deg[other] -= 1
                if deg[other] == 1:
                    leaves.append(other)
                break
    remaining = sorted(alive, key=lambda i: edges[i])
    if not remaining:
        raise ValueError("component has no cycle")
    if len(remaining) == 1:
        e = edges[remaining[0]]
        if not e.is_loop:
            raise ValueError("malformed cycle")
        return [(e, 1)]
    start = min(v for i in remaining for v in (edges[i].tail, edges[i].head))
    path: List[Tuple[Edge, int]] = []
    used = set()
    cur = start
    while True:
        nxt = None
        for i in remaining:
            if i in used:
                continue
            e = edges[i]
            if e.tail == cur:
                nxt = (i, e, 1, e.head)
                break
            if e.head == cur:
                nxt = (i, e, -1, e.tail)
                break
        if nxt is None:
            break
        i, e, sign, cur = nxt
        used.add(i)
        path.append((e, sign))
        if cur == start:
            break
    if len(used) != len(remaining) or cur != start:
        raise ValueError("component is not unicyclic")
    return path


def flat_complement_cycles(d: PearlDiagram) -> List[CycleData]:
    """One cycle per component of the graph with flat vertices removed."""
    _require_valid(d)
    fl = flat_labels(d)
    rest = [v.label for v in d.vertices if v.label not in fl]
    rest_edges = [e for e in d.edges if e.tail not in fl and e.head not in fl]
    out = []
    for cid, comp in enumerate(_components(rest, rest_edges)):
        cs = set(comp)
        ce = [e for e in rest_edges if e.tail in cs]
        path = _unique_cycle(comp, ce)
        out.append(CycleData(cid, tuple(path), sum(s * e.h for e, s in path)))
    return out
