"""Graph generating series with congruence conditions on heights.

For a graph with vertices ``1..N``, even exponents ``m_e`` and optional
constraints, the series sums ``prod_e w_e^(m_e+1) q^(w_e h_e)`` over all
orientations, balanced positive weights and admissible heights.  Heights
follow the pearl-diagram rule: ``h >= 0`` along increasing labels and
``h >= 1`` otherwise (loops included).

Constraints are taken modulo ``n``:

* a loop may carry a unit-stable set ``upsilon``; then ``h mod n`` must lie in it;
* a non-loop may carry a residue ``mu`` for its stored orientation
  ``tail -> head``; then ``h = mu`` along it and ``h = -mu`` against it.

Here ``E_m`` in the sense of the loop lemma is ``sum w^(m+1) q^(wh)``, which
is :func:`eisenstein` of weight ``m + 2``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from .enumeration import circulations, height_lower_bound
from .series import QSeries, divisors, eisenstein, substitute_power


@dataclass(frozen=True)
class GEdge:
    tail: int
    head: int
    m: int = 0
    mu: Optional[int] = None
    upsilon: Optional[FrozenSet[int]] = None

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head

    @property
    def constrained(self) -> bool:
        return self.mu is not None or self.upsilon is not None


@dataclass(frozen=True)
class DecoratedGraph:
    N: int
    edges: Tuple[GEdge, ...]
    n: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("modulus must be >= 1")
        units = [u for u in range(1, self.n + 1) if math.gcd(u, self.n) == 1]
        normalized = []
        for e in self.edges:
            if not (1 <= e.tail <= self.N and 1 <= e.head <= self.N):
                raise ValueError(f"edge {e.tail}->{e.head} has an unknown endpoint")
            if e.m < 0 or e.m % 2:
                raise ValueError(f"exponent m_e must be even and >= 0, got {e.m}")
            if e.is_loop and e.mu is not None:
                raise ValueError("loops take an upsilon set, not a residue")
            if not e.is_loop and e.upsilon is not None:
                raise ValueError("only loops take an upsilon set")
            if e.upsilon is not None:
                ups = frozenset(x % self.n for x in e.upsilon)
                if any((u * x) % self.n not in ups for u in units for x in ups):
                    raise ValueError(f"upsilon {sorted(ups)} is not stable under units mod {self.n}")
                e = GEdge(e.tail, e.head, e.m, None, ups)
            normalized.append(e)
        object.__setattr__(self, "edges", tuple(normalized))

    @classmethod
    def from_json(cls, data: Mapping) -> "DecoratedGraph":
        verts = data.get("vertices", [])
        labels = [v["label"] if isinstance(v, Mapping) else v for v in verts]
        N = int(data.get("N", max(labels) if labels else 0))
        if labels and sorted(labels) != list(range(1, N + 1)):
            raise ValueError("vertex labels must be 1..N")
        edges = []
        for rec in data["edges"]:
            ups = rec.get("upsilon")
            edges.append(GEdge(int(rec["tail"]), int(rec["head"]), int(rec.get("m", 0)),
                               None if rec.get("mu") is None else int(rec["mu"]),
                               None if ups is None else frozenset(int(x) for x in ups)))
        return cls(N, tuple(edges), int(data.get("modulus", data.get("n", 1))))

    def to_json(self) -> dict:
        edges = []
        for e in self.edges:
            rec = {"tail": e.tail, "head": e.head, "m": e.m}
            if e.mu is not None:
                rec["mu"] = e.mu
            if e.upsilon is not None:
                rec["upsilon"] = sorted(e.upsilon)
            edges.append(rec)
        return {"modulus": self.n, "vertices": [{"label": i} for i in range(1, self.N + 1)], "edges": edges}

    def without_loops(self) -> "DecoratedGraph":
        return DecoratedGraph(self.N, tuple(e for e in self.edges if not e.is_loop), self.n)


def _height_ok(e: GEdge, forward: bool, h: int, n: int) -> bool:
    if e.is_loop:
        return e.upsilon is None or h % n in e.upsilon
    if e.mu is None:
        return True
    target = e.mu if forward else -e.mu
    return (h - target) % n == 0


def _edge_height_series(e: GEdge, tail: int, head: int, forward: bool, w: int, n: int, order: int) -> QSeries:
    coeffs = {}
    h = height_lower_bound(tail, head)
    while w * h < order:
        if _height_ok(e, forward, h, n):
            coeffs[w * h] = 1
        h += 1
    return QSeries(coeffs, order)


def graph_sum(dg: DecoratedGraph, qmax: int) -> QSeries:
    """The constrained generating series up to ``q^qmax``.

    Every weight is at most the total q-degree: a balanced positive weighting
    splits into directed cycles, and each one must cross the base point.
    """
    if qmax < 0:
        raise ValueError("qmax must be >= 0")
    order = qmax + 1
    total = QSeries({}, order)
    non_loops = [i for i, e in enumerate(dg.edges) if not e.is_loop]
    for flips in itertools.product((False, True), repeat=len(non_loops)):
        flipped = dict(zip(non_loops, flips))
        arcs = []
        forward = []
        for i, e in enumerate(dg.edges):
            if flipped.get(i, False):
                arcs.append((e.head, e.tail))
                forward.append(False)
            else:
                arcs.append((e.tail, e.head))
                forward.append(True)
        cap = max(qmax, 1)
        for ws in circulations(dg.N, arcs, cap, budget=qmax):
            term = QSeries.constant(math.prod(w ** (e.m + 1) for w, e in zip(ws, dg.edges)), order)
            for (t, h), fw, w, e in zip(arcs, forward, ws, dg.edges):
                term = term * _edge_height_series(e, t, h, fw, w, dg.n, order)
                if term.is_zero():
                    break
            total = total + term
    return total


# -- loop factors ----------------------------------------------------------

def orbit(n: int, d: int) -> FrozenSet[int]:
    """``{k mod n : gcd(k, n) = d}``; ``d = 0`` (or ``d = n``) is the class ``{0}``."""
    if d == 0 or d == n:
        return frozenset({0})
    return frozenset(k for k in range(1, n) if math.gcd(k, n) == d)


def loop_factor(n: int, d: int, m: int, qmax: int) -> QSeries:
    """Loop series over heights in the orbit class ``d``, via the Eisenstein recursion."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if m < 0 or m % 2:
        raise ValueError("m must be even and >= 0")
    if d != 0 and (d < 0 or n % d):
        raise ValueError(f"class {d} does not divide {n}")
    order = qmax + 1
    em = eisenstein(m + 2, order)
    if d == 0 or d == n:
        return substitute_power(em, n)
    if d > 1:
        return substitute_power(loop_factor(n // d, 1, m, qmax), d)
    rest = em - substitute_power(em, n)
    for dd in divisors(n):
        if 1 < dd < n:
            rest = rest - loop_factor(n, dd, m, qmax)
    return rest


def loop_classes(n: int) -> List[int]:
    """The orbit classes: ``0`` and the proper divisors of ``n``."""
    return [0] + [d for d in divisors(n) if d < n]


# -- propagators -----------------------------------------------------------

@dataclass(frozen=True)
class PropagatorSeries:
    coeffs: Dict[Tuple[int, int], Fraction]
    zmax: int
    qmax: int

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        z, q = key
        if abs(z) > self.zmax or q > self.qmax or q < 0:
            raise IndexError(f"{key} outside bounds (|z| <= {self.zmax}, q <= {self.qmax})")
        return self.coeffs.get((z, q), Fraction(0))

    def items(self):
        return sorted(self.coeffs.items())


def propagator_fourier(k: int, n: int, zmax: int, qmax: int, m: int = 0) -> PropagatorSeries:
    """Fourier data of the ``m``-th normalized z-derivative of ``P_k``.

    ``sum_{h>=0, h=k} w^(m+1) zeta^w q^(hw) + sum_{h>=1, h=-k} w^(m+1) zeta^(-w) q^(hw)``.
    """
    if n < 1 or not 0 <= k < n:
        raise ValueError("need 0 <= k < n")
    if m % 2:
        raise ValueError("m must be even")
    out: Dict[Tuple[int, int], Fraction] = {}
    for w in range(1, zmax + 1):
        c = Fraction(w ** (m + 1))
        h = 0
        while h * w <= qmax:
            if (h - k) % n == 0:
                out[(w, h * w)] = out.get((w, h * w), 0) + c
            if h >= 1 and (h + k) % n == 0:
                out[(-w, h * w)] = out.get((-w, h * w), 0) + c
            h += 1
    return PropagatorSeries(out, zmax, qmax)


def constant_coefficient_check(dg: DecoratedGraph, qmax: int) -> QSeries:
    """Constant term in all ``zeta_i`` of the product of edge propagators.

    Edge ``e`` contributes ``P(zeta_{e+}/zeta_{e-})`` with ``e- < e+``.  A
    vertex variable is dropped (keeping exponent 0) as soon as its last edge
    has been multiplied in.
    """
    if any(e.is_loop for e in dg.edges):
        raise ValueError("constant_coefficient_check needs a loopless graph")
    cap = max(qmax, 1)
    order = qmax + 1
    edges = sorted(dg.edges, key=lambda e: (max(e.tail, e.head), min(e.tail, e.head)))
    last_use = {}
    for i, e in enumerate(edges):
        last_use[e.tail] = i
        last_use[e.head] = i
    state: Dict[Tuple[Tuple[int, ...], int], Fraction] = {((0,) * dg.N, 0): Fraction(1)}
    for i, e in enumerate(edges):
        lo, hi = min(e.tail, e.head), max(e.tail, e.head)
        if e.mu is None:
            prop = propagator_fourier(0, 1, cap, qmax, e.m)
        else:
            mu_nat = e.mu if e.tail < e.head else -e.mu
            prop = propagator_fourier(mu_nat % dg.n, dg.n, cap, qmax, e.m)
        terms = prop.items()
        drop = [v for v in (lo, hi) if last_use[v] == i]
        new: Dict[Tuple[Tuple[int, ...], int], Fraction] = {}
        for (exps, qe), c in state.items():
            for (z, dq), pc in terms:
                q = qe + dq
                if q > qmax:
                    continue
                ex = list(exps)
                ex[hi - 1] += z
                ex[lo - 1] -= z
                if any(ex[v - 1] for v in drop):
                    continue
                key = (tuple(ex), q)
                new[key] = new.get(key, 0) + c * pc
        state = {k: v for k, v in new.items() if v}
    out = {}
    for (exps, q), c in state.items():
        if not any(exps):
            out[q] = out.get(q, 0) + c
    # vertices without edges contribute the trivial factor 1
    return QSeries(out, order)


# -- verification suites ---------------------------------------------------

def single_loop(n: int, m: int, upsilon: Optional[Sequence[int]] = None) -> DecoratedGraph:
    return DecoratedGraph(1, (GEdge(1, 1, m, None, None if upsilon is None else frozenset(upsilon)),), n)


LOOP_EXAMPLES = (
    # (n, residues, [(coefficient, substitution power)])
    (2, (0,), ((1, 2),)),
    (2, (1,), ((1, 1), (-1, 2))),
    (3, (0,), ((1, 3),)),
    (3, (1, 2), ((1, 1), (-1, 3))),
    (4, (2,), ((1, 2), (-1, 4))),
)


def check_loop_examples(qmax: int, ms: Sequence[int] = (0, 2)) -> List[dict]:
    out = []
    for n, res, combo in LOOP_EXAMPLES:
        for m in ms:
            em = eisenstein(m + 2, qmax + 1)
            expected = QSeries({}, qmax + 1)
            for c, p in combo:
                expected = expected + substitute_power(em, p) * c
            got = graph_sum(single_loop(n, m, res), qmax)
            out.append({"n": n, "residues": list(res), "m": m, "ok": got == expected,
                        "first_difference": got.first_difference(expected, qmax + 1)})
    return out


def check_telescoping(qmax: int, ns: Sequence[int] = (2, 3, 4, 6), ms: Sequence[int] = (0, 2)) -> List[dict]:
    out = []
    for n in ns:
        for m in ms:
            total = QSeries({}, qmax + 1)
            per_class_ok = True
            for d in loop_classes(n):
                f = loop_factor(n, d, m, qmax)
                total = total + f
                per_class_ok &= f == graph_sum(single_loop(n, m, sorted(orbit(n, d))), qmax)
            em = eisenstein(m + 2, qmax + 1)
            out.append({"n": n, "m": m, "ok": total == em and per_class_ok,
                        "sum_ok": total == em, "classes_match_graph_sum": per_class_ok})
    return out


def loopless_graphs(max_vertices: int = 3, max_edges: int = 4) -> List[Tuple[int, Tuple[Tuple[int, int], ...]]]:
    out = []
    for N in range(1, max_vertices + 1):
        slots = [(i, j) for i in range(1, N + 1) for j in range(i + 1, N + 1)]
        for k in range(0, max_edges + 1):
            if not slots and k:
                continue
            for combo in itertools.combinations_with_replacement(slots, k):
                out.append((N, combo))
    return out


def _decorations(N: int, pairs: Sequence[Tuple[int, int]], n: int) -> List[DecoratedGraph]:
    """A fixed family of exponent/constraint patterns per graph."""
    E = len(pairs)
    m_patterns = [(0,) * E, tuple(2 * (i % 2) for i in range(E))]
    out = []
    for ms in m_patterns:
        mu_patterns = [(None,) * E]
        if n > 1:
            mu_patterns += [
                tuple(r % n for _ in range(E)) for r in range(n)
            ] + [tuple(None if i % 2 else (i // 2 + 1) % n for i in range(E))]
        for mus in mu_patterns:
            # even positions reversed so both stored orientations get used
            edges = tuple(GEdge(*(p if i % 2 == 0 else p[::-1]), m, mu) for i, (p, m, mu) in enumerate(zip(pairs, ms, mus)))
            out.append(DecoratedGraph(N, edges, n))
    uniq = {}
    for g in out:
        uniq.setdefault(repr(g.to_json()), g)
    return list(uniq.values())


def check_contour(qmax: int, ns: Sequence[int] = (1, 2), max_vertices: int = 3, max_edges: int = 4) -> List[dict]:
    out = []
    for n in ns:
        for N, pairs in loopless_graphs(max_vertices, max_edges):
            for dg in _decorations(N, pairs, n):
                a = graph_sum(dg, qmax)
                b = constant_coefficient_check(dg, qmax)
                out.append({"graph": dg.to_json(), "ok": a == b,
                            "first_difference": a.first_difference(b, qmax + 1)})
    return out


def check_loop_factorization(dg: DecoratedGraph, qmax: int) -> bool:
    """Full graph sum equals the loopless sum times one loop factor per loop."""
    prod = graph_sum(dg.without_loops(), qmax)
    for e in dg.edges:
        if e.is_loop:
            prod = prod * graph_sum(DecoratedGraph(1, (GEdge(1, 1, e.m, None, e.upsilon),), dg.n), qmax)
    return prod == graph_sum(dg, qmax)
