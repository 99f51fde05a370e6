"""Assembly of invariants and generating series, plus closed-form oracles.

The oracles are built only from :mod:`bielliptic.series`, never from the
diagram pipeline, so pipeline/oracle agreement is a genuine cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .diagram import PearlDiagram, Vertex, automorphism_factor, valency
from .enumeration import enumerate_diagrams, enumerate_skeletons
from . import multiplicity as _mult
from .multiplicity import (
    _edge_and_cycle_factor,
    multiplicity_enumerative,
    multiplicity_refined,
    vertex_factor,
)
from .series import (
    PQSeries,
    QSeries,
    UQSeries,
    USeries,
    derive_D,
    divisor_series,
    divisors,
    eisenstein,
    outer,
    substitute_power,
)
from .surface import SurfaceType, surface_type


# -- pipeline --------------------------------------------------------------

def gw_invariant(t: SurfaceType, g: int, a: int, b: int, workers: Optional[int] = None,
                 divide_automorphisms: Optional[bool] = None) -> Fraction:
    """Sum of ``m(P)`` over all pearl diagrams of genus ``g`` and degree ``(a, b)``."""
    return sum(
        (multiplicity_enumerative(d, t, divide_automorphisms) for d in enumerate_diagrams(g, a, b, workers)),
        Fraction(0),
    )


def _a_series(valencies: Sequence[int], amax: int) -> List[Fraction]:
    """Coefficients of ``prod_V sum_a a^(n_V - 1) sigma_1(a) p^a`` up to ``p^amax``."""
    acc = [Fraction(0)] * (amax + 1)
    acc[0] = Fraction(1)
    for nv in valencies:
        new = [Fraction(0)] * (amax + 1)
        for i, c in enumerate(acc):
            if not c:
                continue
            for x in range(1, amax + 1 - i):
                new[i + x] += c * vertex_factor(x, nv)
        acc = new
    return acc


def series_F(t: SurfaceType, g: int, amax: int, bmax: int, workers: Optional[int] = None,
             divide_automorphisms: Optional[bool] = None) -> PQSeries:
    """``F_g(p, q)`` truncated to ``a <= amax``, ``b <= bmax``.

    Enumerates the a-free skeletons once per ``b`` and sums the vertex
    factors over all splittings of ``a``; equal cell by cell to
    :func:`gw_invariant`.
    """
    if g < 2:
        raise ValueError("genus must be >= 2")
    if divide_automorphisms is None:
        divide_automorphisms = _mult.DIVIDE_AUTOMORPHISMS
    coeffs: Dict[tuple, Fraction] = {}
    for b in range(1, bmax + 1):
        for shape, edges in enumerate_skeletons(g, b, workers):
            verts = [Vertex(i + 1, k, None if k == "flat" else 1) for i, k in enumerate(shape.kinds)]
            d = PearlDiagram(verts, edges)
            c = Fraction(_edge_and_cycle_factor(d, t))
            if not c:
                continue
            if divide_automorphisms:
                c /= automorphism_factor(d)
            vals = [valency(d, v.label) for v in d.vertices if not v.is_flat]
            for a, x in enumerate(_a_series(vals, amax)):
                if x:
                    coeffs[(a, b)] = coeffs.get((a, b), Fraction(0)) + c * x
    return PQSeries(coeffs, (amax + 1, bmax + 1))


def refined_series_BG(t: SurfaceType, g0: int, a: int, b: int, umax: int, workers: Optional[int] = None,
                      experimental: bool = False) -> USeries:
    """``sum_g <lambda_{g-g0}; pt^{g0-1}> u^(2g-2)`` in degree ``(a, b)``, up to ``u^umax``."""
    if g0 != 2 and not experimental:
        raise NotImplementedError("refined series are only supported for g0 = 2; pass experimental=True")
    out = USeries({}, umax + 1)
    for d in enumerate_diagrams(g0, a, b, workers):
        out = out + multiplicity_refined(d, t, umax)
    return out


def refined_table(t: SurfaceType, g0: int, amax: int, bmax: int, umax: int, workers: Optional[int] = None,
                  experimental: bool = False) -> Dict[int, UQSeries]:
    """Refined series for every degree, grouped by ``a`` as ``(u, q)`` series."""
    out = {}
    for a in range(1, amax + 1):
        coeffs = {}
        for b in range(1, bmax + 1):
            for e, v in refined_series_BG(t, g0, a, b, umax, workers, experimental).items():
                coeffs[(e, b)] = v
        out[a] = UQSeries(coeffs, (umax + 1, bmax + 1))
    return out


def one_cycle_rescaling(omega_dot_class: int, n: int, point_invariant: Fraction) -> Fraction:
    """Invariant with a pair of 1-cycles ``omega alpha, omega beta`` from the point invariant."""
    if n < 2:
        raise ValueError("need at least two insertions")
    return Fraction(omega_dot_class, n - 1) * point_invariant


# -- closed-form oracles ---------------------------------------------------

GENUS2_B = {
    "A": {1: 4, 2: -4},
    "B": {1: 3, 3: -3},
    "C": {1: 2, 2: 2, 4: -4},
    "D": {1: 1, 2: 2, 3: 3, 6: -6},
}

GENUS3_B_II = {
    "A": {1: 4, 2: -8},
    "B": {1: 3, 3: -9},
    "C": {1: 2, 2: 4, 4: -16},
    "D": {1: 1, 2: 4, 3: 9, 6: -36},
}

TYPE_I_LABELINGS = 2


def _combo(base: QSeries, coeffs: Dict[int, int]) -> QSeries:
    out = QSeries({}, base.order)
    for d, c in sorted(coeffs.items()):
        out = out + substitute_power(base, d) * c
    return out


def genus2_B(t: SurfaceType, bmax: int) -> QSeries:
    return _combo(eisenstein(4, bmax + 1), GENUS2_B[t.kind])


def genus3_B_I(t: SurfaceType, bmax: int) -> QSeries:
    return derive_D(eisenstein(2, bmax + 1)) * genus2_B(t, bmax)


def genus3_B_II(t: SurfaceType, bmax: int) -> QSeries:
    return _combo(derive_D(eisenstein(6, bmax + 1)), GENUS3_B_II[t.kind])


def oracle_F2(t: SurfaceType, amax: int, bmax: int) -> PQSeries:
    """``DE_2(p) * B_t(q)``."""
    return outer(derive_D(eisenstein(2, amax + 1)), genus2_B(t, bmax))


def oracle_F3_parts(t: SurfaceType, amax: int, bmax: int, labelings: int = TYPE_I_LABELINGS) -> tuple:
    """(type I, type II) contributions.  Type I counts each of its labelings."""
    e2 = eisenstein(2, amax + 1)
    d3 = derive_D(derive_D(derive_D(e2)))
    de2 = derive_D(e2)
    part1 = outer(d3, genus3_B_I(t, bmax)) * labelings
    part2 = outer(de2 * de2, genus3_B_II(t, bmax))
    return part1, part2


def oracle_F3(t: SurfaceType, amax: int, bmax: int, labelings: int = TYPE_I_LABELINGS) -> PQSeries:
    p1, p2 = oracle_F3_parts(t, amax, bmax, labelings)
    return p1 + p2


def oracle_F3_displayed(amax: int, bmax: int) -> PQSeries:
    """The printed type (a) total, taken literally::

        4 D^3E_2(p) DE_2(p) [E_4(q) - E_4(q^2)] + 4 DE_2(p)^2 [DE_6(q) - 2 DE_6(q^2)]
    """
    e2p = eisenstein(2, amax + 1)
    de2p = derive_D(e2p)
    d3 = derive_D(derive_D(de2p))
    e4 = eisenstein(4, bmax + 1)
    de6 = derive_D(eisenstein(6, bmax + 1))
    first = outer(d3 * de2p, e4 - substitute_power(e4, 2)) * 4
    second = outer(de2p * de2p, de6 - substitute_power(de6, 2) * 2) * 4
    return first + second


def oracle_refined(t: SurfaceType, gmax: int, amax: int, bmax: int) -> Dict[int, UQSeries]:
    """Bounded quadruple sum for the genus-two refined series.

    Coefficient of ``u^(2g-2) p^a q^b`` is
    ``2 (-1)^g / (2g-2)! * sum_{kl=a, wh=b} tau(h) l k^(2g-2) w^(2g-1)``.
    """
    uorder = 2 * gmax
    out = {}
    for a in range(1, amax + 1):
        coeffs = {}
        for g in range(2, gmax + 1):
            pre = Fraction(2 * (-1) ** g, math.factorial(2 * g - 2))
            for b in range(1, bmax + 1):
                s = 0
                for k in divisors(a):
                    l = a // k
                    for w in divisors(b):
                        h = b // w
                        s += t.tau(h) * l * k ** (2 * g - 2) * w ** (2 * g - 1)
                if s:
                    coeffs[(2 * g - 2, b)] = pre * s
        out[a] = UQSeries(coeffs, (uorder, bmax + 1))
    return out


REFINED_VARIANTS = ("DE_{2g-2}", "DE_{2g-1}")


def refined_closed_form(gmax: int, amax: int, bmax: int, variant: str = "DE_{2g-2}") -> Dict[int, UQSeries]:
    """Printed type (a) closed form ``8 (-1)^g/(2g-2)! DE_k(p) (E_{2g}(q) - E_{2g}(q^2))``.

    ``DE_k`` has p-coefficient ``a sigma_{k-1}(a)``; ``variant`` picks ``k = 2g-2`` or ``k = 2g-1``.
    """
    if variant not in REFINED_VARIANTS:
        raise ValueError(f"variant must be one of {REFINED_VARIANTS}")
    uorder = 2 * gmax
    coeffs: Dict[int, dict] = {a: {} for a in range(1, amax + 1)}
    for g in range(2, gmax + 1):
        pre = Fraction(8 * (-1) ** g, math.factorial(2 * g - 2))
        k = 2 * g - 3 if variant == "DE_{2g-2}" else 2 * g - 2
        pser = derive_D(divisor_series(k, amax + 1))
        e = eisenstein(2 * g, bmax + 1)
        qser = e - substitute_power(e, 2)
        for a, x in pser.items():
            for b, y in qser.items():
                coeffs[a][(2 * g - 2, b)] = pre * x * y
    return {a: UQSeries(c, (uorder, bmax + 1)) for a, c in coeffs.items()}


# -- comparison reports ----------------------------------------------------

def first_mismatch_pq(x: PQSeries, y: PQSeries, amax: int, bmax: int, amin: int = 1, bmin: int = 1):
    for a in range(amin, amax + 1):
        for b in range(bmin, bmax + 1):
            if x[(a, b)] != y[(a, b)]:
                return {"a": a, "b": b, "computed": str(x[(a, b)]), "oracle": str(y[(a, b)])}
    return None


def first_mismatch_refined(x: Dict[int, UQSeries], y: Dict[int, UQSeries], amax: int, bmax: int, umax: int):
    for a in range(1, amax + 1):
        for b in range(1, bmax + 1):
            for e in range(umax + 1):
                if x[a][(e, b)] != y[a][(e, b)]:
                    return {"a": a, "b": b, "u": e, "computed": str(x[a][(e, b)]), "oracle": str(y[a][(e, b)])}
    return None


@dataclass
class InvariantReport:
    kind: str
    name: str
    bounds: dict
    computed: dict
    oracle: Optional[dict]
    ok: bool
    first_mismatch: Optional[dict]
    extra: dict = field(default_factory=dict)
    timing: Optional[float] = None

    def to_json(self, with_timing: bool = False) -> dict:
        out = {
            "suite": self.name,
            "surface": surface_type(self.kind).to_json(),
            "bounds": self.bounds,
            "ok": self.ok,
            "first_mismatch": self.first_mismatch,
            "computed": self.computed,
            "oracle": self.oracle,
        }
        if self.extra:
            out["extra"] = self.extra
        if with_timing and self.timing is not None:
            out["seconds"] = round(self.timing, 3)
        return out


def verify_genus2(t: SurfaceType, amax: int, bmax: int, workers: Optional[int] = None) -> InvariantReport:
    f = series_F(t, 2, amax, bmax, workers)
    o = oracle_F2(t, amax, bmax)
    mm = first_mismatch_pq(f, o, amax, bmax)
    return InvariantReport(t.kind, "genus2", {"amax": amax, "bmax": bmax}, f.to_json(), o.to_json(), mm is None, mm)


def verify_genus3(t: SurfaceType, amax: int, bmax: int, workers: Optional[int] = None,
                  oracle: str = "lists") -> InvariantReport:
    """``oracle='lists'`` compares with the per-type lists (type I counted per labeling);
    ``oracle='printed'`` with the literal displayed type (a) total."""
    f = series_F(t, 3, amax, bmax, workers)
    if oracle == "lists":
        o = oracle_F3(t, amax, bmax)
    elif oracle == "printed":
        if t.kind != "A":
            raise ValueError("the printed total exists for type a only")
        o = oracle_F3_displayed(amax, bmax)
    else:
        raise ValueError("oracle must be 'lists' or 'printed'")
    mm = first_mismatch_pq(f, o, amax, bmax)
    return InvariantReport(t.kind, f"genus3-{oracle}", {"amax": amax, "bmax": bmax}, f.to_json(), o.to_json(),
                           mm is None, mm)


def _refined_json(tab: Dict[int, UQSeries]) -> dict:
    return {str(a): s.to_json() for a, s in sorted(tab.items())}


def verify_refined(t: SurfaceType, amax: int, bmax: int, umax: int, workers: Optional[int] = None) -> InvariantReport:
    gmax = umax // 2 + 1
    comp = refined_table(t, 2, amax, bmax, umax, workers)
    orc = oracle_refined(t, gmax, amax, bmax)
    mm = first_mismatch_refined(comp, orc, amax, bmax, umax)
    extra = {}
    if t.kind == "A":
        matches = {}
        for variant in REFINED_VARIANTS:
            cf = refined_closed_form(gmax, amax, bmax, variant)
            matches[variant] = first_mismatch_refined(comp, cf, amax, bmax, umax) is None
        extra["closed_form_matches"] = matches
    return InvariantReport(t.kind, "refined", {"amax": amax, "bmax": bmax, "umax": umax}, _refined_json(comp),
                           _refined_json(orc), mm is None, mm, extra)
