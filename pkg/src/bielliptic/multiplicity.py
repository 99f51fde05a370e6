"""Multiplicities of pearl diagrams.

Enumerative case::

    m(P) = prod_k tau(nu_k) * prod_V a_V^(n_V - 1) sigma_1(a_V)
           * prod_{edges at a flat vertex} w_e * prod_{other edges} w_e^3

The refined case replaces each vertex factor by the series ``R_a(mu_V)``.
Both are divided by the parallel-edge symmetry factor unless
``divide_automorphisms=False``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .diagram import (
    PearlDiagram,
    adjacent_to_flat,
    automorphism_factor,
    flat_complement_cycles,
    signed_weights,
    valency,
    _require_valid,
)
from .series import USeries, divisors, sigma, sin_half_expansion
from .surface import SurfaceType

DIVIDE_AUTOMORPHISMS = True


def vertex_factor(a: int, n_v: int) -> int:
    return a ** (n_v - 1) * sigma(1, a)


def _edge_and_cycle_factor(d: PearlDiagram, t: SurfaceType) -> int:
    out = 1
    for c in flat_complement_cycles(d):
        out *= t.tau(c.winding)
        if not out:
            return 0
    for e in d.edges:
        out *= e.w if adjacent_to_flat(d, e) else e.w**3
    return out


def multiplicity_enumerative(d: PearlDiagram, t: SurfaceType, divide_automorphisms: bool | None = None) -> Fraction:
    _require_valid(d)
    m = Fraction(_edge_and_cycle_factor(d, t))
    if m:
        for v in d.vertices:
            if not v.is_flat:
                m *= vertex_factor(v.a, valency(d, v.label))
    if divide_automorphisms is None:
        divide_automorphisms = DIVIDE_AUTOMORPHISMS
    if divide_automorphisms:
        m /= automorphism_factor(d)
    return m


def r_series(a: int, mu: Sequence[int], umax: int) -> USeries:
    """``sum_{k | a} (a/k)^(n-1) prod_j s(k |mu_j|) / |mu_j|`` up to ``u^umax``.

    ``s(x) = 2 sin(x u / 2)`` stands for ``(-i)[x]``, so the global ``(-i)^n``
    is already absorbed and everything stays rational.
    """
    if a < 1:
        raise ValueError("a must be >= 1")
    if any(x == 0 for x in mu):
        raise ValueError("mu entries must be non-zero")
    if sum(mu) != 0:
        raise ValueError("mu must sum to zero")
    order = umax + 1
    n = len(mu)
    total = USeries({}, order)
    for k in divisors(a):
        term = USeries.constant(Fraction(a // k) ** (n - 1), order)
        for x in mu:
            term = term * (sin_half_expansion(k * abs(x), order) * Fraction(1, abs(x)))
        total = total + term
    return total


def multiplicity_refined(d: PearlDiagram, t: SurfaceType, umax: int, divide_automorphisms: bool | None = None) -> USeries:
    _require_valid(d)
    order = umax + 1
    c = _edge_and_cycle_factor(d, t)
    if divide_automorphisms is None:
        divide_automorphisms = DIVIDE_AUTOMORPHISMS
    scale = Fraction(c, automorphism_factor(d) if divide_automorphisms else 1)
    out = USeries.constant(scale, order)
    if not scale:
        return out
    for v in d.vertices:
        if not v.is_flat:
            out = out * r_series(v.a, signed_weights(d, v.label), umax)
    return out


# Building-block constants, kept as documentation of what m(P) absorbs.

def point_insertion_leading(a: int, mu: Sequence[int]) -> int:
    """Genus-one boundary invariant with a point: ``mu_1^2 a^(n-1) sigma_1(a)``."""
    return mu[0] ** 2 * vertex_factor(a, len(mu))


def one_cycle_insertion_leading(a: int, mu: Sequence[int]) -> int:
    """Same with two 1-cycle insertions: ``-mu_1 mu_2 a^(n-1) sigma_1(a)``."""
    return -mu[0] * mu[1] * vertex_factor(a, len(mu))


def fiber_invariants(w: int, g: int = 0) -> tuple:
    """Fiber class ``w p``: (interior point insertion, boundary point or 1-cycle pair).

    Genus zero gives ``(1, 1/w)``; a top lambda class kills every higher genus.
    """
    if g > 0:
        return Fraction(0), Fraction(0)
    return Fraction(1), Fraction(1, w)
