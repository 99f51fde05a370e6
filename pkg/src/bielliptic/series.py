"""Truncated formal series with exact rational coefficients.

Four flavours are provided:

* :class:`QSeries`   -- one variable ``q``, exponents ``0 <= b < order``
* :class:`USeries`   -- one variable ``u`` (the refinement variable), same rules
* :class:`PQSeries`  -- two variables ``(p, q)``
* :class:`UQSeries`  -- two variables ``(u, q)``

Truncation is exclusive: a series of order ``N`` knows its coefficients for
exponents ``< N`` and nothing above.  Binary operations return the minimum
of the operands' orders and never extrapolate.  Storage is sparse and zero
coefficients are dropped.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

Number = Union[int, Fraction]

__all__ = [
    "QSeries",
    "USeries",
    "PQSeries",
    "UQSeries",
    "divisors",
    "sigma",
    "divisor_series",
    "eisenstein",
    "derive_D",
    "substitute_power",
    "sin_half_expansion",
    "outer",
    "format_fraction",
    "parse_fraction",
]


def format_fraction(x: Number) -> str:
    """Render an exact rational as ``"num/den"`` (always with a denominator)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(s: str | int) -> Fraction:
    return Fraction(s)


class _Series1:
    """Sparse univariate truncated series.  Subclasses fix the variable name."""

    var = "x"
    __slots__ = ("_c", "order")

    def __init__(self, coeffs: Mapping[int, Number] | Iterable[Tuple[int, Number]] = (), order: int = 0):
        if order < 0:
            raise ValueError("truncation order must be non-negative")
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: Dict[int, Fraction] = {}
        for e, v in items:
            if e < 0:
                raise ValueError(f"negative exponent {e}")
            if e >= order:
                continue
            v = Fraction(v)
            if v:
                c[e] = c.get(e, Fraction(0)) + v
                if not c[e]:
                    del c[e]
        self._c = c
        self.order = order

    # -- construction helpers -------------------------------------------
    @classmethod
    def constant(cls, value: Number, order: int):
        return cls({0: value}, order)

    @classmethod
    def monomial(cls, exponent: int, value: Number, order: int):
        return cls({exponent: value}, order)

    # -- access ---------------------------------------------------------
    def __getitem__(self, e: int) -> Fraction:
        if e >= self.order:
            raise IndexError(f"coefficient of {self.var}^{e} is beyond truncation order {self.order}")
        return self._c.get(e, Fraction(0))

    def items(self) -> Iterator[Tuple[int, Fraction]]:
        for e in sorted(self._c):
            yield e, self._c[e]

    def coefficients(self) -> list[Fraction]:
        """Dense coefficient list of length ``order``."""
        return [self._c.get(e, Fraction(0)) for e in range(self.order)]

    def valuation(self) -> int | None:
        return min(self._c) if self._c else None

    def truncate(self, order: int):
        return type(self)(self._c, min(order, self.order))

    def is_zero(self) -> bool:
        return not self._c

    # -- arithmetic -----------------------------------------------------
    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = type(self).constant(other, self.order)
        self._check(other)
        order = min(self.order, other.order)
        out = dict(self._c)
        for e, v in other._c.items():
            out[e] = out.get(e, Fraction(0)) + v
        return type(self)(out, order)

    __radd__ = __add__

    def __neg__(self):
        return type(self)({e: -v for e, v in self._c.items()}, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return type(self)({}, self.order)
            return type(self)({e: v * other for e, v in self._c.items()}, self.order)
        self._check(other)
        order = min(self.order, other.order)
        out: Dict[int, Fraction] = {}
        for e1, v1 in self._c.items():
            if e1 >= order:
                continue
            for e2, v2 in other._c.items():
                e = e1 + e2
                if e < order:
                    out[e] = out.get(e, Fraction(0)) + v1 * v2
        return type(self)(out, order)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = type(self).constant(1, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.equal_to(other, min(self.order, other.order))

    def equal_to(self, other, order: int) -> bool:
        """Coefficient-wise equality for exponents ``< order``."""
        if order > min(self.order, other.order):
            raise ValueError("comparison order exceeds the known coefficients")
        return all(self._c.get(e, 0) == other._c.get(e, 0) for e in set(self._c) | set(other._c) if e < order)

    def first_difference(self, other, order: int) -> int | None:
        for e in range(order):
            if self[e] != other[e]:
                return e
        return None

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        if not self._c:
            body = "0"
        else:
            body = " + ".join(f"({v})*{self.var}^{e}" for e, v in self.items())
        return f"{type(self).__name__}({body} + O({self.var}^{self.order}))"

    # -- serialization --------------------------------------------------
    def to_json(self) -> dict:
        return {"truncation": self.order, "coeffs": [[e, format_fraction(v)] for e, v in self.items()]}

    @classmethod
    def from_json(cls, data: Mapping):
        return cls({int(e): parse_fraction(v) for e, v in data["coeffs"]}, int(data["truncation"]))

    def evaluate(self, x: Number) -> Fraction:
        """Evaluate the truncated polynomial exactly at a rational point."""
        x = Fraction(x)
        return sum((v * x**e for e, v in self._c.items()), Fraction(0))


class QSeries(_Series1):
    var = "q"
    __slots__ = ()


class USeries(_Series1):
    var = "u"
    __slots__ = ()


class _Series2:
    """Sparse bivariate truncated series, exponents ``(i, j)`` with ``i < order[0]``, ``j < order[1]``."""

    vars = ("x", "y")
    __slots__ = ("_c", "order")

    def __init__(self, coeffs: Mapping[Tuple[int, int], Number] | Iterable = (), order: Tuple[int, int] = (0, 0)):
        o1, o2 = order
        if o1 < 0 or o2 < 0:
            raise ValueError("truncation orders must be non-negative")
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: Dict[Tuple[int, int], Fraction] = {}
        for (i, j), v in items:
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent {(i, j)}")
            if i >= o1 or j >= o2:
                continue
            v = Fraction(v)
            if v:
                k = (i, j)
                c[k] = c.get(k, Fraction(0)) + v
                if not c[k]:
                    del c[k]
        self._c = c
        self.order = (o1, o2)

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        i, j = key
        if i >= self.order[0] or j >= self.order[1]:
            raise IndexError(f"coefficient {key} is beyond truncation {self.order}")
        return self._c.get((i, j), Fraction(0))

    def items(self) -> Iterator[Tuple[Tuple[int, int], Fraction]]:
        for k in sorted(self._c):
            yield k, self._c[k]

    def is_zero(self) -> bool:
        return not self._c

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")

    def _min_order(self, other):
        return (min(self.order[0], other.order[0]), min(self.order[1], other.order[1]))

    def __add__(self, other):
        self._check(other)
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, Fraction(0)) + v
        return type(self)(out, self._min_order(other))

    def __neg__(self):
        return type(self)({k: -v for k, v in self._c.items()}, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return type(self)({k: v * other for k, v in self._c.items()}, self.order)
        self._check(other)
        o1, o2 = self._min_order(other)
        out: Dict[Tuple[int, int], Fraction] = {}
        for (i1, j1), v1 in self._c.items():
            for (i2, j2), v2 in other._c.items():
                i, j = i1 + i2, j1 + j2
                if i < o1 and j < o2:
                    out[(i, j)] = out.get((i, j), Fraction(0)) + v1 * v2
        return type(self)(out, (o1, o2))

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        o1, o2 = self._min_order(other)
        keys = set(self._c) | set(other._c)
        return all(self._c.get(k, 0) == other._c.get(k, 0) for k in keys if k[0] < o1 and k[1] < o2)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        x, y = self.vars
        body = " + ".join(f"({v})*{x}^{i}*{y}^{j}" for (i, j), v in self.items()) or "0"
        return f"{type(self).__name__}({body}; order={self.order})"

    def to_json(self) -> dict:
        return {
            "truncation": list(self.order),
            "coeffs": [[[i, j], format_fraction(v)] for (i, j), v in self.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping):
        o = tuple(int(x) for x in data["truncation"])
        return cls({(int(k[0]), int(k[1])): parse_fraction(v) for k, v in data["coeffs"]}, o)


class PQSeries(_Series2):
    vars = ("p", "q")
    __slots__ = ()


class UQSeries(_Series2):
    vars = ("u", "q")
    __slots__ = ()


def outer(first: _Series1, second: _Series1, cls=PQSeries) -> _Series2:
    """Product ``A(x) * B(y)`` of two univariate series in distinct variables."""
    return cls(
        {(i, j): a * b for i, a in first.items() for j, b in second.items()},
        (first.order, second.order),
    )


# -- number theory ---------------------------------------------------------

def divisors(a: int) -> list[int]:
    """Positive divisors of ``a`` in increasing order."""
    if a < 1:
        raise ValueError(f"divisors need a positive integer, got {a}")
    small, large = [], []
    d = 1
    while d * d <= a:
        if a % d == 0:
            small.append(d)
            if d * d != a:
                large.append(a // d)
        d += 1
    return small + large[::-1]


def sigma(k: int, a: int) -> int:
    """Divisor power sum: sum of ``d**k`` over the positive divisors ``d`` of ``a``."""
    if a < 1:
        raise ValueError(f"sigma is defined for a >= 1, got {a}")
    if k < 0:
        raise ValueError("k must be non-negative")
    return sum(d**k for d in divisors(a))


def divisor_series(k: int, order: int) -> QSeries:
    """``sum_{b>=1} sigma_k(b) q^b``, i.e. ``sum_{w,h>=1} w^k q^{wh}``."""
    return QSeries({b: sigma(k, b) for b in range(1, order)}, order)


def eisenstein(weight: int, order: int) -> QSeries:
    """Shifted Eisenstein series ``E_{2k} = sum_{w,h>=1} w^{2k-1} q^{wh}`` with zero constant term."""
    if weight < 2 or weight % 2:
        raise ValueError(f"weight must be an even integer >= 2, got {weight}")
    return divisor_series(weight - 1, order)


def derive_D(s: _Series1) -> _Series1:
    """The operator ``q d/dq``."""
    return type(s)({e: e * v for e, v in s.items()}, s.order)


def substitute_power(s: _Series1, m: int) -> _Series1:
    """``s(q) -> s(q^m)``, keeping the truncation order of ``s``."""
    if m < 1:
        raise ValueError("substitution power must be >= 1")
    return type(s)({m * e: v for e, v in s.items() if m * e < s.order}, s.order)


def sin_half_expansion(k: int, order: int) -> USeries:
    """``2 sin(k u / 2)`` as a truncated ``u``-series.

    This is ``(-i) [k]`` with ``[k] = q^{k/2} - q^{-k/2}`` and ``q = e^{iu}``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    half = Fraction(k, 2)
    coeffs = {}
    j = 0
    while 2 * j + 1 < order:
        coeffs[2 * j + 1] = (-1) ** j * half ** (2 * j + 1) * Fraction(2, math.factorial(2 * j + 1))
        j += 1
    return USeries(coeffs, order)
