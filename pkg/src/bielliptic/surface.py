"""The four monodromy classes of bielliptic surfaces.

A bielliptic surface is ``(E x F)/G`` with ``G`` acting by translations on
``F`` and by automorphisms on ``E``.  Modulo torsion, the invariants only
depend on the order ``n`` of the monodromy acting on ``H_1(E)``, which
leaves four computational classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

Matrix = Tuple[Tuple[int, int], Tuple[int, int]]

_IDENTITY: Matrix = ((1, 0), (0, 1))

_MONODROMY = {
    "A": (2, ((-1, 0), (0, -1))),
    "B": (3, ((0, -1), (1, -1))),
    "C": (4, ((0, -1), (1, 0))),
    "D": (6, ((0, -1), (1, 1))),
}

# Classification data, kept as metadata only: (type, G, torsion of H^2).
CLASSIFICATION = {
    "A": (("a1", "Z/2", "(Z/2)^2"), ("a2", "Z/2 + Z/2", "Z/2")),
    "B": (("b1", "Z/3", "Z/3"), ("b2", "Z/3 + Z/3", "0")),
    "C": (("c1", "Z/4", "Z/2"), ("c2", "Z/4 + Z/2", "0")),
    "D": (("d", "Z/6", "0"),),
}


def mat_mul(x: Matrix, y: Matrix) -> Matrix:
    return (
        (x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
        (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]),
    )


def mat_pow(x: Matrix, h: int) -> Matrix:
    if h < 0:
        raise ValueError("use a non-negative power")
    out = _IDENTITY
    for _ in range(h):
        out = mat_mul(out, x)
    return out


def _trace(x: Matrix) -> int:
    return x[0][0] + x[1][1]


@dataclass(frozen=True)
class SurfaceType:
    kind: str
    n: int
    monodromy: Matrix
    tau_table: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not self.tau_table:
            table = tuple(2 - _trace(mat_pow(self.monodromy, h)) for h in range(self.n))
            object.__setattr__(self, "tau_table", table)

    def tau(self, h: int) -> int:
        return self.tau_table[h % self.n]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "monodromy": [list(r) for r in self.monodromy],
            "tau": list(self.tau_table),
        }


def surface_type(kind: str) -> SurfaceType:
    """Look up a class by letter; case-insensitive."""
    k = str(kind).upper()
    if k not in _MONODROMY:
        raise ValueError(f"unknown surface type {kind!r}; expected one of a, b, c, d")
    n, m = _MONODROMY[k]
    return SurfaceType(k, n, m)


def tau(t: SurfaceType, h: int) -> int:
    """``2 - tr(M^h)``, with ``h`` reduced mod ``n``."""
    return t.tau(h)


ALL_TYPES = tuple(surface_type(k) for k in "ABCD")
