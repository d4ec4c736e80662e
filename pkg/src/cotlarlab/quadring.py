"""Exact arithmetic in the imaginary quadratic rings Z[sqrt(-n)] and O_{-n}.

Every element is stored in half-coordinates: the pair (u, v) stands for
(u + v*sqrt(-n)) / 2 with u = v (mod 2).  The full ring Z[sqrt(-n)] uses
even pairs only; the maximal order O_{-n} = Z[(1 + sqrt(-n))/2], defined
for square-free n = 3 (mod 4), admits odd pairs as well.  One
representation covers both rings with a single parity invariant, and the
two derived quantities everything downstream needs,

    re4(x, y)       = 4 * Re(x * conj(y)) = u1*u2 + n*v1*v2
    im_coeff4(x, y) = 4 * Im(x * conj(y)) / sqrt(n) = u2*v1 - u1*v2,

are plain integers.  Coordinates are Python ints, so products of long
matrix words never overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

FULL = "full"
MAX = "max"


def _is_squarefree(n: int) -> bool:
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class RingParam:
    """The ambient ring: Z[sqrt(-n)] (kind="full") or O_{-n} (kind="max")."""

    n: int
    kind: str = FULL

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"ring parameter n must be a positive integer, got {self.n!r}")
        if self.kind not in (FULL, MAX):
            raise ValueError(f"unknown ring kind {self.kind!r} (expected 'full' or 'max')")
        if self.kind == MAX and (self.n % 4 != 3 or not _is_squarefree(self.n)):
            raise ValueError(
                f"kind='max' needs a square-free n = 3 (mod 4); got n={self.n}"
            )

    @property
    def is_full(self) -> bool:
        return self.kind == FULL

    def __str__(self):
        return f"Z[sqrt(-{self.n})]" if self.is_full else f"O(-{self.n})"


def check_coords(u: int, v: int, ring: RingParam) -> None:
    """Reject coordinate pairs that are not elements of the ring."""
    if (u - v) % 2 != 0:
        raise ValueError(f"half-coordinates ({u},{v}) violate u = v (mod 2)")
    if ring.is_full and u % 2 != 0:
        raise ValueError(f"({u},{v}) is not in {ring}: full-ring coordinates must be even")


class QInt:
    """Ring element (u + v*sqrt(-n))/2 in half-coordinates."""

    __slots__ = ("u", "v", "ring")

    def __init__(self, u: int, v: int, ring: RingParam):
        check_coords(u, v, ring)
        self.u = u
        self.v = v
        self.ring = ring

    def __repr__(self):
        return f"QInt({self.u}, {self.v}, n={self.ring.n}, {self.ring.kind})"

    def __eq__(self, other):
        return (
            isinstance(other, QInt)
            and self.u == other.u
            and self.v == other.v
            and self.ring == other.ring
        )

    def __hash__(self):
        return hash((self.u, self.v, self.ring))

    def __add__(self, other):
        return ring_add(self, other)

    def __sub__(self, other):
        return ring_sub(self, other)

    def __neg__(self):
        return ring_neg(self)

    def __mul__(self, other):
        return ring_mul(self, other)

    def conj(self) -> "QInt":
        return ring_conj(self)

    @property
    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    @property
    def is_real(self) -> bool:
        return self.v == 0

    @property
    def is_imaginary(self) -> bool:
        """Purely imaginary (a sqrt(-n) multiple); zero counts."""
        return self.u == 0

    def to_complex(self) -> complex:
        return complex(self.u / 2.0, self.v * math.sqrt(self.ring.n) / 2.0)


def zero(ring: RingParam) -> QInt:
    return QInt(0, 0, ring)


def one(ring: RingParam) -> QInt:
    return QInt(2, 0, ring)


def from_int(k: int, ring: RingParam) -> QInt:
    return QInt(2 * k, 0, ring)


def from_parts(x1: int, x2: int, ring: RingParam) -> QInt:
    """Element x1 + x2*sqrt(-n) given in whole (not half) coordinates."""
    return QInt(2 * x1, 2 * x2, ring)


def _check_same_ring(x: QInt, y: QInt) -> None:
    if x.ring != y.ring:
        raise ValueError(f"mixed-ring operands: {x.ring} vs {y.ring}")


def ring_add(x: QInt, y: QInt) -> QInt:
    _check_same_ring(x, y)
    return QInt(x.u + y.u, x.v + y.v, x.ring)


def ring_sub(x: QInt, y: QInt) -> QInt:
    _check_same_ring(x, y)
    return QInt(x.u - y.u, x.v - y.v, x.ring)


def ring_neg(x: QInt) -> QInt:
    return QInt(-x.u, -x.v, x.ring)


def ring_mul(x: QInt, y: QInt) -> QInt:
    # (u1*u2 - n*v1*v2) and (u1*v2 + u2*v1) are even whenever both factors
    # satisfy the parity invariant, so the halvings below are exact.
    _check_same_ring(x, y)
    n = x.ring.n
    return QInt(
        (x.u * y.u - n * x.v * y.v) // 2,
        (x.u * y.v + y.u * x.v) // 2,
        x.ring,
    )


def ring_conj(x: QInt) -> QInt:
    return QInt(x.u, -x.v, x.ring)


def re4(x: QInt, y: QInt) -> int:
    """The exact integer 4*Re(x*conj(y))."""
    _check_same_ring(x, y)
    return x.u * y.u + x.ring.n * x.v * y.v


def im_coeff4(x: QInt, y: QInt) -> int:
    """The exact integer t with Im(x*conj(y)) = t*sqrt(n)/4."""
    _check_same_ring(x, y)
    return y.u * x.v - x.u * y.v
