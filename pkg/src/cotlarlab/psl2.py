"""Projective 2x2 matrices over the quadratic rings, plus a float model of PSL2(C).

The exact layer stores a lattice element as an 8-tuple of half-coordinates
(a.u, a.v, b.u, b.v, c.u, c.v, d.u, d.v) with determinant exactly 1 and a
canonical projective sign (first nonzero coordinate positive).  Hot paths
(enumeration sweeps, Cotlar pair scans) work on the raw tuples through the
module-level ``*_raw`` helpers; :class:`ProjMat` is the hashable value type
everything else passes around.

The float layer :class:`CMat2` models PSL2(C) with complex doubles and is
used for the sampling-based checks that cannot be done exactly.
"""

from __future__ import annotations

import math
import random as _random

from .quadring import FULL, MAX, QInt, RingParam, check_coords

# ---------------------------------------------------------------------------
# raw 8-tuple kernel (half-coordinates, no objects)


def qmul_raw(x0, x1, y0, y1, n):
    """Half-coordinate product of two ring elements."""
    return (x0 * y0 - n * x1 * y1) // 2, (x0 * y1 + x1 * y0) // 2


def mul_raw(e, f, n):
    a0, a1, b0, b1, c0, c1, d0, d1 = e
    p0, p1, q0, q1, r0, r1, s0, s1 = f
    return (
        (a0 * p0 - n * a1 * p1 + b0 * r0 - n * b1 * r1) // 2,
        (a0 * p1 + a1 * p0 + b0 * r1 + b1 * r0) // 2,
        (a0 * q0 - n * a1 * q1 + b0 * s0 - n * b1 * s1) // 2,
        (a0 * q1 + a1 * q0 + b0 * s1 + b1 * s0) // 2,
        (c0 * p0 - n * c1 * p1 + d0 * r0 - n * d1 * r1) // 2,
        (c0 * p1 + c1 * p0 + d0 * r1 + d1 * r0) // 2,
        (c0 * q0 - n * c1 * q1 + d0 * s0 - n * d1 * s1) // 2,
        (c0 * q1 + c1 * q0 + d0 * s1 + d1 * s0) // 2,
    )


def inv_raw(e):
    # adjugate; det = 1 makes it the inverse
    a0, a1, b0, b1, c0, c1, d0, d1 = e
    return (d0, d1, -b0, -b1, -c0, -c1, a0, a1)


def transpose_raw(e):
    a0, a1, b0, b1, c0, c1, d0, d1 = e
    return (a0, a1, c0, c1, b0, b1, d0, d1)


def det_raw(e, n):
    """Determinant in half-coordinates (must be (2, 0) for det = 1)."""
    a0, a1, b0, b1, c0, c1, d0, d1 = e
    return (
        (a0 * d0 - n * a1 * d1 - b0 * c0 + n * b1 * c1) // 2,
        (a0 * d1 + a1 * d0 - b0 * c1 - b1 * c0) // 2,
    )


def canon_raw(e):
    """Sign representative with the first nonzero coordinate positive."""
    for x in e:
        if x > 0:
            return e
        if x < 0:
            return tuple(-y for y in e)
    raise ValueError("zero matrix has no projective representative")


def marg4_raw(e, n):
    """4 * Re(a*conj(c) + b*conj(d)), the exact scaled symbol argument."""
    return e[0] * e[4] + n * e[1] * e[5] + e[2] * e[6] + n * e[3] * e[7]


# ---------------------------------------------------------------------------
# exact projective matrices


class ProjMat:
    """Canonical representative of a PSL2 lattice element (det 1, sign-normalized)."""

    __slots__ = ("ring", "e", "_hash")

    def __init__(self, a: QInt, b: QInt, c: QInt, d: QInt):
        ring = a.ring
        for x in (b, c, d):
            if x.ring != ring:
                raise ValueError("matrix entries from mixed rings")
        e = (a.u, a.v, b.u, b.v, c.u, c.v, d.u, d.v)
        if det_raw(e, ring.n) != (2, 0):
            raise ValueError(f"determinant is not 1: {e} over {ring}")
        self.ring = ring
        self.e = canon_raw(e)
        self._hash = None

    @classmethod
    def from_raw(cls, ring: RingParam, e, check: bool = True) -> "ProjMat":
        self = object.__new__(cls)
        if check:
            for u, v in zip(e[0::2], e[1::2]):
                check_coords(u, v, ring)
            if det_raw(e, ring.n) != (2, 0):
                raise ValueError(f"determinant is not 1: {e} over {ring}")
        self.ring = ring
        self.e = canon_raw(e)
        self._hash = None
        return self

    @property
    def a(self) -> QInt:
        return QInt(self.e[0], self.e[1], self.ring)

    @property
    def b(self) -> QInt:
        return QInt(self.e[2], self.e[3], self.ring)

    @property
    def c(self) -> QInt:
        return QInt(self.e[4], self.e[5], self.ring)

    @property
    def d(self) -> QInt:
        return QInt(self.e[6], self.e[7], self.ring)

    def __eq__(self, other):
        return isinstance(other, ProjMat) and self.ring == other.ring and self.e == other.e

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash((self.ring.n, self.ring.kind, self.e))
        return h

    def __repr__(self):
        return f"ProjMat({format_matrix(self)!r})"

    def __mul__(self, other: "ProjMat") -> "ProjMat":
        if self.ring != other.ring:
            raise ValueError("mixed-ring product")
        return ProjMat.from_raw(self.ring, mul_raw(self.e, other.e, self.ring.n), check=False)

    def inverse(self) -> "ProjMat":
        return ProjMat.from_raw(self.ring, inv_raw(self.e), check=False)

    def transpose(self) -> "ProjMat":
        return ProjMat.from_raw(self.ring, transpose_raw(self.e), check=False)

    def is_identity(self) -> bool:
        return self.e == (2, 0, 0, 0, 0, 0, 2, 0)


def pm_mul(g: ProjMat, h: ProjMat) -> ProjMat:
    return g * h


def pm_inverse(g: ProjMat) -> ProjMat:
    return g.inverse()


def pm_transpose(g: ProjMat) -> ProjMat:
    return g.transpose()


def identity(ring: RingParam) -> ProjMat:
    return ProjMat.from_raw(ring, (2, 0, 0, 0, 0, 0, 2, 0), check=False)


def omega(ring: RingParam) -> ProjMat:
    """The order-two rotation [[0, -1], [1, 0]] (canonical representative)."""
    return ProjMat.from_raw(ring, (0, 0, -2, 0, 2, 0, 0, 0), check=False)


# ---------------------------------------------------------------------------
# bounded enumeration

def box_coords(ring: RingParam, B: int):
    """All ring elements with half-coordinates in [-2B, 2B], lexicographic."""
    lo, hi = -2 * B, 2 * B
    out = []
    for u in range(lo, hi + 1):
        if ring.is_full and u % 2:
            continue
        for v in range(lo, hi + 1):
            if (u - v) % 2 == 0:
                out.append((u, v))
    return out


def enumerate_box(ring: RingParam, B: int) -> list[ProjMat]:
    """Every projective class with all eight half-coordinates in [-2B, 2B].

    Box scan with an exact determinant filter: pair products b*c are hashed
    by value, then each (a, d) pair looks up b*c = a*d - 1.  Each class is
    produced exactly once, sorted lexicographically on the canonical
    coordinate tuple, so the order is reproducible across runs.
    """
    if B < 1:
        raise ValueError(f"enumeration bound must be >= 1, got {B}")
    n = ring.n
    coords = box_coords(ring, B)
    by_product: dict = {}
    for b in coords:
        b0, b1 = b
        for c in coords:
            key = qmul_raw(b0, b1, c[0], c[1], n)
            by_product.setdefault(key, []).append((b, c))
    seen = set()
    for a in coords:
        a0, a1 = a
        for d in coords:
            p0, p1 = qmul_raw(a0, a1, d[0], d[1], n)
            for b, c in by_product.get((p0 - 2, p1), ()):
                e = canon_raw((a0, a1, b[0], b[1], c[0], c[1], d[0], d[1]))
                seen.add(e)
    return [ProjMat.from_raw(ring, e, check=False) for e in sorted(seen)]


def random_word(gens: list[ProjMat], length: int, seed=None, rng=None) -> ProjMat:
    """Product of ``length`` uniform picks from the generators and their inverses."""
    if not gens:
        raise ValueError("random_word needs a nonempty generator list")
    ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise ValueError("generators from mixed rings")
    if rng is None:
        rng = _random.Random(seed)
    n = ring.n
    raws = [g.e for g in gens] + [inv_raw(g.e) for g in gens]
    acc = (2, 0, 0, 0, 0, 0, 2, 0)
    for _ in range(length):
        acc = mul_raw(acc, raws[rng.randrange(len(raws))], n)
    return ProjMat.from_raw(ring, acc, check=False)


def standard_generators(ring: RingParam) -> list[ProjMat]:
    """Upper/lower unipotents over 1 and the imaginary generator, plus omega."""
    # imaginary generator: sqrt(-n) in the full ring, (1+sqrt(-n))/2 in the order
    iu, iv = (0, 2) if ring.is_full else (1, 1)
    return [
        ProjMat.from_raw(ring, (2, 0, 2, 0, 0, 0, 2, 0), check=False),
        ProjMat.from_raw(ring, (2, 0, iu, iv, 0, 0, 2, 0), check=False),
        ProjMat.from_raw(ring, (2, 0, 0, 0, 2, 0, 2, 0), check=False),
        ProjMat.from_raw(ring, (2, 0, 0, 0, iu, iv, 2, 0), check=False),
        omega(ring),
    ]


# ---------------------------------------------------------------------------
# float layer


class CMat2:
    """Complex 2x2 matrix with determinant within ``tol`` of 1."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d, tol: float | None = 1e-9):
        self.a = complex(a)
        self.b = complex(b)
        self.c = complex(c)
        self.d = complex(d)
        if tol is not None:
            dd = self.det()
            if abs(dd - 1.0) > tol:
                raise ValueError(f"determinant {dd} is not within {tol} of 1")

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __repr__(self):
        return f"CMat2({self.a}, {self.b}, {self.c}, {self.d})"


def cm_mul(g: CMat2, h: CMat2) -> CMat2:
    return CMat2(
        g.a * h.a + g.b * h.c,
        g.a * h.b + g.b * h.d,
        g.c * h.a + g.d * h.c,
        g.c * h.b + g.d * h.d,
        tol=None,
    )


def embed_to_complex(g: ProjMat) -> CMat2:
    """Exact-layer matrix as complex doubles (rounding only)."""
    s = math.sqrt(g.ring.n)
    e = g.e
    return CMat2(
        complex(e[0] / 2.0, e[1] * s / 2.0),
        complex(e[2] / 2.0, e[3] * s / 2.0),
        complex(e[4] / 2.0, e[5] * s / 2.0),
        complex(e[6] / 2.0, e[7] * s / 2.0),
        tol=None,
    )


def haar_psu2(rng: _random.Random) -> CMat2:
    """Haar-random PSU(2) representative via a normalized Gaussian quaternion."""
    while True:
        g = [rng.gauss(0.0, 1.0) for _ in range(4)]
        nrm = math.sqrt(sum(x * x for x in g))
        if nrm > 1e-6:
            break
    alpha = complex(g[0], g[1]) / nrm
    beta = complex(g[2], g[3]) / nrm
    return CMat2(alpha, beta, -beta.conjugate(), alpha.conjugate(), tol=None)


def random_psl2c(seed=None, rng=None) -> CMat2:
    """Random PSL2(C) sample A*u: upper-triangular ANK part times Haar unitary.

    A = [[1/s, t/s], [0, s]] with s log-normal and t complex Gaussian, so the
    (s, t) marginals match the coordinates used by the triangular
    decomposition; u is Haar in PSU(2).
    """
    if rng is None:
        rng = _random.Random(seed)
    s = math.exp(rng.gauss(0.0, 0.5))
    t = complex(rng.gauss(0.0, 1.0), rng.gauss(0.0, 1.0))
    u = haar_psu2(rng)
    a_mat = CMat2(1.0 / s, t / s, 0.0, s, tol=None)
    return cm_mul(a_mat, u)


# ---------------------------------------------------------------------------
# matrix text format:
#   n=<n>;kind=<full|max>;a=<u>/<v>;b=<u>/<v>;c=<u>/<v>;d=<u>/<v>


def format_matrix(g: ProjMat) -> str:
    e = g.e
    return (
        f"n={g.ring.n};kind={g.ring.kind};"
        f"a={e[0]}/{e[1]};b={e[2]}/{e[3]};c={e[4]}/{e[5]};d={e[6]}/{e[7]}"
    )


def parse_matrix(text: str) -> ProjMat:
    """Parse the matrix text format, rejecting parity violations and det != 1."""
    fields = {}
    for part in text.strip().split(";"):
        if not part:
            continue
        key, _, value = part.partition("=")
        fields[key.strip()] = value.strip()
    try:
        n = int(fields["n"])
        kind = fields["kind"]
        coords = []
        for name in ("a", "b", "c", "d"):
            u_str, _, v_str = fields[name].partition("/")
            coords.extend((int(u_str), int(v_str)))
    except (KeyError, ValueError) as exc:
        raise ValueError(f"malformed matrix text {text!r}: {exc}") from exc
    if kind not in (FULL, MAX):
        raise ValueError(f"malformed matrix text {text!r}: bad kind {kind!r}")
    ring = RingParam(n, kind)
    return ProjMat.from_raw(ring, tuple(coords), check=True)


def format_cmatrix(g: CMat2) -> list[float]:
    out = []
    for z in g.entries():
        out.extend((z.real, z.imag))
    return out


def parse_cmatrix(values) -> CMat2:
    if len(values) != 8:
        raise ValueError("cmatrix needs 8 floats (re/im per entry)")
    zs = [complex(values[2 * i], values[2 * i + 1]) for i in range(4)]
    return CMat2(*zs, tol=None)
