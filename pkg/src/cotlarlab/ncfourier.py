"""Finite-support group-algebra computations and even-power trace norms.

An element of the group algebra is a finite map from canonical lattice
elements to coefficients.  The trace picks the identity coefficient, so
tau(|x|^(2k)) = tau((x* x)^k) is a finite, exactly evaluable sum and the
only L_p data a finite support can honestly provide.  Coefficients are
complex doubles (convolution accumulates with compensated summation); a
rational-complex coefficient type is available when a small test wants the
algebra exact.
"""

from __future__ import annotations

import math
import random as _random
from dataclasses import dataclass
from fractions import Fraction

from .psl2 import ProjMat, enumerate_box, format_matrix, identity, parse_matrix, random_word, standard_generators
from .quadring import RingParam
from .symbol import m_exact

# norm bound exponent reported alongside the multiplier experiment
THEORY_BETA = 1.0 + math.log2(1.0 + math.sqrt(2.0))


def theory_bound(p: float) -> float:
    """(p^2/(p-1))^beta, the shape of the multiplier norm bound (up to a constant)."""
    if p <= 1:
        raise ValueError("p must exceed 1")
    return (p * p / (p - 1.0)) ** THEORY_BETA


class BudgetError(RuntimeError):
    def __init__(self, size: int, budget: int):
        super().__init__(f"support size {size} exceeds budget {budget}")
        self.size = size
        self.budget = budget


class RationalComplex:
    """Exact complex number with Fraction parts, for the exact coefficient mode."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        other = _as_rc(other)
        return RationalComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __mul__(self, other):
        other = _as_rc(other)
        return RationalComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return RationalComplex(-self.re, -self.im)

    def conjugate(self):
        return RationalComplex(self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, RationalComplex):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re or self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"RationalComplex({self.re}, {self.im})"


def _as_rc(x):
    if isinstance(x, RationalComplex):
        return x
    if isinstance(x, (int, Fraction)):
        return RationalComplex(x, 0)
    raise TypeError(f"cannot mix {type(x).__name__} into exact coefficients")


class AlgElem:
    """Finitely supported group-algebra element: {group element: coefficient}."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: RingParam, coeffs: dict | None = None):
        self.ring = ring
        cleaned = {}
        for g, c in (coeffs or {}).items():
            if g.ring != ring:
                raise ValueError("support element from a different ring")
            if c:
                cleaned[g] = c
        self.coeffs = cleaned

    @classmethod
    def delta(cls, g: ProjMat, coeff=1.0) -> "AlgElem":
        return cls(g.ring, {g: coeff})

    def support_size(self) -> int:
        return len(self.coeffs)

    def scale(self, c) -> "AlgElem":
        return AlgElem(self.ring, {g: c * v for g, v in self.coeffs.items()})

    def __add__(self, other: "AlgElem") -> "AlgElem":
        if self.ring != other.ring:
            raise ValueError("mixed-ring sum")
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out.get(g, 0) + c
        return AlgElem(self.ring, out)

    def __eq__(self, other):
        return (
            isinstance(other, AlgElem)
            and self.ring == other.ring
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return f"AlgElem({len(self.coeffs)} terms over {self.ring})"


def _is_float_mode(x: AlgElem, y: AlgElem) -> bool:
    for elem in (x, y):
        for c in elem.coeffs.values():
            return isinstance(c, (complex, float, int)) and not isinstance(c, bool)
    return True


def convolve(x: AlgElem, y: AlgElem, budget: int | None = None) -> AlgElem:
    """(xy)_g = sum_h x_h y_{h^-1 g}, accumulated per support point.

    Float coefficients use Kahan-compensated accumulation of real and
    imaginary parts; exact coefficients sum exactly.
    """
    if x.ring != y.ring:
        raise ValueError("mixed-ring convolution")
    if _is_float_mode(x, y):
        sums: dict = {}
        for g, cg in x.coeffs.items():
            cg = complex(cg)
            for h, ch in y.coeffs.items():
                k = g * h
                p = cg * complex(ch)
                acc = sums.get(k)
                if acc is None:
                    sums[k] = [p.real, 0.0, p.imag, 0.0]
                else:
                    # Kahan step on both components
                    yy = p.real - acc[1]
                    tt = acc[0] + yy
                    acc[1] = (tt - acc[0]) - yy
                    acc[0] = tt
                    yy = p.imag - acc[3]
                    tt = acc[2] + yy
                    acc[3] = (tt - acc[2]) - yy
                    acc[2] = tt
        out = {k: complex(v[0], v[2]) for k, v in sums.items() if v[0] or v[2]}
    else:
        exact: dict = {}
        for g, cg in x.coeffs.items():
            for h, ch in y.coeffs.items():
                k = g * h
                prev = exact.get(k)
                exact[k] = cg * ch if prev is None else prev + cg * ch
        out = {k: v for k, v in exact.items() if v}
    if budget is not None and len(out) > budget:
        raise BudgetError(len(out), budget)
    return AlgElem(x.ring, out)


def adjoint(x: AlgElem) -> AlgElem:
    """(x*)_g = conj(x_{g^-1}); the involution matching lambda_g* = lambda_{g^-1}."""
    return AlgElem(x.ring, {g.inverse(): _conj(c) for g, c in x.coeffs.items()})


def _conj(c):
    if isinstance(c, (int, float)):
        return c
    return c.conjugate()


def trace(x: AlgElem):
    """The identity coefficient."""
    return x.coeffs.get(identity(x.ring), 0)


def apply_multiplier(x: AlgElem) -> AlgElem:
    """Coefficientwise multiplication by the symbol; the kernel part drops out."""
    out = {}
    for g, c in x.coeffs.items():
        m = m_exact(g)
        if m == 1:
            out[g] = c
        elif m == -1:
            out[g] = -c
    return AlgElem(x.ring, out)


@dataclass
class NormProfile:
    k: int
    value: float
    exact_moment: float


def _power(y: AlgElem, a: int, budget: int) -> AlgElem:
    acc = None
    for _ in range(a):
        acc = y if acc is None else convolve(acc, y, budget=budget)
    return acc if acc is not None else AlgElem.delta(identity(y.ring))


def _moment(y: AlgElem, k: int, budget: int) -> complex:
    """tau(y^k) without materializing the full k-th power.

    Splits k = a + b with a = k//2; only y^a is materialized and the trace
    pairs it against itself (even k) or bridges through one extra y factor
    (odd k).  The bridging loop works on raw coordinate tuples to keep the
    quadratic pass cheap.
    """
    if k == 1:
        return complex(trace(y))
    from .psl2 import canon_raw, inv_raw, mul_raw

    n = y.ring.n
    z = _power(y, k // 2, budget)
    zc = {g.e: complex(c) for g, c in z.coeffs.items()}
    sr = cr = si = ci = 0.0
    if k % 2 == 0:
        for e, c in zc.items():
            c2 = zc.get(canon_raw(inv_raw(e)))
            if c2 is None:
                continue
            p = c * c2
            sr, cr = _kahan(sr, cr, p.real)
            si, ci = _kahan(si, ci, p.imag)
    else:
        yc = {g.e: complex(c) for g, c in y.coeffs.items()}
        for eg, cg in zc.items():
            for eh, ch in yc.items():
                c2 = zc.get(canon_raw(inv_raw(mul_raw(eg, eh, n))))
                if c2 is None:
                    continue
                p = cg * ch * c2
                sr, cr = _kahan(sr, cr, p.real)
                si, ci = _kahan(si, ci, p.imag)
    return complex(sr, si)


def _kahan(s, c, x):
    y = x - c
    t = s + y
    return t, (t - s) - y


def norm2k(x: AlgElem, k: int, budget: int = 10**5) -> NormProfile:
    """The L_{2k} norm datum: value = tau((x* x)^k)^(1/2k).

    The moment of a positive element is real and nonnegative; anything else
    signals a bug, so it is asserted to 1e-12 and clamped.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    y = convolve(adjoint(x), x, budget=budget)
    mom = _moment(y, k, budget)
    scale = max(1.0, abs(mom))
    if abs(mom.imag) > 1e-12 * scale or mom.real < -1e-12 * scale:
        raise ArithmeticError(f"moment of a positive element came out as {mom}")
    moment = max(mom.real, 0.0)
    return NormProfile(k=k, value=moment ** (1.0 / (2 * k)), exact_moment=moment)


def random_element(
    ring: RingParam,
    support_size: int,
    rng: _random.Random,
    pool: list[ProjMat],
    gens: list[ProjMat],
    word_fraction: float = 0.2,
) -> AlgElem:
    """Random support drawn from the enumeration pool plus a few random words."""
    support: set = set()
    n_words = int(support_size * word_fraction)
    pool_target = min(support_size - n_words, len(pool))
    while len(support) < pool_target:
        support.add(pool[rng.randrange(len(pool))])
    while len(support) < support_size:
        support.add(random_word(gens, rng.randint(1, 6), rng=rng))
    coeffs = {
        g: complex(rng.gauss(0.0, 1.0), rng.gauss(0.0, 1.0)) for g in sorted(support, key=lambda m: m.e)
    }
    return AlgElem(ring, coeffs)


def norm_ratio_experiment(
    ring: RingParam,
    k_list=(1, 2, 3),
    trials: int = 100,
    support_size: int = 20,
    seed: int = 42,
    bound: int = 2,
    budget: int = 10**5,
) -> list[dict]:
    """Empirical multiplier norm ratios ||T_m x||_{2k} / ||x||_{2k}.

    The k = 1 ratio can never exceed 1 (coefficientwise contraction); higher
    ratios are reported against the theoretical bound shape, whose hidden
    constant keeps this observational.
    """
    rng = _random.Random(seed)
    pool = enumerate_box(ring, bound)
    gens = standard_generators(ring)
    rows = []
    for trial in range(trials):
        x = random_element(ring, support_size, rng, pool, gens)
        tx = apply_multiplier(x)
        for k in k_list:
            nx = norm2k(x, k, budget=budget)
            ntx = norm2k(tx, k, budget=budget) if tx.coeffs else NormProfile(k, 0.0, 0.0)
            ratio = ntx.value / nx.value if nx.value > 0 else 0.0
            p = 2 * k
            rows.append(
                {
                    "trial": trial,
                    "k": k,
                    "p": p,
                    "ratio": ratio,
                    "norm_x": nx.value,
                    "norm_tx": ntx.value,
                    "theory_bound": theory_bound(p),
                }
            )
    return rows


# ---------------------------------------------------------------------------
# AlgElem text format: one line per term `<coeff_re>,<coeff_im> : <matrix text>`


def format_elem(x: AlgElem) -> str:
    lines = []
    for g in sorted(x.coeffs, key=lambda m: m.e):
        c = complex(x.coeffs[g])
        lines.append(f"{c.real!r},{c.imag!r} : {format_matrix(g)}")
    return "\n".join(lines)


def parse_elem(text: str) -> AlgElem:
    coeffs = {}
    ring = None
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        coeff_part, _, mat_part = line.partition(":")
        re_str, _, im_str = coeff_part.partition(",")
        try:
            c = complex(float(re_str), float(im_str))
        except ValueError as exc:
            raise ValueError(f"malformed coefficient in {line!r}") from exc
        g = parse_matrix(mat_part)
        if ring is None:
            ring = g.ring
        elif g.ring != ring:
            raise ValueError("mixed rings in element text")
        coeffs[g] = coeffs.get(g, 0) + c
    if ring is None:
        raise ValueError("empty element text")
    return AlgElem(ring, coeffs)
