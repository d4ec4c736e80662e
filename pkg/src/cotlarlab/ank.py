"""Triangular-times-unitary decomposition of PSL2(C) matrices.

Any g with unit determinant factors as

    g = [[1/s, t/s], [0, s]] * u,    u in PSU(2),

with s = |second row| and t = <first row, second row>.  The bracket
conjugates its second argument, so Re(t) is literally the argument of the
sign symbol; the proof machinery downstream leans on that.
"""

from __future__ import annotations

import math
import random as _random
from dataclasses import dataclass

from .psl2 import CMat2, cm_mul, embed_to_complex, enumerate_box, format_cmatrix, format_matrix, random_psl2c
from .quadring import RingParam
from .report import CheckReport, Stopwatch


@dataclass
class AnkCoords:
    s: float
    t: complex
    u: CMat2


def row_norms(g: CMat2) -> tuple[float, float]:
    r1 = math.sqrt(abs(g.a) ** 2 + abs(g.b) ** 2)
    r2 = math.sqrt(abs(g.c) ** 2 + abs(g.d) ** 2)
    return r1, r2


def row_inner(g: CMat2) -> complex:
    """<r1, r2> = a*conj(c) + b*conj(d)."""
    return g.a * g.c.conjugate() + g.b * g.d.conjugate()


def _normalize_sign(m: CMat2) -> CMat2:
    # projective sign: first entry of nonnegligible modulus gets Re > 0,
    # with Im >= 0 breaking the Re = 0 tie
    for z in m.entries():
        if abs(z) <= 1e-12:
            continue
        if abs(z.real) > 1e-12:
            flip = z.real < 0
        else:
            flip = z.imag < 0
        if flip:
            return CMat2(-m.a, -m.b, -m.c, -m.d, tol=None)
        return m
    raise ValueError("cannot sign-normalize a near-zero matrix")


def ank_decompose(g: CMat2, tol: float = 1e-9) -> AnkCoords:
    """Split g into the (s, t) triangular part and a PSU(2) representative."""
    s2 = abs(g.c) ** 2 + abs(g.d) ** 2
    if s2 < 1e-28:
        raise ValueError("second row is degenerate (norm below 1e-14)")
    s = math.sqrt(s2)
    t = row_inner(g)
    # u has normalized r2(g) as its second row and the orthogonal completion on top
    gamma = g.c / s
    delta = g.d / s
    u = CMat2(delta.conjugate(), -gamma.conjugate(), gamma, delta, tol=None)
    return AnkCoords(s=s, t=t, u=_normalize_sign(u))


def ank_reconstruct(coords: AnkCoords) -> CMat2:
    tri = CMat2(1.0 / coords.s, coords.t / coords.s, 0.0, coords.s, tol=None)
    return cm_mul(tri, coords.u)


def reconstruction_error(g: CMat2, coords: AnkCoords) -> float:
    """Max entrywise deviation of the reconstruction, up to global sign."""
    r = ank_reconstruct(coords)
    plus = max(abs(x - y) for x, y in zip(r.entries(), g.entries()))
    minus = max(abs(x + y) for x, y in zip(r.entries(), g.entries()))
    return min(plus, minus)


def verify_ank_roundtrip(samples: int = 10**5, seed: int = 42, tol: float = 1e-9) -> CheckReport:
    """Decompose-then-reconstruct on random samples; error must stay below tol."""
    watch = Stopwatch()
    rng = _random.Random(seed)
    report = CheckReport(
        check="ank-roundtrip",
        config={"samples": samples, "seed": seed, "tol": tol},
    )
    max_err = 0.0
    max_mat = None
    for _ in range(samples):
        g = random_psl2c(rng=rng)
        err = reconstruction_error(g, ank_decompose(g, tol))
        report.total_checked += 1
        if err > max_err:
            max_err = err
            max_mat = g
        if err > tol:
            report.add_violation([{"cmatrix": format_cmatrix(g)}], {"error": err})
    report.witness = {
        "kind": "extremal",
        "max_error": max_err,
        "cmatrix": format_cmatrix(max_mat) if max_mat else None,
    }
    report.elapsed_ms = watch.ms()
    return report


def verify_kernel_t_imaginary(ring: RingParam, B: int = 2, tol: float = 1e-9) -> CheckReport:
    """t = <r1, r2> is purely imaginary exactly on the kernel elements."""
    from .symbol import in_kernel

    watch = Stopwatch()
    report = CheckReport(
        check="ank-kernel-t",
        config={"n": ring.n, "kind": ring.kind, "bound": B, "tol": tol},
    )
    for g in enumerate_box(ring, B):
        if not in_kernel(g):
            continue
        coords = ank_decompose(embed_to_complex(g), tol)
        report.total_checked += 1
        if abs(coords.t.real) >= tol:
            report.add_violation([format_matrix(g)], {"re_t": coords.t.real})
    report.elapsed_ms = watch.ms()
    return report
