"""Verification drivers: Cotlar identity, invariance laws, lemma sweeps,
the main-proof sign decomposition, and the Bianchi counterexample search.

Exact statements are swept over the full enumeration box (deterministic
order); two-argument sweeps subsample the pair universe with a seeded RNG
once the full product exceeds the pair budget, and mix in seeded random
words so elements far outside the box get exercised too.  Float statements
are sampled on PSL2(C) with a dead-zone guard of 10*tol around the sign
discontinuity.
"""

from __future__ import annotations

import math
import random as _random
from array import array
from concurrent.futures import ProcessPoolExecutor

from . import ank
from .psl2 import (
    CMat2,
    ProjMat,
    cm_mul,
    embed_to_complex,
    enumerate_box,
    format_cmatrix,
    format_matrix,
    haar_psu2,
    inv_raw,
    marg4_raw,
    mul_raw,
    omega,
    random_psl2c,
    standard_generators,
)
from .quadring import RingParam, im_coeff4, re4
from .report import CheckReport, Stopwatch
from .symbol import KernelClass, _class_of_raw, chi, kernel_class, m_arg_float, m_exact

DEAD_ZONE_FACTOR = 10.0


def _sign(x) -> int:
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------------------
# Cotlar residual and the lattice pair sweep


def cotlar_residual(g: ProjMat, h: ProjMat) -> int:
    """(m(g^-1) - m(h)) * (m(gh) - m(g)), computed exactly."""
    if g.ring != h.ring:
        raise ValueError("mixed-ring pair")
    return (m_exact(g.inverse()) - m_exact(h)) * (m_exact(g * h) - m_exact(g))


def _element_tables(elems, n):
    """Raw tuples plus per-element symbol data for the tight pair loop."""
    raws = [g.e for g in elems]
    m_list = []
    minv_list = []
    nonkernel = []
    for i, e in enumerate(raws):
        t = marg4_raw(e, n)
        m_list.append(_sign(t))
        minv_list.append(_sign(marg4_raw(inv_raw(e), n)))
        if _class_is_kernel_raw(e, n):
            continue
        nonkernel.append(i)
    return raws, m_list, minv_list, nonkernel


def _class_is_kernel_raw(e, n) -> bool:
    if _class_of_raw(e, n) is not KernelClass.NOT_KERNEL:
        return True
    return _class_of_raw(tuple(-x for x in e), n) is not KernelClass.NOT_KERNEL


def _residual_chunk(payload):
    """Residual scan over one slice of the pair workload (worker-safe)."""
    n, raws, m_list, minv_list, gi, hi = payload
    checked = 0
    bad = []
    for i, j in zip(gi, hi):
        eg = raws[i]
        eh = raws[j]
        p = mul_raw(eg, eh, n)
        m_gh = _sign(marg4_raw(p, n))
        r = (minv_list[i] - m_list[j]) * (m_gh - m_list[i])
        checked += 1
        if r != 0:
            bad.append((i, j, r, m_gh))
    return checked, bad


def verify_cotlar(
    ring: RingParam,
    B: int = 2,
    pair_budget: int = 10**6,
    seed: int = 42,
    threads: int = 1,
    word_pairs: int | None = None,
    max_word_len: int = 8,
) -> CheckReport:
    """Residual = 0 for every checked pair (g, h) with g outside the kernel.

    The pair universe is the box product, subsampled deterministically to
    ``pair_budget`` g-nonkernel pairs, plus pairs built from seeded random
    words of length up to ``max_word_len``.  When ``word_pairs`` is None the
    word segment tops the total up to ``pair_budget`` (at least 10^4), so the
    sweep always checks the full budget even for small boxes.
    """
    if not ring.is_full:
        raise ValueError("the Cotlar sweep is a full-ring (Gamma_n) statement")
    watch = Stopwatch()
    elems = enumerate_box(ring, B)
    n = ring.n
    raws, m_list, minv_list, nonkernel = _element_tables(elems, n)
    rng = _random.Random(seed)

    gi = array("q")
    hi = array("q")
    if len(nonkernel) * len(raws) <= pair_budget:
        for i in nonkernel:
            for j in range(len(raws)):
                gi.append(i)
                hi.append(j)
    else:
        nk = len(nonkernel)
        ne = len(raws)
        for _ in range(pair_budget):
            gi.append(nonkernel[rng.randrange(nk)])
            hi.append(rng.randrange(ne))
    if word_pairs is None:
        word_pairs = max(10**4, pair_budget - len(gi))

    report = CheckReport(
        check="cotlar",
        config={
            "n": n,
            "kind": ring.kind,
            "bound": B,
            "pair_budget": pair_budget,
            "seed": seed,
            "word_pairs": word_pairs,
            "max_word_len": max_word_len,
        },
    )

    chunks = _split_ranges(len(gi), threads)
    payloads = [
        (n, raws, m_list, minv_list, gi[lo:hi_], hi[lo:hi_]) for lo, hi_ in chunks
    ]
    if threads <= 1 or len(payloads) <= 1:
        results = [_residual_chunk(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_residual_chunk, payloads))
    for checked, bad in results:
        report.total_checked += checked
        for i, j, r, m_gh in bad:
            report.add_violation(
                [format_matrix(elems[i]), format_matrix(elems[j])],
                {
                    "residual": r,
                    "m_g": m_list[i],
                    "m_ginv": minv_list[i],
                    "m_h": m_list[j],
                    "m_gh": m_gh,
                },
            )

    # random-word pairs reach far outside the enumeration box
    gens = standard_generators(ring)
    gen_raws = [g.e for g in gens] + [inv_raw(g.e) for g in gens]
    ngens = len(gen_raws)
    ident = (2, 0, 0, 0, 0, 0, 2, 0)

    def draw_word():
        acc = ident
        for _ in range(rng.randint(1, max_word_len)):
            acc = mul_raw(acc, gen_raws[rng.randrange(ngens)], n)
        return acc

    for _ in range(word_pairs):
        eg = None
        for _attempt in range(64):
            cand = draw_word()
            if not _class_is_kernel_raw(cand, n):
                eg = cand
                break
        if eg is None:
            continue
        eh = draw_word()
        m_g = _sign(marg4_raw(eg, n))
        m_ginv = _sign(marg4_raw(inv_raw(eg), n))
        m_h = _sign(marg4_raw(eh, n))
        m_gh = _sign(marg4_raw(mul_raw(eg, eh, n), n))
        r = (m_ginv - m_h) * (m_gh - m_g)
        report.total_checked += 1
        if r != 0:
            g = ProjMat.from_raw(ring, eg, check=False)
            h = ProjMat.from_raw(ring, eh, check=False)
            report.add_violation(
                [format_matrix(g), format_matrix(h)],
                {"residual": r, "m_g": m_g, "m_ginv": m_ginv, "m_h": m_h, "m_gh": m_gh},
            )
    report.elapsed_ms = watch.ms()
    return report


def _split_ranges(total: int, parts: int):
    parts = max(1, parts)
    step = (total + parts - 1) // parts if total else 1
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)] or [(0, 0)]


# ---------------------------------------------------------------------------
# invariance of the symbol


def kernel_elements(ring: RingParam, B: int) -> list[ProjMat]:
    return [g for g in enumerate_box(ring, B) if kernel_class(g) in (KernelClass.KPLUS, KernelClass.KMINUS)]


def verify_invariance(ring: RingParam, B: int = 2) -> CheckReport:
    """Right kernel-invariance and left character-twisted invariance.

    Full product sweep: m(gh) = m(g) and m(hg) = chi(h) m(g) for every
    enumerated g and every kernel element h.
    """
    if not ring.is_full:
        raise ValueError("the invariance sweep is a full-ring (Gamma_n) statement")
    watch = Stopwatch()
    elems = enumerate_box(ring, B)
    kern = kernel_elements(ring, B)
    report = CheckReport(
        check="invariance",
        config={"n": ring.n, "kind": ring.kind, "bound": B, "kernel_size": len(kern)},
    )
    chis = [chi(h) for h in kern]
    for g in elems:
        mg = m_exact(g)
        for h, ch in zip(kern, chis):
            report.total_checked += 2
            m_right = m_exact(g * h)
            if m_right != mg:
                report.add_violation(
                    [format_matrix(g), format_matrix(h)],
                    {"law": "right", "m_g": mg, "m_gh": m_right},
                )
            m_left = m_exact(h * g)
            if m_left != ch * mg:
                report.add_violation(
                    [format_matrix(g), format_matrix(h)],
                    {"law": "left", "m_g": mg, "m_hg": m_left, "chi_h": ch},
                )
    report.elapsed_ms = watch.ms()
    return report


def verify_chi_homomorphism(ring: RingParam, B: int = 2) -> CheckReport:
    """Kernel closure under products and multiplicativity of the character."""
    watch = Stopwatch()
    kern = kernel_elements(ring, B)
    report = CheckReport(
        check="chi-homomorphism",
        config={"n": ring.n, "kind": ring.kind, "bound": B, "kernel_size": len(kern)},
    )
    for h1 in kern:
        c1 = chi(h1)
        for h2 in kern:
            report.total_checked += 1
            prod = h1 * h2
            cls = kernel_class(prod)
            if cls not in (KernelClass.KPLUS, KernelClass.KMINUS):
                report.add_violation(
                    [format_matrix(h1), format_matrix(h2)],
                    {"reason": "kernel not closed under product", "class": cls.value},
                )
                continue
            if chi(prod) != c1 * chi(h2):
                report.add_violation(
                    [format_matrix(h1), format_matrix(h2)],
                    {"reason": "character not multiplicative",
                     "chi_h1": c1, "chi_h2": chi(h2), "chi_prod": chi(prod)},
                )
    report.elapsed_ms = watch.ms()
    return report


def verify_omega_relations(ring: RingParam, B: int = 2) -> CheckReport:
    """m(omega g) = -m(g) for all enumerated g, and omega K+ = K+ omega = K-."""
    watch = Stopwatch()
    elems = enumerate_box(ring, B)
    w = omega(ring)
    report = CheckReport(
        check="omega-relations",
        config={"n": ring.n, "kind": ring.kind, "bound": B},
    )
    for g in elems:
        report.total_checked += 1
        if m_exact(w * g) != -m_exact(g):
            report.add_violation(
                [format_matrix(g)],
                {"m_g": m_exact(g), "m_wg": m_exact(w * g)},
            )
    kplus = {g for g in elems if kernel_class(g) is KernelClass.KPLUS}
    kminus = {g for g in elems if kernel_class(g) is KernelClass.KMINUS}
    left = {w * g for g in kplus}
    right = {g * w for g in kplus}
    report.total_checked += 2
    if left != kminus:
        report.add_violation([], {"reason": "omega*K+ != K-", "sizes": [len(left), len(kminus)]})
    if right != kminus:
        report.add_violation([], {"reason": "K+*omega != K-", "sizes": [len(right), len(kminus)]})
    report.elapsed_ms = watch.ms()
    return report


def sample_g0(rng: _random.Random) -> CMat2:
    """Random element of the invariance group [[x, iy], [iz, w]], xw + yz = 1.

    det = xw + yz here, so the group condition is exactly det = 1 and the
    free parameters are (x, y, z) with w = (1 - yz)/x; x is kept away from 0.
    """
    while True:
        x = rng.gauss(0.0, 1.0)
        if abs(x) >= 0.05:
            break
    y = rng.gauss(0.0, 1.0)
    z = rng.gauss(0.0, 1.0)
    w = (1.0 - y * z) / x
    return CMat2(x, complex(0.0, y), complex(0.0, z), w, tol=None)


def _float_invariance_sweep(check, make_left, samples, seed, tol, side):
    watch = Stopwatch()
    rng = _random.Random(seed)
    report = CheckReport(
        check=check,
        config={"samples": samples, "seed": seed, "tol": tol},
    )
    guard = DEAD_ZONE_FACTOR * tol
    skipped = 0
    for _ in range(samples):
        other = make_left(rng)
        g = random_psl2c(rng=rng)
        prod = cm_mul(other, g) if side == "left" else cm_mul(g, other)
        arg_g = m_arg_float(g)
        arg_p = m_arg_float(prod)
        report.total_checked += 1
        if abs(arg_g) <= guard or abs(arg_p) <= guard:
            skipped += 1
            continue
        if _sign(arg_g) != _sign(arg_p):
            report.add_violation(
                [{"cmatrix": format_cmatrix(other)}, {"cmatrix": format_cmatrix(g)}],
                {"m_g": _sign(arg_g), "m_prod": _sign(arg_p),
                 "arg_g": arg_g, "arg_prod": arg_p},
            )
    report.witness = {"skipped_dead_zone": skipped}
    report.elapsed_ms = watch.ms()
    return report


def verify_G0_invariance(samples: int = 10**5, seed: int = 42, tol: float = 1e-9) -> CheckReport:
    """m(g0 g) = m(g) for sampled g0 in the left-invariance group."""
    return _float_invariance_sweep("g0-invariance", sample_g0, samples, seed, tol, "left")


def verify_psu2_invariance(samples: int = 10**5, seed: int = 42, tol: float = 1e-9) -> CheckReport:
    """m(g u) = m(g) for Haar-sampled u in PSU(2)."""
    return _float_invariance_sweep("psu2-invariance", haar_psu2, samples, seed, tol, "right")


# ---------------------------------------------------------------------------
# lemma checks: column scalar products, kernel shapes, quadratic identity,
# transpose relation


def check_lemma21(g: CMat2 | ProjMat, tol: float = 1e-9) -> dict:
    """Column scalar product bound: Re(a conj(c)) * Re(b conj(d)) >= -1/4.

    For exact lattice elements the scaled product re4*re4 is returned and the
    bound sharpens to 0 (full ring) or -4 (maximal order, attained on the L
    families).
    """
    if isinstance(g, ProjMat):
        prod = re4(g.a, g.c) * re4(g.b, g.d)
        bound = 0 if g.ring.is_full else -4
        return {"scaled_product": prod, "bound": bound, "ok": prod >= bound}
    p = (g.a * g.c.conjugate()).real * (g.b * g.d.conjugate()).real
    return {"product": p, "bound": -0.25, "ok": p >= -0.25 - tol}


def verify_lemma21_float(samples: int = 10**5, seed: int = 42, tol: float = 1e-9) -> CheckReport:
    watch = Stopwatch()
    rng = _random.Random(seed)
    report = CheckReport(
        check="lemma21-float",
        config={"samples": samples, "seed": seed, "tol": tol},
    )
    min_val = math.inf
    min_mat = None
    for _ in range(samples):
        g = random_psl2c(rng=rng)
        entry = check_lemma21(g, tol)
        report.total_checked += 1
        if entry["product"] < min_val:
            min_val = entry["product"]
            min_mat = g
        if not entry["ok"]:
            report.add_violation(
                [{"cmatrix": format_cmatrix(g)}], {"product": entry["product"]}
            )
    report.witness = {
        "kind": "extremal",
        "min_product": min_val,
        "cmatrix": format_cmatrix(min_mat) if min_mat else None,
    }
    report.elapsed_ms = watch.ms()
    return report


def verify_lemma21_exact(ring: RingParam, B: int = 2) -> CheckReport:
    watch = Stopwatch()
    report = CheckReport(
        check="lemma21-exact",
        config={"n": ring.n, "kind": ring.kind, "bound": B},
    )
    min_val = None
    for g in enumerate_box(ring, B):
        entry = check_lemma21(g)
        report.total_checked += 1
        if min_val is None or entry["scaled_product"] < min_val:
            min_val = entry["scaled_product"]
        if not entry["ok"]:
            report.add_violation(
                [format_matrix(g)], {"scaled_product": entry["scaled_product"]}
            )
    report.witness = {"kind": "extremal", "min_scaled_product": min_val}
    report.elapsed_ms = watch.ms()
    return report


def _lemma32_lhs_float(g: CMat2) -> float:
    im = (g.b * g.c.conjugate() - g.a * g.d.conjugate()).imag
    return im * im - 4.0 * (g.a * g.c.conjugate()).real * (g.b * g.d.conjugate()).real


def check_lemma32(g: CMat2 | ProjMat, tol: float = 1e-9) -> dict:
    """Quadratic inequality Im(b conj(c) - a conj(d))^2 - 4 Re(a conj(c)) Re(b conj(d)) <= 1.

    Exact full-ring variant: 16 * LHS must equal -64 X (1 + X) with
    X = n*a2*d2 + b1*c1 in whole coordinates, and be <= 0.
    """
    if isinstance(g, ProjMat):
        if not g.ring.is_full:
            raise ValueError("exact quadratic-identity variant needs the full ring")
        n = g.ring.n
        lhs16 = n * (im_coeff4(g.b, g.c) - im_coeff4(g.a, g.d)) ** 2 - 4 * re4(g.a, g.c) * re4(
            g.b, g.d
        )
        x4 = g.b.u * g.c.u + n * g.a.v * g.d.v  # 4X; all coords even so X is integral
        x = x4 // 4
        rhs16 = -64 * x * (1 + x)
        return {
            "lhs16": lhs16,
            "rhs16": rhs16,
            "x": x,
            "ok": lhs16 == rhs16 and lhs16 <= 0,
        }
    lhs = _lemma32_lhs_float(g)
    return {"lhs": lhs, "ok": lhs <= 1.0 + tol}


def verify_lemma32_float(samples: int = 10**5, seed: int = 42, tol: float = 1e-9) -> CheckReport:
    watch = Stopwatch()
    rng = _random.Random(seed)
    report = CheckReport(
        check="lemma32-float",
        config={"samples": samples, "seed": seed, "tol": tol},
    )
    max_val = -math.inf
    max_mat = None
    for _ in range(samples):
        g = random_psl2c(rng=rng)
        entry = check_lemma32(g, tol)
        report.total_checked += 1
        if entry["lhs"] > max_val:
            max_val = entry["lhs"]
            max_mat = g
        if not entry["ok"]:
            report.add_violation([{"cmatrix": format_cmatrix(g)}], {"lhs": entry["lhs"]})
    report.witness = {
        "kind": "extremal",
        "max_lhs": max_val,
        "cmatrix": format_cmatrix(max_mat) if max_mat else None,
    }
    report.elapsed_ms = watch.ms()
    return report


def verify_lemma32_exact(ring: RingParam, B: int = 2) -> CheckReport:
    watch = Stopwatch()
    report = CheckReport(
        check="lemma32-exact",
        config={"n": ring.n, "kind": ring.kind, "bound": B},
    )
    for g in enumerate_box(ring, B):
        entry = check_lemma32(g)
        report.total_checked += 1
        if not entry["ok"]:
            report.add_violation(
                [format_matrix(g)],
                {"lhs16": entry["lhs16"], "rhs16": entry["rhs16"], "x": entry["x"]},
            )
    report.elapsed_ms = watch.ms()
    return report


def check_lemma34(g: ProjMat) -> dict:
    """Transpose relation m(g) m(g^t) Re(a conj(d) + b conj(c)) >= 0, exactly.

    When Re(a conj(c)) and Re(a conj(b)) are both nonzero the polynomial form
    of the product Re(a conj(c)) Re(a conj(b)) Re(a conj(d) + b conj(c)) is
    also evaluated: scaled by 64 it equals 16*(A4*X + B4)*(2X + 1) with
    A4 = 4|a|^2, B4 = n*(2 a2)^2 and X = b1*c1 + n*a2*d2.
    """
    if not g.ring.is_full:
        raise ValueError("exact transpose-relation variant needs the full ring")
    n = g.ring.n
    mg = m_exact(g)
    mgt = m_exact(g.transpose())
    scaled_re = re4(g.a, g.d) + re4(g.b, g.c)
    ineq_ok = mg * mgt * scaled_re >= 0
    entry = {
        "m_g": mg,
        "m_gt": mgt,
        "scaled_re_ad_bc": scaled_re,
        "ineq_ok": ineq_ok,
        "poly_checked": False,
    }
    r_ac = re4(g.a, g.c)
    r_ab = re4(g.a, g.b)
    if r_ac != 0 and r_ab != 0:
        lhs64 = r_ac * r_ab * scaled_re
        a4 = re4(g.a, g.a)  # 4|a|^2
        b4 = n * g.a.v * g.a.v  # n*(2 a2)^2 = 4*n*a2^2
        x4 = g.b.u * g.c.u + n * g.a.v * g.d.v
        x = x4 // 4
        rhs64 = 16 * (a4 * x + b4) * (2 * x + 1)
        entry.update(
            poly_checked=True, lhs64=lhs64, rhs64=rhs64, poly_ok=lhs64 == rhs64
        )
    return entry


def verify_lemma34_exact(ring: RingParam, B: int = 2) -> list[CheckReport]:
    """Sweep the transpose relation; returns [inequality report, identity report]."""
    watch = Stopwatch()
    ineq = CheckReport(
        check="lemma34-exact",
        config={"n": ring.n, "kind": ring.kind, "bound": B},
    )
    poly = CheckReport(
        check="lemma34-poly-identity",
        config={"n": ring.n, "kind": ring.kind, "bound": B},
    )
    equal = unequal = 0
    for g in enumerate_box(ring, B):
        entry = check_lemma34(g)
        ineq.total_checked += 1
        if not entry["ineq_ok"]:
            ineq.add_violation(
                [format_matrix(g)],
                {"m_g": entry["m_g"], "m_gt": entry["m_gt"],
                 "scaled_re_ad_bc": entry["scaled_re_ad_bc"]},
            )
        if entry["poly_checked"]:
            poly.total_checked += 1
            if entry["poly_ok"]:
                equal += 1
            else:
                unequal += 1
                poly.add_violation(
                    [format_matrix(g)],
                    {"lhs64": entry["lhs64"], "rhs64": entry["rhs64"]},
                )
    poly.witness = {"equal": equal, "unequal": unequal}
    ineq.elapsed_ms = poly.elapsed_ms = watch.ms()
    return [ineq, poly]


def check_lemma23(g: CMat2, tol: float = 1e-9) -> dict:
    """Both equivalences of the kernel-shape lemma, as boolean agreement.

    Item 1: Re(a c*) = -Re(b d*) = 1/2  iff  c = conj(d), a = -conj(b) and
    Re(a c*) = 1/2.  Item 2 is the mirrored statement through
    [[a, -b], [-c, d]].
    """
    r_ac = (g.a * g.c.conjugate()).real
    r_bd = (g.b * g.d.conjugate()).real
    lhs1 = abs(r_ac - 0.5) <= tol and abs(r_bd + 0.5) <= tol
    rhs1 = (
        abs(g.c - g.d.conjugate()) <= tol
        and abs(g.a + g.b.conjugate()) <= tol
        and abs(r_ac - 0.5) <= tol
    )
    lhs2 = abs(r_ac + 0.5) <= tol and abs(r_bd - 0.5) <= tol
    rhs2 = (
        abs(g.c + g.d.conjugate()) <= tol
        and abs(g.a - g.b.conjugate()) <= tol
        and abs(r_ac + 0.5) <= tol
    )
    return {
        "item1_ok": lhs1 == rhs1,
        "item2_ok": lhs2 == rhs2,
        "item1_active": lhs1 or rhs1,
        "item2_active": lhs2 or rhs2,
        "ok": lhs1 == rhs1 and lhs2 == rhs2,
    }


def sample_lplus_shape(rng: _random.Random, sign: int = 1) -> CMat2:
    """Random matrix of the half-integer kernel shape, Re(a c*) = sign/2."""
    while True:
        a = complex(rng.gauss(0.0, 1.0), rng.gauss(0.0, 1.0))
        c = complex(rng.gauss(0.0, 1.0), rng.gauss(0.0, 1.0))
        r = (a * c.conjugate()).real
        if abs(r) >= 0.05:
            break
    a = a * (sign / (2.0 * r))
    if sign > 0:
        return CMat2(a, -a.conjugate(), c, c.conjugate(), tol=None)
    return CMat2(a, a.conjugate(), c, -c.conjugate(), tol=None)


def verify_lemma23(samples: int = 10**4, seed: int = 42, tol: float = 1e-9) -> CheckReport:
    """Kernel-shape equivalences on conditioned and unconditioned samples."""
    watch = Stopwatch()
    rng = _random.Random(seed)
    report = CheckReport(
        check="lemma23",
        config={"samples": samples, "seed": seed, "tol": tol},
    )
    active = 0
    for k in range(samples):
        mode = k % 3
        if mode == 0:
            g = sample_lplus_shape(rng, 1)
        elif mode == 1:
            g = sample_lplus_shape(rng, -1)
        else:
            g = random_psl2c(rng=rng)
        entry = check_lemma23(g, tol)
        report.total_checked += 1
        if entry["item1_active"] or entry["item2_active"]:
            active += 1
        if not entry["ok"]:
            report.add_violation(
                [{"cmatrix": format_cmatrix(g)}],
                {"item1_ok": entry["item1_ok"], "item2_ok": entry["item2_ok"]},
            )
    report.witness = {"active_samples": active}
    report.elapsed_ms = watch.ms()
    return report


def check_remark_formula(l: ProjMat, g: CMat2, tol: float = 1e-9) -> dict:
    """m(l g) = sign(|r1(g)| - |r2(g)|) for l in the L+ family."""
    if kernel_class(l) is not KernelClass.LPLUS:
        raise ValueError("the row-norm formula needs l in the L+ family")
    prod = cm_mul(embed_to_complex(l), g)
    lhs_arg = m_arg_float(prod)
    r1, r2 = ank.row_norms(g)
    rhs_arg = r1 - r2
    guard = DEAD_ZONE_FACTOR * tol
    boundary = abs(lhs_arg) <= guard or abs(rhs_arg) <= guard
    if abs(lhs_arg) <= guard and abs(rhs_arg) <= guard:
        ok = True
    elif boundary:
        ok = True  # one side inside the dead zone: ambiguous, not a violation
    else:
        ok = _sign(lhs_arg) == _sign(rhs_arg)
    return {"lhs_arg": lhs_arg, "rhs_arg": rhs_arg, "boundary": boundary, "ok": ok}


def verify_remark_formula(
    ring: RingParam, B: int = 2, samples: int = 10**4, seed: int = 42, tol: float = 1e-9
) -> CheckReport:
    watch = Stopwatch()
    if ring.is_full:
        raise ValueError("the L+ row-norm formula needs a maximal-order ring")
    ls = [l for l in enumerate_box(ring, B) if kernel_class(l) is KernelClass.LPLUS]
    report = CheckReport(
        check="remark-lplus-formula",
        config={"n": ring.n, "kind": ring.kind, "bound": B, "samples": samples,
                "seed": seed, "tol": tol, "lplus_in_box": len(ls)},
    )
    if not ls:
        report.add_violation([], {"reason": "no L+ elements in the box"})
        report.elapsed_ms = watch.ms()
        return report
    rng = _random.Random(seed)
    for k in range(samples):
        l = ls[k % len(ls)]
        g = random_psl2c(rng=rng)
        entry = check_remark_formula(l, g, tol)
        report.total_checked += 1
        if not entry["ok"]:
            report.add_violation(
                [format_matrix(l), {"cmatrix": format_cmatrix(g)}],
                {"lhs_arg": entry["lhs_arg"], "rhs_arg": entry["rhs_arg"]},
            )
    report.elapsed_ms = watch.ms()
    return report


# ---------------------------------------------------------------------------
# main-proof sign decomposition


def proof_terms(g: ProjMat, h: ProjMat, tol: float = 1e-9) -> tuple[float, float, float]:
    """The three displayed terms whose sum carries the sign of m(gh) m(g).

    Preconditions: g and h outside the kernel and m(g^-1) != m(h); these are
    exactly the hypotheses left after the right-invariance step.
    """
    if g.ring != h.ring:
        raise ValueError("mixed-ring pair")
    if kernel_class(g) is not KernelClass.NOT_KERNEL:
        raise ValueError("g must lie outside the kernel")
    if kernel_class(h) is not KernelClass.NOT_KERNEL:
        raise ValueError("h must lie outside the kernel")
    if m_exact(g.inverse()) == m_exact(h):
        raise ValueError("requires m(g^-1) != m(h)")
    coords = ank.ank_decompose(embed_to_complex(h), tol)
    s2 = coords.s * coords.s
    ret = coords.t.real
    imt = coords.t.imag
    r_ac = re4(g.a, g.c) / 4.0
    r_bd = re4(g.b, g.d) / 4.0
    r_adbc = (re4(g.a, g.d) + re4(g.b, g.c)) / 4.0
    im_bcad = (im_coeff4(g.b, g.c) - im_coeff4(g.a, g.d)) * math.sqrt(g.ring.n) / 4.0
    arg = r_ac + r_bd
    term1 = arg * r_ac / s2 * (1.0 + ret * ret)
    term2 = arg * r_adbc * ret
    term3 = arg * (r_ac / s2 * imt * imt + r_bd * s2 + im_bcad * imt)
    return term1, term2, term3


def verify_proof_terms(
    ring: RingParam, B: int = 2, pairs: int = 10**4, seed: int = 42, tol: float = 1e-9
) -> CheckReport:
    """Each term nonnegative and sign(I+II+III) = m(gh) m(g) on sampled pairs."""
    if not ring.is_full:
        raise ValueError("the proof decomposition is a full-ring statement")
    watch = Stopwatch()
    elems = enumerate_box(ring, B)
    n = ring.n
    raws, m_list, minv_list, nonkernel = _element_tables(elems, n)
    rng = _random.Random(seed)
    report = CheckReport(
        check="proof-terms",
        config={"n": n, "kind": ring.kind, "bound": B, "pairs": pairs,
                "seed": seed, "tol": tol},
    )
    nk = len(nonkernel)
    found = 0
    attempts = 0
    max_attempts = 50 * pairs
    while found < pairs and attempts < max_attempts:
        attempts += 1
        i = nonkernel[rng.randrange(nk)]
        j = nonkernel[rng.randrange(nk)]
        if minv_list[i] == m_list[j]:
            continue
        g = elems[i]
        h = elems[j]
        t1, t2, t3 = proof_terms(g, h, tol)
        found += 1
        report.total_checked += 1
        total = t1 + t2 + t3
        bad_terms = t1 < -tol or t2 < -tol or t3 < -tol
        sign_bad = False
        if abs(total) > DEAD_ZONE_FACTOR * tol:
            sign_bad = _sign(total) != m_exact(g * h) * m_list[i]
        if bad_terms or sign_bad:
            report.add_violation(
                [format_matrix(g), format_matrix(h)],
                {"I": t1, "II": t2, "III": t3,
                 "m_g": m_list[i], "m_gh": m_exact(g * h)},
            )
    report.witness = {"qualifying_pairs": found}
    report.elapsed_ms = watch.ms()
    return report


# ---------------------------------------------------------------------------
# Bianchi counterexample search


def search_bianchi_counterexample(n: int, B: int = 2) -> CheckReport:
    """Find (l, h') in the Bianchi group with a nonzero Cotlar residual.

    Follows the construction at the end of the argument: take l in the L+
    family with l^-1 outside the kernel, find h with m(lh) != 0 and
    m(h) = m(l^-1), then conjugate h by omega.  Falls back to an exhaustive
    pair scan over the box.  "Not found" is reported, not raised.
    """
    ring = RingParam(n, "max")  # raises for invalid (n, kind) combinations
    watch = Stopwatch()
    elems = enumerate_box(ring, B)
    w = omega(ring)
    report = CheckReport(
        check="counterexample-bianchi",
        config={"n": n, "kind": ring.kind, "bound": B},
    )
    ls = [
        l
        for l in elems
        if kernel_class(l) is KernelClass.LPLUS
        and kernel_class(l.inverse()) is KernelClass.NOT_KERNEL
    ]

    def record(l, hp, recipe_h=None):
        r = cotlar_residual(l, hp)
        report.witness = {
            "l": format_matrix(l),
            "h": format_matrix(hp),
            "residual": r,
            "m_l_inv": m_exact(l.inverse()),
            "m_h": m_exact(hp),
            "m_lh": m_exact(l * hp),
            "m_l": m_exact(l),
            "recipe_h0": format_matrix(recipe_h) if recipe_h is not None else None,
        }

    for l in ls:
        ml_inv = m_exact(l.inverse())
        for h in elems:
            report.total_checked += 1
            if m_exact(l * h) == 0 or m_exact(h) != ml_inv:
                continue
            hp = w * h * w
            if cotlar_residual(l, hp) != 0:
                record(l, hp, recipe_h=h)
                report.elapsed_ms = watch.ms()
                return report
    # fallback: exhaustive residual scan from the L+ side
    for l in ls:
        for h in elems:
            report.total_checked += 1
            if cotlar_residual(l, h) != 0:
                record(l, h)
                report.elapsed_ms = watch.ms()
                return report
    report.elapsed_ms = watch.ms()
    return report
