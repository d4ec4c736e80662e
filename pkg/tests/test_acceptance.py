"""Acceptance gate: every criterion at its stated tolerance, one line each.

Run with `pytest -s tests/test_acceptance.py` to see the PASS lines; any
failure shows up as a normal pytest assertion failure.
"""

import math
import random
import re

import pytest

from cotlarlab.ank import verify_ank_roundtrip, verify_kernel_t_imaginary
from cotlarlab.cli import RunConfig, render_reports, run
from cotlarlab.cotlar import (
    search_bianchi_counterexample,
    verify_G0_invariance,
    verify_chi_homomorphism,
    verify_cotlar,
    verify_invariance,
    verify_lemma21_exact,
    verify_lemma21_float,
    verify_lemma23,
    verify_lemma32_exact,
    verify_lemma32_float,
    verify_lemma34_exact,
    verify_proof_terms,
    verify_psu2_invariance,
)
from cotlarlab.ncfourier import (
    AlgElem,
    adjoint,
    apply_multiplier,
    convolve,
    norm2k,
    random_element,
    trace,
)
from cotlarlab.psl2 import enumerate_box, identity, parse_matrix, standard_generators
from cotlarlab.quadring import RingParam
from cotlarlab.symbol import KernelClass, kernel_class, m_exact, verify_theoremB

FULL_NS = (1, 2, 3, 5, 6)
MAX_NS = (7, 11)


def _ok(line):
    print(f"ACCEPTANCE {line}")


def test_criterion_1_theorem_b_set_equality():
    for n in FULL_NS:
        rep = verify_theoremB(RingParam(n, "full"), 2)
        assert rep.violations == [], f"n={n} full"
        assert rep.elapsed_ms < 300_000
    for n in MAX_NS:
        rep = verify_theoremB(RingParam(n, "max"), 2)
        assert rep.violations == [], f"n={n} max"
        assert rep.elapsed_ms < 300_000
    _ok("1: PASS - kernel set equality, n in {1,2,3,5,6} full and {7,11} max, B=2")


def test_criterion_2_cotlar_identity():
    for n in FULL_NS:
        rep = verify_cotlar(
            RingParam(n, "full"), 2, pair_budget=10**6, seed=42, max_word_len=8
        )
        assert rep.total_checked >= 10**6, f"n={n}"
        assert rep.violations == [], f"n={n}"
    _ok("2: PASS - zero residuals over >= 1e6 pairs per n, words up to length 8")


def test_criterion_3_bianchi_failure():
    for n in MAX_NS:
        rep = search_bianchi_counterexample(n, 2)
        assert rep.witness is not None, f"n={n}"
        assert rep.witness["residual"] != 0
    _ok("3: PASS - nonzero-residual witness found within B=2 for n in {7,11}")


def test_criterion_4_k3_exception():
    u3 = parse_matrix("n=3;kind=max;a=-1/1;b=0/0;c=0/0;d=-1/-1")
    ring = RingParam(3, "max")
    assert u3 in enumerate_box(ring, 2)
    assert m_exact(u3) == 0
    assert kernel_class(u3) is KernelClass.NOT_KERNEL
    _ok("4: PASS - diag(xi_3, conj(xi_3)) enumerated, m=0, shape-classified outside")


def test_criterion_5_lemma_suite():
    # (a) column products: float bound -1/4 at 1e-9 over 1e5; exact >= 0
    rep = verify_lemma21_float(samples=10**5, seed=42, tol=1e-9)
    assert rep.violations == []
    assert rep.witness["min_product"] >= -0.25 - 1e-9
    for n in FULL_NS:
        rep = verify_lemma21_exact(RingParam(n, "full"), 2)
        assert rep.violations == []
        assert rep.witness["min_scaled_product"] >= 0
    # (b) quadratic form: float bound 1; exact identity 16*LHS = 16*(-4X(1+X))
    rep = verify_lemma32_float(samples=10**5, seed=42, tol=1e-9)
    assert rep.violations == []
    assert rep.witness["max_lhs"] <= 1.0 + 1e-9
    for n in FULL_NS:
        rep = verify_lemma32_exact(RingParam(n, "full"), 2)
        assert rep.violations == []
    # (c) transpose relation, exactly on every enumerated element
    for n in FULL_NS:
        ineq, poly = verify_lemma34_exact(RingParam(n, "full"), 2)
        assert ineq.violations == []
        assert poly.violations == [] and poly.witness["unequal"] == 0
    # (d) half-integer shape equivalences on conditioned samples
    rep = verify_lemma23(samples=10**4, seed=42, tol=1e-9)
    assert rep.violations == []
    assert rep.witness["active_samples"] > 0
    _ok("5: PASS - lemma suite (column bound, quadratic identity, transpose, shapes)")


def test_criterion_6_invariance():
    for n in FULL_NS:
        ring = RingParam(n, "full")
        rep = verify_invariance(ring, 2)
        assert rep.violations == [], f"n={n}"
        rep = verify_chi_homomorphism(ring, 2)
        assert rep.violations == [], f"n={n}"
    rep = verify_G0_invariance(samples=10**5, seed=42, tol=1e-9)
    assert rep.violations == []
    rep = verify_psu2_invariance(samples=10**5, seed=42, tol=1e-9)
    assert rep.violations == []
    _ok("6: PASS - kernel invariances on full products; G0/PSU(2) on 1e5 samples")


def test_criterion_7_proof_decomposition():
    rep = verify_proof_terms(RingParam(2, "full"), 2, pairs=10**4, seed=42, tol=1e-9)
    assert rep.witness["qualifying_pairs"] == 10**4
    assert rep.violations == []
    _ok("7: PASS - I, II, III >= -1e-9 and sign(I+II+III) = m(gh)m(g) on 1e4 pairs")


def test_criterion_8_ank():
    rep = verify_ank_roundtrip(samples=10**5, seed=42, tol=1e-9)
    assert rep.violations == []
    assert rep.witness["max_error"] < 1e-9
    for n in FULL_NS:
        rep = verify_kernel_t_imaginary(RingParam(n, "full"), 2, tol=1e-9)
        assert rep.total_checked > 0
        assert rep.violations == []
    _ok("8: PASS - round-trip < 1e-9 over 1e5 samples; kernel t purely imaginary")


def test_criterion_9_noncommutative_norms():
    ring = RingParam(2, "full")
    pool = enumerate_box(ring, 2)
    gens = standard_generators(ring)
    rng = random.Random(42)
    # L2 contraction, 100 random elements with support <= 50
    for _ in range(100):
        x = random_element(ring, rng.randint(5, 50), rng, pool, gens)
        nx = norm2k(x, 1).value
        ntx = norm2k(apply_multiplier(x), 1).value
        assert ntx <= nx * (1.0 + 1e-12)
    # central binomial moments against the walk-counting oracle
    e = identity(ring)
    t = parse_matrix("n=2;kind=full;a=2/0;b=2/0;c=0/0;d=2/0")
    x = AlgElem(ring, {e: 1.0, t: 1.0})
    for k in (1, 2, 3):
        walks = {0: 1}
        for _ in range(2 * k):
            nxt = {}
            for pos, c in walks.items():
                nxt[pos + 1] = nxt.get(pos + 1, 0) + c
                nxt[pos - 1] = nxt.get(pos - 1, 0) + c
            walks = nxt
        assert walks[0] == math.comb(2 * k, k)
        assert norm2k(x, k).exact_moment == pytest.approx(walks[0], rel=1e-12)
    # self-adjointness pairing
    for _ in range(20):
        a = random_element(ring, 8, rng, pool, gens)
        b = random_element(ring, 8, rng, pool, gens)
        lhs = trace(convolve(adjoint(apply_multiplier(a)), b))
        rhs = trace(convolve(adjoint(a), apply_multiplier(b)))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))
    _ok("9: PASS - L2 contraction, central binomial moments, self-adjoint pairing")


def test_criterion_10_reproducibility():
    rendered = []
    for threads in (1, 4, 8):
        config = RunConfig(
            command="verify-cotlar", n=2, bound=2, pair_budget=10**5,
            seed=42, threads=threads,
        )
        code, reports = run(config)
        assert code == 0
        blob = render_reports(config, reports)
        rendered.append(re.sub(r'"elapsed_ms": \d+', '"elapsed_ms": 0', blob))
    assert rendered[0] == rendered[1] == rendered[2]
    # and identical reruns at fixed threads produce identical bytes too
    config = RunConfig(command="verify-theorem-b", n=7, kind="max", seed=42)
    blobs = []
    for _ in range(2):
        code, reports = run(config)
        assert code == 0
        blobs.append(
            re.sub(r'"elapsed_ms": \d+', '"elapsed_ms": 0', render_reports(config, reports))
        )
    assert blobs[0] == blobs[1]
    _ok("10: PASS - byte-identical reports (excluding timing) across threads 1, 4, 8")
