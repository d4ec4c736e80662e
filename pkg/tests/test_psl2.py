import random

import pytest
from hypothesis import given, strategies as st

from cotlarlab.psl2 import (
    CMat2,
    ProjMat,
    box_coords,
    canon_raw,
    cm_mul,
    embed_to_complex,
    enumerate_box,
    format_matrix,
    identity,
    omega,
    parse_matrix,
    random_psl2c,
    random_word,
    standard_generators,
)
from cotlarlab.quadring import QInt, RingParam
from cotlarlab.symbol import m_exact

R1 = RingParam(1, "full")
R2 = RingParam(2, "full")
R3 = RingParam(3, "full")
R7 = RingParam(7, "max")

# frozen on first run from the independent quadruple-loop oracle below
ENUM_COUNT_N2_B2 = 582


def med(ring, a, b, c, d):
    """Matrix from whole-coordinate entry pairs ((a1,a2), ...)."""
    return ProjMat(
        QInt(2 * a[0], 2 * a[1], ring),
        QInt(2 * b[0], 2 * b[1], ring),
        QInt(2 * c[0], 2 * c[1], ring),
        QInt(2 * d[0], 2 * d[1], ring),
    )


def test_constructor_rejects_bad_det():
    with pytest.raises(ValueError):
        med(R2, (1, 0), (0, 0), (0, 0), (2, 0))
    with pytest.raises(ValueError):
        ProjMat.from_raw(R2, (2, 0, 0, 0, 0, 0, 4, 0))


def test_group_laws_random_words():
    gens = standard_generators(R2)
    rng = random.Random(5)
    e = identity(R2)
    for _ in range(1000):
        g = random_word(gens, rng.randint(0, 10), rng=rng)
        assert g * g.inverse() == e
    for _ in range(1000):
        g = random_word(gens, rng.randint(0, 6), rng=rng)
        h = random_word(gens, rng.randint(0, 6), rng=rng)
        assert (g * h).inverse() == h.inverse() * g.inverse()


def test_omega_relations():
    w = omega(R2)
    assert w * w == identity(R2)
    assert w.transpose() == w  # [[0,1],[-1,0]] is the same projective class
    assert m_exact(w) == 0


def test_mixed_ring_product_rejected():
    with pytest.raises(ValueError):
        omega(R2) * omega(R1)


@given(st.integers(0, 10**6))
def test_canonicalize_constant_on_sign_pair(k):
    rng = random.Random(k)
    g = random_word(standard_generators(R2), rng.randint(0, 6), rng=rng)
    neg = tuple(-x for x in g.e)
    assert canon_raw(neg) == g.e  # canon(-g) = canon(g)
    assert canon_raw(g.e) == g.e  # idempotent


def test_enumerate_n1_b1_membership():
    elems = set(enumerate_box(R1, 1))
    assert identity(R1) in elems
    assert omega(R1) in elems
    assert med(R1, (1, 0), (1, 0), (0, 0), (1, 0)) in elems  # [[1,1],[0,1]]
    assert med(R1, (1, 0), (0, 1), (0, 0), (1, 0)) in elems  # [[1,i],[0,1]]


def test_enumerate_dets_exact():
    from cotlarlab.psl2 import det_raw

    for ring in (R1, R7):
        for g in enumerate_box(ring, 1):
            assert det_raw(g.e, ring.n) == (2, 0)


def _oracle_count_n2_b2():
    # independent exhaustive scan over coordinate 4-tuples with naive dedup
    n, B = 2, 2
    lo, hi = -2 * B, 2 * B
    coords = [
        (u, v)
        for u in range(lo, hi + 1)
        for v in range(lo, hi + 1)
        if (u - v) % 2 == 0 and u % 2 == 0
    ]

    def qmul(x, y):
        return ((x[0] * y[0] - n * x[1] * y[1]) // 2, (x[0] * y[1] + x[1] * y[0]) // 2)

    seen = set()
    for a in coords:
        for d in coords:
            ad = qmul(a, d)
            for b in coords:
                for c in coords:
                    bc = qmul(b, c)
                    if ad[0] - bc[0] == 2 and ad[1] == bc[1]:
                        e = a + b + c + d
                        seen.add(max(e, tuple(-x for x in e)))
    return len(seen)


def test_enumerate_count_against_oracle():
    assert _oracle_count_n2_b2() == ENUM_COUNT_N2_B2
    assert len(enumerate_box(R2, 2)) == ENUM_COUNT_N2_B2


def test_enumerate_deterministic_order():
    a = [g.e for g in enumerate_box(R2, 2)]
    b = [g.e for g in enumerate_box(R2, 2)]
    assert a == b
    assert a == sorted(a)


def test_enumerate_closed_under_inverse_and_transpose():
    for ring in (R1, R2, R3):
        elems = set(enumerate_box(ring, 2))
        for g in elems:
            assert g.inverse() in elems
            assert g.transpose() in elems


def test_random_word_edge_cases():
    w = omega(R2)
    assert random_word([w], 0, seed=3) == identity(R2)
    assert random_word([w], 1, seed=3) == w  # omega is its own inverse projectively
    with pytest.raises(ValueError):
        random_word([], 2, seed=0)


def test_random_word_determinism_and_det():
    gens = standard_generators(R3)
    assert random_word(gens, 7, seed=11) == random_word(gens, 7, seed=11)
    from cotlarlab.psl2 import det_raw

    rng = random.Random(2)
    for _ in range(10**4):
        g = random_word(gens, rng.randint(0, 8), rng=rng)
        assert det_raw(g.e, 3) == (2, 0)


def test_random_psl2c_determinism_and_det():
    g1 = random_psl2c(seed=9)
    g2 = random_psl2c(seed=9)
    assert g1.entries() == g2.entries()
    rng = random.Random(4)
    worst = 0.0
    for _ in range(10**5):
        g = random_psl2c(rng=rng)
        worst = max(worst, abs(g.det() - 1.0))
    assert worst <= 1e-12


def test_embed_homomorphism():
    elems = enumerate_box(R2, 2)
    rng = random.Random(8)
    for _ in range(2000):
        g = elems[rng.randrange(len(elems))]
        h = elems[rng.randrange(len(elems))]
        lhs = embed_to_complex(g * h)  # canonical representative of the class
        rhs = cm_mul(embed_to_complex(g), embed_to_complex(h))
        plus = max(abs(x - y) for x, y in zip(lhs.entries(), rhs.entries()))
        minus = max(abs(x + y) for x, y in zip(lhs.entries(), rhs.entries()))
        assert min(plus, minus) < 1e-9


def test_cmat2_det_validation():
    CMat2(1.0, 0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        CMat2(2.0, 0.0, 0.0, 1.0)


def test_text_format_roundtrip():
    for ring in (R2, R7):
        for g in enumerate_box(ring, 1):
            assert parse_matrix(format_matrix(g)) == g


def test_text_format_rejects_garbage():
    with pytest.raises(ValueError):
        parse_matrix("n=2;kind=full;a=1/0;b=0/0;c=0/0;d=2/0")  # parity
    with pytest.raises(ValueError):
        parse_matrix("n=2;kind=full;a=2/0;b=0/0;c=0/0;d=4/0")  # det != 1
    with pytest.raises(ValueError):
        parse_matrix("n=2;kind=weird;a=2/0;b=0/0;c=0/0;d=2/0")
    with pytest.raises(ValueError):
        parse_matrix("nonsense")


def test_box_coords_parity():
    assert (1, 1) in box_coords(R7, 1)
    assert (1, 1) not in box_coords(R2, 1)
    assert all((u - v) % 2 == 0 for u, v in box_coords(R7, 2))
