import random

import pytest

from cotlarlab.ank import (
    AnkCoords,
    ank_decompose,
    ank_reconstruct,
    reconstruction_error,
    verify_ank_roundtrip,
    verify_kernel_t_imaginary,
)
from cotlarlab.psl2 import CMat2, embed_to_complex, enumerate_box, random_psl2c
from cotlarlab.quadring import RingParam
from cotlarlab.symbol import m_exact

R2 = RingParam(2, "full")


def test_upper_triangular_example():
    coords = ank_decompose(CMat2(1, 1, 0, 1))
    assert coords.s == pytest.approx(1.0)
    assert coords.t == pytest.approx(1.0)  # <(1,1), (0,1)> = 1
    assert reconstruction_error(CMat2(1, 1, 0, 1), coords) < 1e-12


def test_omega_example():
    w = CMat2(0, -1, 1, 0)
    coords = ank_decompose(w)
    assert coords.s == pytest.approx(1.0)
    assert coords.t == pytest.approx(0.0)
    # u is omega up to the projective sign convention
    flat = [abs(x) for x in coords.u.entries()]
    assert flat == pytest.approx([0.0, 1.0, 1.0, 0.0])
    assert reconstruction_error(w, coords) < 1e-12


def test_identity_coords_reconstruct_to_identity():
    g = ank_reconstruct(AnkCoords(s=1.0, t=0.0, u=CMat2(1, 0, 0, 1)))
    assert g.entries() == (1 + 0j, 0j, 0j, 1 + 0j)


def test_degenerate_row_rejected():
    with pytest.raises(ValueError):
        ank_decompose(CMat2(1.0, 0.0, 0.0, 0.0, tol=None))


def test_roundtrip_sweep():
    rep = verify_ank_roundtrip(samples=2 * 10**4, seed=42, tol=1e-9)
    assert rep.violations == []
    assert rep.witness["max_error"] < 1e-9


def test_unitarity_of_u():
    rng = random.Random(6)
    for _ in range(500):
        g = random_psl2c(rng=rng)
        u = ank_decompose(g).u
        # u u* = I
        assert abs(u.a * u.a.conjugate() + u.b * u.b.conjugate() - 1) < 1e-12
        assert abs(u.c * u.c.conjugate() + u.d * u.d.conjugate() - 1) < 1e-12
        assert abs(u.a * u.c.conjugate() + u.b * u.d.conjugate()) < 1e-12


def test_t_matches_symbol_argument():
    # Re t is literally the symbol argument, so sign(Re t) = m on lattice elements
    for g in enumerate_box(R2, 2):
        coords = ank_decompose(embed_to_complex(g))
        m = m_exact(g)
        if m == 0:
            assert abs(coords.t.real) < 1e-9
        else:
            assert (coords.t.real > 0) == (m > 0)


def test_kernel_t_purely_imaginary():
    rep = verify_kernel_t_imaginary(R2, 2, tol=1e-9)
    assert rep.total_checked > 0
    assert rep.violations == []


def test_sign_convention_projective():
    # decomposing -g gives the same u up to the sign convention and the same (s, |t|)
    rng = random.Random(7)
    for _ in range(200):
        g = random_psl2c(rng=rng)
        neg = CMat2(-g.a, -g.b, -g.c, -g.d, tol=None)
        c1 = ank_decompose(g)
        c2 = ank_decompose(neg)
        assert c1.s == pytest.approx(c2.s)
        assert abs(c1.t) == pytest.approx(abs(c2.t))
        assert reconstruction_error(neg, c2) < 1e-9
