"""Exact verification lab for the half-space sign multiplier on PSL2 lattices."""

__version__ = "0.1.0"

from .quadring import FULL, MAX, QInt, RingParam, im_coeff4, re4  # noqa: F401
from .psl2 import (  # noqa: F401
    CMat2,
    ProjMat,
    embed_to_complex,
    enumerate_box,
    format_matrix,
    identity,
    omega,
    parse_matrix,
    random_psl2c,
    random_word,
)
from .symbol import KernelClass, chi, kernel_class, m_exact, m_float, verify_theoremB  # noqa: F401
from .report import CheckReport  # noqa: F401
from .ank import AnkCoords, ank_decompose, ank_reconstruct  # noqa: F401
from .ncfourier import AlgElem, NormProfile, adjoint, apply_multiplier, convolve, norm2k, trace  # noqa: F401
from .cotlar import cotlar_residual, proof_terms, search_bianchi_counterexample  # noqa: F401
