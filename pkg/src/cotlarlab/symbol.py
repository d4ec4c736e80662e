"""The half-space sign symbol on PSL2 and the exact classification of its kernel.

The symbol of g = [[a, b], [c, d]] is sign(Re(a*conj(c) + b*conj(d))).  On
lattice elements it is computed from the exact integer 4*Re(...), so the
value is never a rounding artifact.  The kernel {m = 0} decomposes into
four entry-shape families; membership is decided by pattern matching on the
shapes, never by testing m = 0, so the kernel decomposition can be verified
as an equality of two independently computed sets.
"""

from __future__ import annotations

from enum import Enum

from .psl2 import CMat2, ProjMat, enumerate_box, format_matrix, marg4_raw
from .quadring import RingParam
from .report import CheckReport, Stopwatch


class KernelClass(Enum):
    KPLUS = "K+"
    KMINUS = "K-"
    LPLUS = "L+"
    LMINUS = "L-"
    NOT_KERNEL = "not-kernel"


def m_exact(g: ProjMat) -> int:
    """The symbol on the exact layer: -1, 0 or +1."""
    t = marg4_raw(g.e, g.ring.n)
    return (t > 0) - (t < 0)


def m_arg_float(g: CMat2) -> float:
    """Re(a*conj(c) + b*conj(d)), the quantity whose sign is the symbol."""
    return (g.a * g.c.conjugate() + g.b * g.d.conjugate()).real


def m_float(g: CMat2, tol: float = 1e-9) -> int:
    """Sign with a dead zone: 0 whenever |Re(a*conj(c) + b*conj(d))| <= tol."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    t = m_arg_float(g)
    if abs(t) <= tol:
        return 0
    return 1 if t > 0 else -1


def _class_of_raw(e, n) -> KernelClass:
    a0, a1, b0, b1, c0, c1, d0, d1 = e
    # K+: diagonal real, off-diagonal pure sqrt(-n) multiples
    if a1 == 0 and d1 == 0 and b0 == 0 and c0 == 0:
        return KernelClass.KPLUS
    # K-: diagonal pure imaginary, off-diagonal real
    if a0 == 0 and d0 == 0 and b1 == 0 and c1 == 0:
        return KernelClass.KMINUS
    # L+: b = -conj(a), d = conj(c), Re(a*conj(c)) = 1/2
    if (
        b0 == -a0
        and b1 == a1
        and d0 == c0
        and d1 == -c1
        and a0 * c0 + n * a1 * c1 == 2
    ):
        return KernelClass.LPLUS
    # L-: b = conj(a), d = -conj(c), Re(a*conj(c)) = -1/2
    if (
        b0 == a0
        and b1 == -a1
        and d0 == -c0
        and d1 == c1
        and a0 * c0 + n * a1 * c1 == -2
    ):
        return KernelClass.LMINUS
    return KernelClass.NOT_KERNEL


def kernel_class(g: ProjMat) -> KernelClass:
    """Entry-shape classification into the four kernel families.

    Both sign representatives of the projective class are tested before
    declaring non-membership.
    """
    n = g.ring.n
    cls = _class_of_raw(g.e, n)
    if cls is not KernelClass.NOT_KERNEL:
        return cls
    return _class_of_raw(tuple(-x for x in g.e), n)


def in_kernel(g: ProjMat) -> bool:
    return kernel_class(g) is not KernelClass.NOT_KERNEL


def chi(g: ProjMat) -> int:
    """The kernel character: +1 on the K+ family, -1 on the K- family."""
    cls = kernel_class(g)
    if cls is KernelClass.KPLUS:
        return 1
    if cls is KernelClass.KMINUS:
        return -1
    raise ValueError(f"chi is only defined on the kernel subgroup; got class {cls.value}")


def verify_theoremB(ring: RingParam, B: int) -> CheckReport:
    """Kernel decomposition as a set equality over the enumeration box.

    For every enumerated g the vanishing of the symbol must agree with the
    shape classification; in the full ring no element may classify into the
    half-integer L families.  Violations are data (the n = 3 order has a
    genuine, expected exception), not errors.
    """
    watch = Stopwatch()
    report = CheckReport(
        check="theorem-b",
        config={"n": ring.n, "kind": ring.kind, "bound": B},
    )
    for g in enumerate_box(ring, B):
        report.total_checked += 1
        m = m_exact(g)
        cls = kernel_class(g)
        if (m == 0) != (cls is not KernelClass.NOT_KERNEL):
            report.add_violation(
                [format_matrix(g)],
                {"m": m, "class": cls.value, "reason": "m=0 iff shape-classified failed"},
            )
        elif ring.is_full and cls in (KernelClass.LPLUS, KernelClass.LMINUS):
            report.add_violation(
                [format_matrix(g)],
                {"m": m, "class": cls.value, "reason": "L-shape element in a full ring"},
            )
    report.elapsed_ms = watch.ms()
    return report
