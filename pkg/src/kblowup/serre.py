"""Pushforwards of ``O(d)`` along the projectivization of a two-term complex.

The fiber sequence ``S^d F -> pr_* O(d) -> (S^{-r-d} F)^vee det(F)^vee [1-r]``
is additive in K-theory, so one closed form covers every degree: the first
term vanishes for ``d < 0`` and the second for ``d > -r``.
"""

from __future__ import annotations

from .lambda_ops import TwoTermComplex, det_inverse, dual_complex, sym_virtual
from .laurent import LaurentPoly
from .oracle import chi_proj_koszul
from .report import Check, Report, timed


def dual_tail(f: TwoTermComplex, d: int) -> LaurentPoly:
    """``(-1)^{1-r} [S^{-r-d}(F^vee)] det(F)^{-1}``: the class of the cofiber end."""
    r = f.rank
    tail = sym_virtual(dual_complex(f), -r - d) * det_inverse(f)
    return tail if (1 - r) % 2 == 0 else -tail


def push_O(f: TwoTermComplex, d: int) -> LaurentPoly:
    return sym_virtual(f, d) + dual_tail(f, d)


def serre_duality_defect(f: TwoTermComplex, d: int) -> tuple[LaurentPoly, LaurentPoly]:
    """Both sides of ``dual(pr_* O(d)) = (-1)^{r-1} det(F) pr_* O(-d-r)``."""
    r = f.rank
    lhs = push_O(f, d).dual()
    rhs = push_O(f, -d - r).shift(f.det_exponent())
    return lhs, rhs if (r - 1) % 2 == 0 else -rhs


def serre_regime_check(f: TwoTermComplex, dmin: int, dmax: int, label: str = "F") -> Report:
    """Closed form against the Koszul oracle on ``[dmin, dmax]``, plus the cofiber at ``d = -r``."""
    if dmin > dmax:
        raise ValueError("empty degree range")
    report = Report("serre")
    r = f.rank
    for d in range(dmin, dmax + 1):
        with timed() as clock:
            lhs, rhs = push_O(f, d), chi_proj_koszul(f, d)
        report.add(Check(
            f"{label}: pr_*O({d}) closed form = Koszul oracle",
            lhs == rhs, lhs, rhs, "generalized Serre theorem: fiber sequence of graded modules",
            clock.elapsed,
        ))
    if dmin <= -r <= dmax:
        with timed() as clock:
            lhs = push_O(f, -r) - sym_virtual(f, -r)
            rhs = det_inverse(f) if (1 - r) % 2 == 0 else -det_inverse(f)
        report.add(Check(
            f"{label}: cofiber of phi at d=-r={-r} is (-1)^(1-r) det^-1",
            lhs == rhs, lhs, rhs, "generalized Serre theorem: cofiber is a line bundle",
            clock.elapsed,
        ))
    for d in range(dmin, dmax + 1):
        if -r + 1 <= d <= -1:
            lhs = push_O(f, d)
            report.add(Check(
                f"{label}: overlap window vanishing at d={d}",
                lhs.is_zero(), lhs, LaurentPoly.zero(f.torus_rank),
                "generalized Serre theorem: both comparison maps are equivalences",
            ))
    return report
