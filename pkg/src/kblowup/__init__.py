"""Exact K-theoretic verification of derived blow-up identities.

Classes are Laurent polynomials in torus characters (with an optional grading
variable ``q``) or fractions of them with denominators ``prod (1 - x^m)``.
"""

from __future__ import annotations

from .laurent import LaurentPoly, RationalClass, geom_inv, lp_dual, lp_mul, rat_eq, rat_series
from .lambda_ops import Bundle, TwoTermComplex, det_class, dual_complex, e_char, h_char, sym_virtual
from .oracle import chi_proj, chi_proj_koszul, h_brute
from .report import Check, Report, VerificationReport
from .rees import (
    BlowupModel,
    blowup_piece,
    chart_blowup_piece,
    comparison_formula,
    h_minus,
    h_plus,
    rees_piece,
    rees_presentation_char,
    verify_lattice,
    w_class,
)
from .serre import push_O, serre_regime_check
from .diagonal import DiagonalScenario, cbeta_chi, telescope_check
from .localization import FixedComponent, inv_wedge, inv_wedge_closed, vloc_check
from .approx import BlowupSequence, Step, approx_rhs, sequence_telescope_check

__version__ = "0.1.0"

__all__ = [
    "LaurentPoly", "RationalClass", "geom_inv", "lp_dual", "lp_mul", "rat_eq", "rat_series",
    "Bundle", "TwoTermComplex", "det_class", "dual_complex", "e_char", "h_char", "sym_virtual",
    "chi_proj", "chi_proj_koszul", "h_brute",
    "Check", "Report", "VerificationReport",
    "BlowupModel", "blowup_piece", "chart_blowup_piece", "comparison_formula", "h_minus", "h_plus",
    "rees_piece", "rees_presentation_char", "verify_lattice", "w_class",
    "push_O", "serre_regime_check",
    "DiagonalScenario", "cbeta_chi", "telescope_check",
    "FixedComponent", "inv_wedge", "inv_wedge_closed", "vloc_check",
    "BlowupSequence", "Step", "approx_rhs", "sequence_telescope_check",
]
