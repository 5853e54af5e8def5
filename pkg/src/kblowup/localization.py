"""Virtual inverse Euler classes ``[1 / wedge F]`` and virtual localization.

The class is defined through the projectivization of ``F``:

    [1 / wedge F] = pr_*(1 / (1 - O(1))) + (-1)^r det(F)^{-1} sum_{l=0}^{-r} S^l(F^vee).

Inverting ``1 - O(1)`` is legitimate only after localizing the representation
ring, where pushforward from the fixed locus becomes an isomorphism; no
weight of ``F`` may be trivial. Three independent evaluations of the
pushforward term are offered and compared against the product formula
``prod(1 - v) / prod(1 - w)`` from :func:`inv_wedge_closed`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lambda_ops import Bundle, TwoTermComplex, det_inverse, dual_complex, sym_virtual
from .laurent import LaurentPoly, RationalClass, add_exp, neg_exp
from .oracle import chi_proj
from .report import Check, Report, timed
from .serre import dual_tail, push_O

SERRE, BOTT, RECURSION = "serre", "bott", "recursion"
METHODS = (SERRE, BOTT, RECURSION)

ANCHOR_LEMMA = "virtual inverse Euler class: agrees with [wedge V][1/wedge W]"
ANCHOR_VLOC = "virtual localization: [O_U] = sum_j i_*[1/wedge C_j]"


class TrivialWeightError(ValueError):
    """A weight equal to the trivial character makes 1/(1 - weight) undefined."""


def _require_nontrivial(f: TwoTermComplex) -> None:
    if f.has_trivial_weight():
        raise TrivialWeightError("complex has a trivial weight; its inverse Euler class is undefined")


def _prod_one_minus(b: Bundle) -> LaurentPoly:
    out = LaurentPoly.one(b.torus_rank)
    for w in b.weights:
        out = out * (1 - LaurentPoly.monomial(w))
    return out


def inv_wedge_closed(f: TwoTermComplex) -> RationalClass:
    _require_nontrivial(f)
    return RationalClass(_prod_one_minus(f.v), f.w.weights)


def determinant_correction(f: TwoTermComplex) -> LaurentPoly:
    """``(-1)^r det(F)^{-1} sum_{l=0}^{-r} S^l(F^vee)``; zero when ``r > 0``."""
    acc = LaurentPoly.zero(f.torus_rank)
    for l in range(-f.rank + 1):
        acc = acc + sym_virtual(dual_complex(f), l)
    acc = acc * det_inverse(f)
    return acc if f.rank % 2 == 0 else -acc


def projective_term_serre(f: TwoTermComplex) -> RationalClass:
    """``sum_{d>=0} pr_*O(d)``: symmetric powers summed by their generating function,
    plus the finitely many dual tails with ``0 <= d <= -r``."""
    series = RationalClass(_prod_one_minus(f.v), f.w.weights)
    tails = LaurentPoly.zero(f.torus_rank)
    for d in range(-f.rank + 1):
        tails = tails + dual_tail(f, d)
    return series + tails


def projective_term_bott(f: TwoTermComplex) -> RationalClass:
    """Fixed-point sum on ``P(W)`` with the Koszul factor of the cosection ``V(-1) -> O``."""
    w = f.w.weights
    rank = f.torus_rank
    if len(set(w)) != len(w):
        raise ValueError("fixed-point evaluation needs distinct weights in W")
    total = RationalClass.zero(rank)
    for i, wi in enumerate(w):
        num = LaurentPoly.one(rank)
        for vk in f.v.weights:
            num = num * (1 - LaurentPoly.monomial(add_exp(vk, neg_exp(wi))))
        factors = [wi] + [add_exp(wj, neg_exp(wi)) for j, wj in enumerate(w) if j != i]
        total = total + RationalClass(num, factors)
    return total


def _fresh_line(f: TwoTermComplex) -> tuple[TwoTermComplex, LaurentPoly]:
    rank = f.torus_rank + 1
    g = f.embed(rank)
    t = (0,) * rank + (0,)
    t = t[: rank - 1] + (1,) + t[-1:]
    return TwoTermComplex(g.v, g.w + Bundle(rank, (t,))), LaurentPoly.monomial(t)


def projective_term_recursive(f: TwoTermComplex) -> RationalClass:
    """Adjoin fresh characters ``t`` until the rank is positive, using

        pr_{F*}[1/(1-O(1))] = (1 - t) pr_{F+t *}[1/(1-O(1))] - t pr_{F+t *}O(-1).

    At positive rank the pushforward is the generating function of ``S^d F``.
    The answer lives on the enlarged torus.
    """
    if f.rank > 0:
        return RationalClass(_prod_one_minus(f.v), f.w.weights)
    g, t = _fresh_line(f)
    upper = projective_term_recursive(g)
    rank = upper.rank
    return upper * (1 - t.embed(rank)) - (t * push_O(g, -1)).embed(rank)


def inv_wedge(f: TwoTermComplex, method: str = SERRE) -> RationalClass:
    """``[1 / wedge F]`` from its definition; the projective term is evaluated by ``method``.

    ``recursion`` returns a class on a torus with ``max(0, 1 - r)`` extra slots.
    """
    _require_nontrivial(f)
    if method == SERRE:
        proj = projective_term_serre(f)
    elif method == BOTT:
        proj = projective_term_bott(f) if f.w.rank else RationalClass.zero(f.torus_rank)
    elif method == RECURSION:
        proj = projective_term_recursive(f)
        return proj + determinant_correction(f).embed(proj.rank)
    else:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    return proj + determinant_correction(f)


def lemma_check(f: TwoTermComplex, label: str = "F", methods: tuple[str, ...] = METHODS) -> Report:
    rep = Report("localization")
    closed = inv_wedge_closed(f)
    for method in methods:
        if method == BOTT and not f.w.is_multiplicity_free():
            rep.add(Check(f"{label}: inv_wedge[{method}] = closed", None, anchor=ANCHOR_LEMMA,
                          note="repeated W weights: fixed points not isolated"))
            continue
        with timed() as clock:
            lhs = inv_wedge(f, method)
            rhs = closed.embed(lhs.rank)
        rep.add(Check(f"{label}: inv_wedge[{method}] = closed", lhs == rhs, lhs, rhs, ANCHOR_LEMMA, clock.elapsed))
    return rep


@dataclass(frozen=True)
class FixedComponent:
    intrinsic: RationalClass
    conormal: TwoTermComplex

    def __post_init__(self):
        _require_nontrivial(self.conormal)


def vloc_sum(components: list[FixedComponent], method: str = SERRE) -> RationalClass:
    if not components:
        raise ValueError("virtual localization needs at least one fixed component")
    total = components[0].intrinsic * 0
    for comp in components:
        total = total + comp.intrinsic * inv_wedge(comp.conormal, method)
    return total


def vloc_check(components: list[FixedComponent], total: RationalClass, label: str = "U") -> Report:
    rep = Report("localization")
    with timed() as clock:
        lhs = vloc_sum(components)
    rep.add(Check(f"{label}: sum of fixed-point contributions = [O_U]", lhs == total, lhs, total,
                  ANCHOR_VLOC, clock.elapsed))
    return rep


# -- standard examples ------------------------------------------------------


def affine_space_example(weights: Bundle) -> tuple[list[FixedComponent], RationalClass]:
    """The origin of ``A^n``; the conormal is spanned by the coordinate functions."""
    f = TwoTermComplex(Bundle(weights.torus_rank), weights)
    one = RationalClass.one(weights.torus_rank)
    return [FixedComponent(one, f)], RationalClass(LaurentPoly.one(weights.torus_rank), weights.weights)


def projective_line_example(torus_rank: int, t: tuple[int, ...]) -> tuple[list[FixedComponent], RationalClass]:
    """``P^1`` with cotangent weights ``t`` and ``t^{-1}`` at its two fixed points; total 1."""
    b = Bundle(torus_rank, (t,))
    f0 = TwoTermComplex(Bundle(torus_rank), b)
    f1 = TwoTermComplex(Bundle(torus_rank), b.dual())
    one = RationalClass.one(torus_rank)
    return [FixedComponent(one, f0), FixedComponent(one, f1)], one


def derived_zero_locus_example(
    w: Bundle, s: tuple[int, ...], k: int
) -> tuple[list[FixedComponent], RationalClass]:
    """Derived zero locus ``U`` of the zero section of a line bundle on ``P(w)``, ``w`` of rank 2.

    The Koszul complex gives ``[O_U] = O - L`` with ``L = s O(-k)``; its Euler
    characteristic comes from the projective-space oracle. At the fixed point
    ``p_i`` the conormal is the two-term complex ``{L|p_i -> T^*_{p_i}}``.
    """
    if w.rank != 2:
        raise ValueError("the example lives on a projective line")
    rank = w.torus_rank
    s = tuple(s) if len(s) == rank + 1 else tuple(s) + (0,)
    total = chi_proj(w, 0) - chi_proj(w, -k).shift(s)
    comps = []
    for i, wi in enumerate(w.weights):
        wj = w.weights[1 - i]
        line = add_exp(s, tuple(-k * x for x in wi))
        cot = add_exp(wj, neg_exp(wi))
        comps.append(FixedComponent(RationalClass.one(rank),
                                    TwoTermComplex(Bundle(rank, (line,)), Bundle(rank, (cot,)))))
    return comps, RationalClass.of(total)
