"""Brute-force ground truth: monomial enumeration, Euler characteristics of
twists on projective space, and Koszul alternating sums.

Nothing here calls into the closed-form modules (``lambda_ops``, ``serre``,
``rees``); symmetric and exterior powers are enumerated directly.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, combinations_with_replacement

from .laurent import Exponent, LaurentPoly, RationalClass, add_exp, neg_exp, rat_eq, scale_exp, unit_exponent

H_BRUTE_MAX_DEGREE = 10
H_BRUTE_MAX_RANK = 5


class CostGuardError(ValueError):
    """Requested enumeration is larger than the oracle is willing to do."""


class OracleDisagreement(AssertionError):
    """The two internal computations of an oracle value differ."""


def _weights_of(b) -> tuple[Exponent, ...]:
    return tuple(b.weights)


def _rank_of(b) -> int:
    return b.torus_rank


def _monomial_sum(rank: int, weights: tuple[Exponent, ...], n: int) -> LaurentPoly:
    if n < 0:
        return LaurentPoly.zero(rank)
    terms: dict[Exponent, int] = {}
    zero = unit_exponent(rank)
    for combo in combinations_with_replacement(range(len(weights)), n):
        e = zero
        for i in combo:
            e = add_exp(e, weights[i])
        terms[e] = terms.get(e, 0) + 1
    return LaurentPoly(rank, terms)


def _subset_sum(rank: int, weights: tuple[Exponent, ...], n: int) -> LaurentPoly:
    if n < 0 or n > len(weights):
        return LaurentPoly.zero(rank)
    terms: dict[Exponent, int] = {}
    zero = unit_exponent(rank)
    for combo in combinations(range(len(weights)), n):
        e = zero
        for i in combo:
            e = add_exp(e, weights[i])
        terms[e] = terms.get(e, 0) + 1
    return LaurentPoly(rank, terms)


def h_brute(b, n: int) -> LaurentPoly:
    """Sum of the characters of all degree-``n`` monomials in the weights of ``b``."""
    if n > H_BRUTE_MAX_DEGREE or b.rank > H_BRUTE_MAX_RANK:
        raise CostGuardError(
            f"h_brute limited to n <= {H_BRUTE_MAX_DEGREE}, rank <= {H_BRUTE_MAX_RANK}"
        )
    return _monomial_sum(_rank_of(b), _weights_of(b), n)


def e_brute(b, n: int) -> LaurentPoly:
    """Sum over ``n``-element subsets of the weights."""
    return _subset_sum(_rank_of(b), _weights_of(b), n)


def _check_projective(weights: tuple[Exponent, ...]) -> None:
    if not weights:
        raise ValueError("projectivization of a rank-0 bundle is empty")
    if len(set(weights)) != len(weights):
        raise ValueError("weights must be pairwise distinct for isolated fixed points")


def chi_proj_count(rank: int, weights: tuple[Exponent, ...], m: int) -> LaurentPoly:
    """Cohomology count: sections for ``m >= 0``, top cohomology for ``m <= -n``."""
    n = len(weights)
    if m >= 0:
        return _monomial_sum(rank, weights, m)
    if m <= -n:
        inv_det = unit_exponent(rank)
        for w in weights:
            inv_det = add_exp(inv_det, neg_exp(w))
        top = _monomial_sum(rank, weights, -m - n).dual().shift(inv_det)
        return top if n % 2 else -top
    return LaurentPoly.zero(rank)


def chi_proj_bott(rank: int, weights: tuple[Exponent, ...], m: int) -> RationalClass:
    """Fixed-point sum ``sum_i w_i^m / prod_{j != i} (1 - w_j / w_i)``."""
    total = RationalClass.zero(rank)
    for i, wi in enumerate(weights):
        num = LaurentPoly.monomial(scale_exp(wi, m))
        factors = [add_exp(wj, neg_exp(wi)) for j, wj in enumerate(weights) if j != i]
        total = total + RationalClass(num, factors)
    return total


@lru_cache(maxsize=None)
def _chi_proj_cached(rank: int, weights: tuple[Exponent, ...], m: int) -> LaurentPoly:
    counted = chi_proj_count(rank, weights, m)
    bott = chi_proj_bott(rank, weights, m)
    if not rat_eq(RationalClass.of(counted), bott):
        raise OracleDisagreement(f"chi_proj mismatch for weights {weights}, m={m}")
    return counted


def chi_proj(w, m: int) -> LaurentPoly:
    """Equivariant Euler characteristic of ``O(m)`` on the projectivization of ``w``.

    Quotient convention: ``H^0(O(1)) = W``. Computed by counting cohomology and
    again by the fixed-point formula; the two must agree.
    """
    weights = tuple(sorted(_weights_of(w)))
    _check_projective(weights)
    return _chi_proj_cached(_rank_of(w), weights, m)


def chi_proj_koszul(f, d: int) -> LaurentPoly:
    """Euler characteristic of ``O(d)`` on ``P(F)`` for ``F = {V -> W}``.

    ``P(F)`` is cut out of ``P(W)`` by the cosection ``V(-1) -> O``, so the
    Koszul complex gives ``sum_i (-1)^i e_i(V) chi(P(W), O(d - i))``.
    """
    rank = _rank_of(f.w)
    total = LaurentPoly.zero(rank)
    for i in range(f.v.rank + 1):
        term = e_brute(f.v, i) * chi_proj(f.w, d - i)
        total = total - term if i % 2 else total + term
    return total
