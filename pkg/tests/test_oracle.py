from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kblowup.lambda_ops import Bundle, TwoTermComplex, h_char
from kblowup.laurent import LaurentPoly, RationalClass, rat_eq
from kblowup.oracle import (
    CostGuardError,
    H_BRUTE_MAX_DEGREE,
    chi_proj,
    chi_proj_bott,
    chi_proj_count,
    chi_proj_koszul,
    e_brute,
    h_brute,
)

from strategies import RANK, bundles


def m3(a, b, c):
    return LaurentPoly.monomial((a, b, c, 0))


T1, T2, T3 = m3(1, 0, 0), m3(0, 1, 0), m3(0, 0, 1)
ONE = LaurentPoly.one(3)
ZERO = LaurentPoly.zero(3)
P1 = Bundle.of(3, [(1, 0, 0), (0, 1, 0)])


class TestBruteForce:
    def test_h_brute_examples(self):
        assert h_brute(Bundle.of(3, [(1, 0, 0)]), 3) == T1 ** 3
        assert h_brute(P1, 1) == T1 + T2
        three = h_brute(Bundle.of(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]), 2)
        assert len(three.terms()) == 6
        assert three.coeff((1, 1, 0, 0)) == 1

    def test_cost_guard(self):
        with pytest.raises(CostGuardError):
            h_brute(P1, H_BRUTE_MAX_DEGREE + 1)
        six = Bundle.of(3, [(i, 1, 0) for i in range(6)])
        with pytest.raises(CostGuardError):
            h_brute(six, 1)

    def test_e_brute(self):
        assert e_brute(P1, 2) == T1 * T2
        assert e_brute(P1, 3) == ZERO
        assert e_brute(P1, 0) == ONE


class TestProjectiveLine:
    def test_examples(self):
        assert chi_proj(P1, 0) == ONE
        assert chi_proj(P1, -1) == ZERO
        assert chi_proj(P1, -2) == -(T1 * T2) ** -1

    def test_sections(self):
        assert chi_proj(P1, 2) == T1 * T1 + T1 * T2 + T2 * T2

    def test_two_methods_agree_on_anchor_degrees(self):
        for m in (0, 1):
            counted = chi_proj_count(3, P1.weights, m)
            assert rat_eq(RationalClass.of(counted), chi_proj_bott(3, P1.weights, m))

    def test_repeated_weights_rejected(self):
        with pytest.raises(ValueError):
            chi_proj(Bundle.of(3, [(1, 0, 0), (1, 0, 0)]), 0)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            chi_proj(Bundle.of(3, []), 0)


class TestKoszul:
    def test_empty_v(self):
        f = TwoTermComplex(Bundle.of(3), P1)
        for d in range(-3, 4):
            assert chi_proj_koszul(f, d) == chi_proj(P1, d)

    def test_one_equation(self):
        f = TwoTermComplex(Bundle.of(3, [(0, 0, 1)]), P1)
        assert chi_proj_koszul(f, 0) == ONE

    def test_rank_zero(self):
        # 1 - e1 chi(-1) + e2 chi(-2) = 1 + 0 - 1: the tautological cosection has no zeros
        assert chi_proj_koszul(TwoTermComplex(P1, P1), 0) == ZERO


distinct = bundles(rank=RANK, min_size=1, max_size=4, distinct=True)


@settings(max_examples=120)
@given(distinct, st.integers(-6, 6))
def test_double_computation_agrees(w, m):
    counted = chi_proj_count(RANK, w.weights, m)
    assert rat_eq(RationalClass.of(counted), chi_proj_bott(RANK, w.weights, m))


@settings(max_examples=80)
@given(distinct)
def test_vanishing_window(w):
    for m in range(-w.rank + 1, 0):
        assert chi_proj(w, m).is_zero()


@settings(max_examples=80)
@given(bundles(rank=RANK, max_size=5), st.integers(0, H_BRUTE_MAX_DEGREE))
def test_brute_matches_recurrence(b, n):
    assert h_brute(b, n) == h_char(b, n)
