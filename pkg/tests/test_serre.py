from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kblowup.lambda_ops import TwoTermComplex, det_inverse, sym_virtual
from kblowup.laurent import LaurentPoly
from kblowup.oracle import chi_proj_koszul
from kblowup.serre import dual_tail, push_O, serre_duality_defect, serre_regime_check

from strategies import complexes


def m3(a, b, c):
    return LaurentPoly.monomial((a, b, c, 0))


W1, W2 = m3(1, 0, 0), m3(0, 1, 0)
PLANE = TwoTermComplex.of(3, w=[(1, 0, 0), (0, 1, 0)])


class TestPushExamples:
    def test_sections_regime(self):
        assert push_O(PLANE, 1) == W1 + W2

    def test_window(self):
        assert push_O(PLANE, -1).is_zero()

    def test_dual_regime(self):
        assert push_O(PLANE, -2) == -(W1 * W2) ** -1

    def test_large_degree_is_symmetric_power(self):
        f = TwoTermComplex.of(3, v=[(0, 0, 1)], w=[(1, 0, 0), (0, 1, 0), (1, 1, 0)])
        for d in range(0, 6):
            assert push_O(f, d) == sym_virtual(f, d)
            assert dual_tail(f, d).is_zero()

    def test_negative_rank_has_no_window(self):
        f = TwoTermComplex.of(3, v=[(1, 0, 0), (0, 0, 1)], w=[(0, 1, 0)])
        assert f.rank == -1
        for d in range(-4, 5):
            assert push_O(f, d) == chi_proj_koszul(f, d)


class TestRegimeCheck:
    def test_line_cofiber(self):
        f = TwoTermComplex.of(3, w=[(1, 0, 0)])
        rep = serre_regime_check(f, -1, -1)
        assert rep.passed
        assert push_O(f, -1) - sym_virtual(f, -1) == W1 ** -1 == det_inverse(f)

    def test_rank_two_grid(self):
        rep = serre_regime_check(PLANE, -3, 3)
        assert rep.passed
        names = [c.name for c in rep.checks]
        assert sum("Koszul" in n for n in names) == 7
        assert any("cofiber" in n for n in names)

    def test_one_equation(self):
        f = TwoTermComplex.of(3, v=[(0, 0, 1)], w=[(1, 0, 0), (0, 1, 0)])
        assert push_O(f, 0) == chi_proj_koszul(f, 0) == LaurentPoly.one(3)
        assert serre_regime_check(f, 0, 0).passed

    def test_empty_range(self):
        with pytest.raises(ValueError):
            serre_regime_check(PLANE, 2, 1)

    def test_detects_wrong_sign(self, monkeypatch):
        import kblowup.serre as serre

        monkeypatch.setattr(serre, "dual_tail", lambda f, d: -dual_tail(f, d))
        rep = serre_regime_check(PLANE, -3, 0)
        assert not rep.passed


@settings(max_examples=150)
@given(complexes(min_w=1, distinct_w=True), st.integers(-4, 4))
def test_closed_form_matches_koszul(f, d):
    assert push_O(f, d) == chi_proj_koszul(f, d)


@settings(max_examples=100)
@given(complexes(min_w=1, distinct_w=True))
def test_overlap_window_vanishes(f):
    for d in range(-f.rank + 1, 0):
        assert push_O(f, d).is_zero()


@settings(max_examples=150)
@given(complexes(), st.integers(-6, 6))
def test_duality_shadow(f, d):
    lhs, rhs = serre_duality_defect(f, d)
    assert lhs == rhs
