from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kblowup.diagonal import (
    MINUS_ONE,
    PLUS_ONE,
    DiagonalScenario,
    adjudicate_twist,
    cbeta_chi,
    telescope_check,
    telescope_rhs,
)
from kblowup.lambda_ops import Bundle, h_char
from kblowup.laurent import LaurentPoly

from strategies import weight


def scen(ws, twist=PLUS_ONE):
    return DiagonalScenario(Bundle.of(3, ws), twist)


R2 = [(1, 0, 0), (0, 1, 0)]
R3 = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
R4 = R3 + [(1, 1, 0)]


class TestGradedPieces:
    def test_structure_sheaf(self):
        for twist in (PLUS_ONE, MINUS_ONE):
            assert cbeta_chi(scen(R2, twist), 0) == LaurentPoly.one(3)

    def test_first_piece_plus_one(self):
        s = scen(R3)
        assert cbeta_chi(s, 1) == h_char(s.weights, 1)

    def test_range(self):
        s = scen(R3)
        with pytest.raises(ValueError):
            cbeta_chi(s, 2)
        with pytest.raises(ValueError):
            cbeta_chi(s, -1)


class TestTelescope:
    def test_rank_two_is_twist_independent(self):
        for twist in (PLUS_ONE, MINUS_ONE):
            rep = telescope_check(scen(R2, twist))
            assert rep.passed
            assert rep.checks[0].lhs == LaurentPoly.one(3)

    def test_plus_one_passes(self):
        for ws in (R3, R4):
            assert telescope_check(scen(ws)).passed

    def test_minus_one_fails_for_rank_four(self):
        # recorded observation: the O(-1) reading breaks the identity from r = 4 on
        assert not telescope_check(scen(R4, MINUS_ONE)).passed

    def test_adjudication(self):
        scenarios = [scen(R3), scen(R4), scen([(1, 0, 0), (0, 2, 0), (1, 0, 1)])]
        outcomes, adopted = adjudicate_twist(scenarios)
        assert adopted == PLUS_ONE
        assert all(outcomes[PLUS_ONE])

    def test_cost_guard(self):
        six = scen([(i, 1, 0) for i in range(6)])
        with pytest.raises(ValueError):
            telescope_check(six)

    def test_invalid_scenarios(self):
        with pytest.raises(ValueError):
            scen([(1, 0, 0)])
        with pytest.raises(ValueError):
            scen([(1, 0, 0), (1, 0, 0)])
        with pytest.raises(ValueError):
            scen([(1, 0, 0), (0, 0, 0)])
        with pytest.raises(ValueError):
            scen(R2, "plus_two")


def test_permutation_symmetry():
    base = scen(R3)
    lhs0 = sum((cbeta_chi(base, i) for i in range(2)), LaurentPoly.zero(3))
    for perm in itertools.permutations(R3):
        s = scen(list(perm))
        total = sum((cbeta_chi(s, i) for i in range(2)), LaurentPoly.zero(3))
        assert total == lhs0
        assert telescope_rhs(s) == telescope_rhs(base)


@settings(max_examples=25)
@given(st.lists(weight(), min_size=2, max_size=4, unique=True))
def test_plus_one_on_random_weights(ws):
    assert telescope_check(scen(ws)).passed
