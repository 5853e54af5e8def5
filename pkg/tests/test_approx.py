from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kblowup.approx import (
    BlowupSequence,
    SequenceError,
    Step,
    approx_rhs,
    corrupt,
    failing_steps,
    glue,
    random_chain,
    sequence_telescope_check,
    step_term,
)
from kblowup.lambda_ops import Bundle, TwoTermComplex, det_inverse, dual_complex, sym_virtual
from kblowup.laurent import LaurentPoly, RationalClass
from kblowup.rees import BlowupModel

ONE = RationalClass.one(3)


def chart(v1, v0, name=""):
    return BlowupModel.chart(Bundle.of(3, v1), Bundle.of(3, v0), name)


EMPTY_R0 = chart([(1, 0, 0)], [(1, 0, 0)], "empty")
CHAIN = [chart([(0, 1, 0)], [(1, 0, 0)], "c1"), chart([(-1, 1, 0)], [(-1, 1, 0)], "c2")]


class TestRhs:
    def test_single_rank_zero_step(self):
        seq = glue([EMPTY_R0])
        term = step_term(seq.steps[0])
        # (-1)^0 [O_Z] det^-1 S^0 with det = 1
        assert term == RationalClass.of(1 - LaurentPoly.monomial((1, 0, 0, 0)))
        assert sequence_telescope_check(seq, EMPTY_R0.ambient()).passed

    def test_positive_ranks_contribute_nothing(self):
        plane = BlowupModel.zero_section(TwoTermComplex.of(3, [], [(1, 0, 0), (0, 1, 0)]))
        line = chart([], [(0, 0, 1)])
        seq = BlowupSequence([Step(plane, 2, ONE), Step(line, 1, ONE)])
        assert approx_rhs(seq) == RationalClass.zero(3)

    def test_sign_follows_rank_parity(self):
        neg = chart([(1, 0, 0), (0, 1, 0)], [(1, 1, 0)])
        step = Step(neg, neg.r, ONE)
        assert neg.r == -1
        c = neg.conormal
        inner = (sym_virtual(dual_complex(c), 0) + sym_virtual(dual_complex(c), 1)) * det_inverse(c) * neg.center()
        assert step_term(step) == RationalClass.of(-inner)

    def test_empty_sequence(self):
        with pytest.raises(SequenceError):
            approx_rhs(BlowupSequence([]))


class TestTelescope:
    def test_two_step_chain(self):
        seq = glue(CHAIN)
        assert [s.adjust for s in seq.steps] == [ONE, ONE]
        rep = sequence_telescope_check(seq, CHAIN[0].ambient())
        assert rep.passed, [c.name for c in rep.failures()]

    def test_three_step_chain(self):
        models = [chart([(0, 0, 1)], [(1, 0, 0), (0, 1, 0)], "a")] + CHAIN
        seq = glue(models)
        assert sequence_telescope_check(seq, models[0].ambient()).passed

    def test_corruption_names_step(self):
        seq = corrupt(glue(CHAIN), 1, ONE)
        rep = sequence_telescope_check(seq, CHAIN[0].ambient())
        assert not rep.passed
        assert failing_steps(rep) == [1]

    def test_wrong_initial_class(self):
        rep = sequence_telescope_check(glue(CHAIN), CHAIN[0].ambient() + ONE)
        assert not rep.passed
        assert failing_steps(rep) == [1]

    def test_wrong_declared_rank(self):
        seq = glue(CHAIN)
        s = seq.steps[1]
        seq.steps[1] = Step(s.model, s.r + 1, s.adjust)
        rep = sequence_telescope_check(seq, CHAIN[0].ambient())
        assert failing_steps(rep) == [2]

    def test_non_terminal_sequence(self):
        seq = glue(CHAIN)
        seq.terminal_empty = False
        with pytest.raises(SequenceError):
            sequence_telescope_check(seq, CHAIN[0].ambient())

    def test_no_models(self):
        with pytest.raises(SequenceError):
            glue([])


@settings(max_examples=40)
@given(st.integers(0, 10_000), st.integers(1, 4))
def test_random_chains_close(seed, length):
    models = random_chain(random.Random(seed), 3, length)
    seq = glue(models)
    rep = sequence_telescope_check(seq, models[0].ambient())
    assert rep.passed, [c.name for c in rep.failures()]


@settings(max_examples=40)
@given(st.integers(0, 10_000), st.integers(2, 4), st.data())
def test_concatenation_is_additive(seed, length, data):
    seq = glue(random_chain(random.Random(seed), 3, length))
    cut = data.draw(st.integers(1, length - 1))
    head = BlowupSequence(seq.steps[:cut], terminal_empty=False)
    tail = BlowupSequence(seq.steps[cut:])
    assert approx_rhs(head + tail) == approx_rhs(head) + approx_rhs(tail)
    # the head's corrections account for [O_X] minus what it hands on
    handed = seq.steps[cut - 1].adjust * seq.steps[cut - 1].pushed_blowup()
    assert approx_rhs(head) == seq.steps[0].adjust * seq.steps[0].model.ambient() - handed
