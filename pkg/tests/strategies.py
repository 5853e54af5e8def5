"""Hypothesis strategies shared by the test modules."""

from __future__ import annotations

from hypothesis import strategies as st

from kblowup.lambda_ops import Bundle, TwoTermComplex
from kblowup.laurent import LaurentPoly

RANK = 3


def exponents(rank: int = RANK, span: int = 3, q: bool = True):
    torus = st.tuples(*[st.integers(-span, span) for _ in range(rank)])
    qs = st.integers(0, 3) if q else st.just(0)
    return st.builds(lambda t, k: t + (k,), torus, qs)


def laurent(rank: int = RANK, max_terms: int = 5, span: int = 3, q: bool = True):
    return st.dictionaries(exponents(rank, span, q), st.integers(-6, 6), max_size=max_terms).map(
        lambda d: LaurentPoly(rank, d)
    )


def weight(rank: int = RANK, span: int = 2):
    return st.tuples(*[st.integers(-span, span) for _ in range(rank)]).filter(any)


def bundles(rank: int = RANK, min_size: int = 0, max_size: int = 3, distinct: bool = False):
    seq = st.lists(weight(rank), min_size=min_size, max_size=max_size, unique=distinct)
    return seq.map(lambda ws: Bundle.of(rank, ws))


def complexes(rank: int = RANK, max_v: int = 2, max_w: int = 3, min_w: int = 0, distinct_w: bool = False):
    return st.builds(
        TwoTermComplex,
        bundles(rank, 0, max_v),
        bundles(rank, min_w, max_w, distinct_w),
    )
