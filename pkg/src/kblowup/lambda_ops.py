"""Symmetric and exterior powers of equivariant bundles and two-term complexes.

A bundle is split into its torus weights; a two-term complex ``{V -> W}``
(``W`` in degree 0) is the pair of weight multisets, with class ``[W] - [V]``.
Symmetric powers of the virtual class use the lambda-ring expansion
``s_n(W - V) = sum_i (-1)^i e_i(V) h_{n-i}(W)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .laurent import Exponent, LaurentPoly, RankMismatchError, add_exp, neg_exp, scale_exp, torus_dual_exp


def _as_weight(rank: int, w: Sequence[int]) -> Exponent:
    w = tuple(int(x) for x in w)
    if len(w) == rank:
        return w + (0,)
    if len(w) == rank + 1:
        return w
    raise RankMismatchError(f"weight {w} does not fit a rank-{rank} torus")


@dataclass(frozen=True)
class Bundle:
    """A split equivariant vector bundle over a point: a multiset of weights.

    Weights are exponent vectors of length ``torus_rank + 1`` (the last slot is
    the q-grading); shorter vectors of length ``torus_rank`` get ``q^0``.
    """

    torus_rank: int
    weights: tuple[Exponent, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "weights", tuple(sorted(_as_weight(self.torus_rank, w) for w in self.weights))
        )

    @classmethod
    def of(cls, torus_rank: int, weights: Iterable[Sequence[int]] = ()) -> "Bundle":
        return cls(torus_rank, tuple(tuple(w) for w in weights))

    @property
    def rank(self) -> int:
        return len(self.weights)

    def character(self) -> LaurentPoly:
        return LaurentPoly(self.torus_rank, {w: self.weights.count(w) for w in set(self.weights)})

    def dual(self) -> "Bundle":
        return Bundle(self.torus_rank, tuple(torus_dual_exp(w) for w in self.weights))

    def twist(self, m: Exponent) -> "Bundle":
        """Tensor with the character ``x^m``."""
        return Bundle(self.torus_rank, tuple(add_exp(w, m) for w in self.weights))

    def det_exponent(self) -> Exponent:
        total = (0,) * (self.torus_rank + 1)
        for w in self.weights:
            total = add_exp(total, w)
        return total

    def __add__(self, other: "Bundle") -> "Bundle":
        if other.torus_rank != self.torus_rank:
            raise RankMismatchError("bundles on different tori")
        return Bundle(self.torus_rank, self.weights + other.weights)

    def embed(self, new_rank: int) -> "Bundle":
        pad = (0,) * (new_rank - self.torus_rank)
        return Bundle(new_rank, tuple(w[:-1] + pad + w[-1:] for w in self.weights))

    def has_trivial_weight(self) -> bool:
        return any(not any(w) for w in self.weights)

    def is_multiplicity_free(self) -> bool:
        return len(set(self.weights)) == len(self.weights)


@dataclass(frozen=True)
class TwoTermComplex:
    """``{V -> W}`` of tor-amplitude [0, 1]; ``v`` sits in degree 1, ``w`` in degree 0."""

    v: Bundle
    w: Bundle

    def __post_init__(self):
        if self.v.torus_rank != self.w.torus_rank:
            raise RankMismatchError("V and W live on different tori")

    @classmethod
    def of(cls, torus_rank: int, v: Iterable[Sequence[int]] = (), w: Iterable[Sequence[int]] = ()):
        return cls(Bundle.of(torus_rank, v), Bundle.of(torus_rank, w))

    @property
    def torus_rank(self) -> int:
        return self.v.torus_rank

    @property
    def rank(self) -> int:
        return self.w.rank - self.v.rank

    def character(self) -> LaurentPoly:
        return self.w.character() - self.v.character()

    def det_exponent(self) -> Exponent:
        return add_exp(self.w.det_exponent(), neg_exp(self.v.det_exponent()))

    def has_trivial_weight(self) -> bool:
        return self.v.has_trivial_weight() or self.w.has_trivial_weight()

    def __add__(self, other: "TwoTermComplex") -> "TwoTermComplex":
        return TwoTermComplex(self.v + other.v, self.w + other.w)

    def embed(self, new_rank: int) -> "TwoTermComplex":
        return TwoTermComplex(self.v.embed(new_rank), self.w.embed(new_rank))


def _power_sum(b: Bundle, k: int) -> LaurentPoly:
    return Bundle(b.torus_rank, tuple(scale_exp(w, k) for w in b.weights)).character()


@lru_cache(maxsize=None)
def _h_table(b: Bundle, n: int) -> tuple[LaurentPoly, ...]:
    # Newton: n h_n = sum_{i=1}^n p_i h_{n-i}
    hs = [LaurentPoly.one(b.torus_rank)]
    powers = [None] + [_power_sum(b, i) for i in range(1, n + 1)]
    for m in range(1, n + 1):
        acc = LaurentPoly.zero(b.torus_rank)
        for i in range(1, m + 1):
            acc = acc + powers[i] * hs[m - i]
        hs.append(acc.exact_div(m))
    return tuple(hs)


@lru_cache(maxsize=None)
def _e_table(b: Bundle) -> tuple[LaurentPoly, ...]:
    # Newton: n e_n = sum_{i=1}^n (-1)^{i-1} p_i e_{n-i}
    n = b.rank
    es = [LaurentPoly.one(b.torus_rank)]
    powers = [None] + [_power_sum(b, i) for i in range(1, n + 1)]
    for m in range(1, n + 1):
        acc = LaurentPoly.zero(b.torus_rank)
        for i in range(1, m + 1):
            term = powers[i] * es[m - i]
            acc = acc + term if i % 2 else acc - term
        es.append(acc.exact_div(m))
    return tuple(es)


def h_char(b: Bundle, n: int) -> LaurentPoly:
    """Character of ``S^n`` of a bundle; zero for ``n < 0``."""
    if n < 0:
        return LaurentPoly.zero(b.torus_rank)
    if b.rank == 0:
        return LaurentPoly.one(b.torus_rank) if n == 0 else LaurentPoly.zero(b.torus_rank)
    return _h_table(b, n)[n]


def e_char(b: Bundle, n: int) -> LaurentPoly:
    """Character of the exterior power ``wedge^n``."""
    if n < 0 or n > b.rank:
        return LaurentPoly.zero(b.torus_rank)
    return _e_table(b)[n]


@lru_cache(maxsize=None)
def sym_virtual(f: TwoTermComplex, n: int) -> LaurentPoly:
    """``[S^n F]`` for ``F = {V -> W}``: ``sum_i (-1)^i e_i(V) h_{n-i}(W)``."""
    if n < 0:
        return LaurentPoly.zero(f.torus_rank)
    total = LaurentPoly.zero(f.torus_rank)
    for i in range(min(n, f.v.rank) + 1):
        term = e_char(f.v, i) * h_char(f.w, n - i)
        total = total - term if i % 2 else total + term
    return total


def dual_complex(f: TwoTermComplex) -> TwoTermComplex:
    """Termwise dual ``{V^vee -> W^vee}`` carrying the class ``[W^vee] - [V^vee]``.

    Homological shifts are folded into the class: the symmetric powers of the
    result are the lambda-ring powers of the dual class.
    """
    return TwoTermComplex(f.v.dual(), f.w.dual())


def det_class(f: TwoTermComplex) -> LaurentPoly:
    """``det(W) det(V)^{-1}``, a unit monomial."""
    return LaurentPoly.monomial(f.det_exponent())


def det_inverse(f: TwoTermComplex) -> LaurentPoly:
    return LaurentPoly.monomial(neg_exp(f.det_exponent()))
