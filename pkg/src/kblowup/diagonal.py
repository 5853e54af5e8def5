"""Diagonal resolution of the blow-up of a torus-fixed point in affine space.

With ``Z`` a point of ``X = A^r`` (conormal weights ``c``), the diagonal of
``Bl x_X Bl`` has a finite filtration whose graded pieces are pushforwards of
``S^i(C_beta)`` from ``P(C) x P(C)``, ``0 <= i <= r - 2``. Pushing the whole
telescope to ``X`` and cancelling the two ends leaves the reduced identity

    sum_i chi(P x P, S^i C_beta) = sum_{m=0}^{r-2} h_m(c),

which is what :func:`telescope_check` tests. The class of ``C_beta`` depends on
whether the relative cotangent bundle of the first factor is twisted by
``O(1)`` or ``O(-1)``; both options are built so the identity can decide.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lambda_ops import Bundle, TwoTermComplex, h_char, sym_virtual
from .laurent import LaurentPoly
from .oracle import chi_proj
from .report import Check, Report, timed

PLUS_ONE = "plus_one"
MINUS_ONE = "minus_one"
TWISTS = (PLUS_ONE, MINUS_ONE)
MAX_R = 5

ANCHOR = "diagonal resolution of the blow-up: telescope of W_(i, r-1)"


@dataclass(frozen=True)
class DiagonalScenario:
    weights: Bundle
    twist: str = PLUS_ONE
    name: str = ""

    def __post_init__(self):
        if self.twist not in TWISTS:
            raise ValueError(f"twist must be one of {TWISTS}, got {self.twist!r}")
        if self.r < 2:
            raise ValueError("diagonal scenarios need r >= 2")
        if not self.weights.is_multiplicity_free() or self.weights.has_trivial_weight():
            raise ValueError("conormal weights must be distinct and nontrivial")

    @property
    def r(self) -> int:
        return self.weights.rank

    def with_twist(self, twist: str) -> "DiagonalScenario":
        return DiagonalScenario(self.weights, twist, self.name)


def cbeta_complex(s: DiagonalScenario) -> TwoTermComplex:
    """Virtual class of ``C_beta`` on a torus with two extra slots for ``O_{P1}(1)``, ``O_{P2}(1)``.

    Euler sequence: ``[L_{P/Z}] = [C](-1) - 1``. ``C_beta`` is the cone of
    ``L_{P1/Z}(+-1) -> O_{P2}(1)``.
    """
    k = s.weights.torus_rank
    rank = k + 2
    c = s.weights.embed(rank)
    zero = (0,) * (rank + 1)
    x1 = zero[:k] + (1, 0) + zero[-1:]
    x2 = zero[:k] + (0, 1) + zero[-1:]
    if s.twist == PLUS_ONE:
        # L(1) = C - x1
        return TwoTermComplex(c, Bundle(rank, (x1, x2)))
    # L(-1) = C x1^-2 - x1^-1
    x1_inv = tuple(-e for e in x1)
    return TwoTermComplex(c.twist(tuple(2 * e for e in x1_inv)), Bundle(rank, (x1_inv, x2)))


def _chi_product(poly: LaurentPoly, c: Bundle) -> LaurentPoly:
    k = c.torus_rank
    total = LaurentPoly.zero(k)
    for (a, b), coeff in poly.split_variables((k, k + 1)).items():
        total = total + coeff * chi_proj(c, a) * chi_proj(c, b)
    return total


def cbeta_chi(s: DiagonalScenario, i: int) -> LaurentPoly:
    """Equivariant Euler characteristic of ``S^i(C_beta)`` over ``P(C) x P(C)``."""
    if not 0 <= i <= s.r - 2:
        raise ValueError(f"graded piece index {i} outside [0, {s.r - 2}]")
    return _chi_product(sym_virtual(cbeta_complex(s), i), s.weights)


def telescope_rhs(s: DiagonalScenario) -> LaurentPoly:
    total = LaurentPoly.zero(s.weights.torus_rank)
    for m in range(s.r - 1):
        total = total + h_char(s.weights, m)
    return total


def telescope_check(s: DiagonalScenario) -> Report:
    if s.r > MAX_R:
        raise ValueError(f"diagonal telescope limited to r <= {MAX_R}")
    rep = Report("diagonal")
    rep.notes.append(
        "reduced identity: [O_{Bl x Bl}] - [Delta_* O(r-1)] pushed to X is sum_{m<r-1} h_m(c),"
        " and equals the sum of the graded pieces"
    )
    with timed() as clock:
        lhs = LaurentPoly.zero(s.weights.torus_rank)
        for i in range(s.r - 1):
            lhs = lhs + cbeta_chi(s, i)
        rhs = telescope_rhs(s)
    rep.add(Check(f"{s.name or 'diag'}(r={s.r}, twist={s.twist}): sum chi(S^i C_beta) = sum h_m",
                  lhs == rhs, lhs, rhs, ANCHOR, clock.elapsed))
    return rep


def adjudicate_twist(scenarios: list[DiagonalScenario]) -> tuple[dict[str, list[bool]], str | None]:
    """Run every scenario under both twists.

    Returns per-twist outcomes (in scenario order) and the twist that passes on
    every scenario with ``r >= 3``, if exactly one does.
    """
    outcomes = {t: [telescope_check(s.with_twist(t)).passed for s in scenarios] for t in TWISTS}
    winners = [
        t for t in TWISTS
        if all(ok for s, ok in zip(scenarios, outcomes[t]) if s.r >= 3)
    ]
    return outcomes, winners[0] if len(winners) == 1 else None
