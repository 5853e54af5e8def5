"""Approximation of ``[O_X]`` along a user-supplied sequence of blow-ups.

Each step blows up ``X_i`` along a center with conormal ``C_i`` of rank
``r_i``. The blow-up formula turns ``[O_{X_i}]`` into the pushforward of
``[O_{X_{i+1}}]`` plus a determinant-twisted correction; when the last
blow-up is empty the corrections alone add up to ``[O_X]``.

The pushforward ``p_i`` from the step's local model down to the original
space is not computed: every step carries it as a character factor
``adjust`` multiplying the model's classes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lambda_ops import Bundle, det_inverse, dual_complex, sym_virtual
from .laurent import LaurentPoly, RationalClass
from .rees import BlowupModel, ZERO_SECTION, blowup_piece_via_chart, comparison_rhs
from .report import Check, Report

ANCHOR_FORMULA = "approximation formula: [O_X] = sum (-1)^r_i p_i*(det^-1 sum S^j(F_i^vee))"
ANCHOR_STEP = "blow-up formula for pushforward of the structure sheaf"


class SequenceError(ValueError):
    """The blow-up sequence is malformed or cannot be telescoped."""


@dataclass(frozen=True)
class Step:
    model: BlowupModel
    r: int
    adjust: RationalClass
    blowup_class: RationalClass | None = None

    def pushed_blowup(self) -> RationalClass:
        """Declared ``pr_*[O_Bl]`` in the model, defaulting to the Koszul route."""
        if self.blowup_class is not None:
            return self.blowup_class
        return blowup_piece_via_chart(self.model, 0)


@dataclass
class BlowupSequence:
    steps: list[Step] = field(default_factory=list)
    terminal_empty: bool = True

    def __add__(self, other: "BlowupSequence") -> "BlowupSequence":
        return BlowupSequence(self.steps + other.steps, other.terminal_empty)


def step_term(step: Step) -> RationalClass:
    """``(-1)^r adjust [O_Z] det^{-1} sum_{j=0}^{-r} S^j(C^vee)``; zero when ``r > 0``."""
    m = step.model
    c = m.conormal
    acc = LaurentPoly.zero(m.torus_rank)
    for j in range(-step.r + 1):
        acc = acc + sym_virtual(dual_complex(c), j)
    acc = acc * det_inverse(c) * m.center()
    if step.r % 2:
        acc = -acc
    return step.adjust * acc


def approx_rhs(seq: BlowupSequence) -> RationalClass:
    if not seq.steps:
        raise SequenceError("blow-up sequence has no steps")
    rank = seq.steps[0].model.torus_rank
    total = RationalClass.zero(rank)
    for i, step in enumerate(seq.steps, 1):
        if step.model.torus_rank != rank:
            raise SequenceError(f"step {i}: model on a torus of rank {step.model.torus_rank}, expected {rank}")
        total = total + step_term(step)
    return total


def sequence_telescope_check(seq: BlowupSequence, initial: RationalClass) -> Report:
    """Per-step bookkeeping, then ``initial = approx_rhs(seq)``.

    Step ``i`` is checked for its declared rank, for the blow-up formula on
    its model, and for gluing: the class it hands on must be the next step's
    ambient class (or zero after the last step).
    """
    if not seq.steps:
        raise SequenceError("blow-up sequence has no steps")
    if not seq.terminal_empty:
        raise SequenceError("sequence does not end in an empty blow-up; the telescope does not close")
    rep = Report("approx")
    steps = seq.steps
    n = len(steps)
    first = steps[0].adjust * steps[0].model.ambient()
    rep.add(Check("step 1: ambient class = [O_X]", first == initial, first, initial,
                  "successive blow-ups: the sequence starts at X"))
    for i, step in enumerate(steps, 1):
        m = step.model
        rep.add(Check(f"step {i}: declared r = conormal rank", step.r == m.r, step.r, m.r,
                      "rank bookkeeping of a blow-up step"))
        bl = step.pushed_blowup()
        rhs = comparison_rhs(m)
        rep.add(Check(f"step {i}: blow-up formula on model {m.name or m.kind}", bl == rhs, bl, rhs, ANCHOR_STEP))
        outgoing = step.adjust * bl
        if i < n:
            nxt = steps[i].adjust * steps[i].model.ambient()
            rep.add(Check(f"step {i}: pushed blow-up = ambient class of step {i + 1}", outgoing == nxt,
                          outgoing, nxt, "successive blow-ups: X_(i+1) is the blow-up of X_i"))
        else:
            zero = RationalClass.zero(initial.rank)
            rep.add(Check(f"step {i}: final blow-up is empty", outgoing == zero, outgoing, zero,
                          "terminal step: pushforward of an empty blow-up vanishes"))
    lhs = approx_rhs(seq)
    rep.add(Check("sequence: [O_X] = sum of step corrections", lhs == initial, lhs, initial, ANCHOR_FORMULA))
    return rep


def failing_steps(rep: Report) -> list[int]:
    out = []
    for c in rep.failures():
        if c.name.startswith("step "):
            out.append(int(c.name.split()[1].rstrip(":")))
    return sorted(set(out))


def ambient_inverse(m: BlowupModel) -> RationalClass:
    """``1 / [O_X]`` for a model whose ambient weights are all nontrivial."""
    if m.v.has_trivial_weight():
        raise SequenceError(f"model {m.name or m.kind}: ambient class is not invertible")
    num = LaurentPoly.one(m.torus_rank)
    if m.kind == ZERO_SECTION:
        for w in m.w.weights:
            num = num * (1 - LaurentPoly.monomial(w))
    return RationalClass(num, m.v.weights)


def glue(models: list[BlowupModel], first_adjust: RationalClass | None = None) -> BlowupSequence:
    """Chain models so each step's ambient class matches what the previous step hands on."""
    if not models:
        raise SequenceError("no models to glue")
    rank = models[0].torus_rank
    adjust = first_adjust if first_adjust is not None else RationalClass.one(rank)
    steps = []
    for i, m in enumerate(models):
        if i:
            adjust = steps[-1].adjust * steps[-1].pushed_blowup() * ambient_inverse(m)
        steps.append(Step(m, m.r, adjust))
    return BlowupSequence(steps, terminal_empty=True)


def corrupt(seq: BlowupSequence, index: int, delta: RationalClass | LaurentPoly) -> BlowupSequence:
    """Copy of ``seq`` whose step ``index`` (1-based) declares a wrong blow-up class."""
    steps = list(seq.steps)
    s = steps[index - 1]
    steps[index - 1] = Step(s.model, s.r, s.adjust, s.pushed_blowup() + delta)
    return BlowupSequence(steps, seq.terminal_empty)


def random_chain(rng, torus_rank: int, length: int, span: int = 2) -> list[BlowupModel]:
    """Random chart models closed off by an empty terminal blow-up.

    All weights are nontrivial, so every ambient class can be inverted when
    gluing; the last model has equal ``V1`` and ``V0``.
    """
    def weight() -> tuple[int, ...]:
        while True:
            w = tuple(rng.randint(-span, span) for _ in range(torus_rank))
            if any(w):
                return w

    def distinct(k: int) -> list[tuple[int, ...]]:
        out: list[tuple[int, ...]] = []
        while len(out) < k:
            w = weight()
            if w not in out:
                out.append(w)
        return out

    models = []
    for i in range(length - 1):
        v1 = [weight() for _ in range(rng.randint(0, 2))]
        v0 = distinct(rng.randint(1, 2))
        models.append(BlowupModel.chart(Bundle.of(torus_rank, v1), Bundle.of(torus_rank, v0), f"rand{i + 1}"))
    last = distinct(rng.randint(1, 2))
    models.append(BlowupModel.chart(Bundle.of(torus_rank, last), Bundle.of(torus_rank, last), f"rand{length}"))
    return models
