"""Check suites run by the scenario runner.

Each suite takes a parsed :class:`Scenario`, the parameters of one
``[[checks]]`` entry and the run context, and returns a :class:`Report`.
Suites are pure functions of their inputs; randomized grids draw from a
``random.Random`` seeded by the scenario seed and the check index.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Any, Callable

from . import approx, diagonal, localization, oracle, rees
from .lambda_ops import Bundle, TwoTermComplex, e_char, h_char, sym_virtual
from .laurent import LaurentPoly, RationalClass, rat_eq, rat_series
from .report import Check, Report, timed
from .scenario import SUITES, Scenario
from .serre import serre_duality_defect, serre_regime_check


@dataclass(frozen=True)
class Context:
    truncation: int = 12
    seed: int = 0


def _rng(ctx: Context, index: int, suite: str) -> random.Random:
    return random.Random(f"{ctx.seed}:{index}:{suite}")


def _unit_weights(rank: int) -> list[tuple[int, ...]]:
    return [tuple(int(i == j) for j in range(rank)) for i in range(rank)]


def _pool(sc: Scenario, params: dict[str, Any], default: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    return [tuple(w) for w in params.get("pool", default)]


def _default_pool(rank: int) -> list[tuple[int, ...]]:
    units = _unit_weights(rank)
    extra = tuple(1 if j < 2 else 0 for j in range(rank)) if rank >= 2 else (2,)
    return units + [extra]


def _models(sc: Scenario, params: dict[str, Any], kind: str | None = None) -> list[rees.BlowupModel]:
    names = params.get("models", list(sc.models))
    ms = [sc.models[n] for n in names]
    return [m for m in ms if kind is None or m.kind == kind]


# -- kernel -----------------------------------------------------------------


def suite_kernel(sc: Scenario, params: dict[str, Any], ctx: Context, index: int) -> Report:
    rep = Report("kernel")
    rank = sc.torus_rank
    order = params.get("order", ctx.truncation)
    pool = _pool(sc, params, _default_pool(rank))
    lift = (0,) * rank + (1,)

    complexes = [m.conormal for m in sc.models.values()]
    for v in combinations_with_replacement(pool[:3], 1):
        complexes.append(TwoTermComplex.of(rank, v, pool[:2]))
    seen = set()
    for f in complexes:
        if f in seen:
            continue
        seen.add(f)
        g = TwoTermComplex(f.v.twist(lift), f.w.twist(lift))
        with timed() as clock:
            lhs = LaurentPoly.zero(rank)
            for n in range(order + 1):
                lhs = lhs + sym_virtual(g, n)
            num = LaurentPoly.one(rank)
            for v in g.v.weights:
                num = num * (1 - LaurentPoly.monomial(v))
            rhs = rat_series(RationalClass(num, g.w.weights), order)
        rep.add(Check(f"generating function of S^n(W - V) to q^{order}, V={list(f.v.weights)} W={list(f.w.weights)}",
                      lhs == rhs, lhs, rhs, "lambda-ring: sum S^n(F) q^n = prod(1 - vq) / prod(1 - wq)",
                      clock.elapsed))

    # weight multisets up to the oracle's cost guard
    max_n = params.get("max_degree", oracle.H_BRUTE_MAX_DEGREE)
    h_rank = params.get("h_max_rank", oracle.H_BRUTE_MAX_RANK)
    for k in range(1, h_rank + 1):
        for ws in combinations_with_replacement(pool, k):
            b = Bundle.of(rank, ws)
            bad = [n for n in range(max_n + 1) if h_char(b, n) != oracle.h_brute(b, n)]
            rep.add(Check(f"h_n recurrence = monomial enumeration, n <= {max_n}, weights {list(ws)}",
                          not bad, bad, [], "symmetric powers: complete homogeneous functions"))
            bad = [n for n in range(1, max_n + 1)
                   if sum((e_char(b, i) * h_char(b, n - i) * (-1) ** i for i in range(n + 1)),
                          LaurentPoly.zero(rank))]
            rep.add(Check(f"sum (-1)^i e_i h_(n-i) = 0 for 1 <= n <= {max_n}, weights {list(ws)}",
                          not bad, bad, [], "lambda-ring: lambda_{-1} times sigma is 1"))

    mmin, mmax = params.get("mmin", -6), params.get("mmax", 6)
    max_rank = params.get("max_rank", 4)
    for k in range(1, min(max_rank, len(pool)) + 1):
        for ws in combinations(pool, k):
            ws = tuple(sorted(tuple(w) + (0,) for w in ws))
            bad = [m for m in range(mmin, mmax + 1)
                   if not rat_eq(RationalClass.of(oracle.chi_proj_count(rank, ws, m)),
                                 oracle.chi_proj_bott(rank, ws, m))]
            window = [m for m in range(-k + 1, 0) if oracle.chi_proj_count(rank, ws, m)]
            rep.add(Check(f"chi(P^{k - 1}, O(m)) cohomology count = fixed-point sum, {mmin} <= m <= {mmax}, weights {[w[:-1] for w in ws]}",
                          not bad and not window, bad + window, [], "equivariant Serre computation on projective space"))

    rng = _rng(ctx, index, "kernel")
    cases = params.get("ring_cases", 50)
    bad = 0
    for _ in range(cases):
        a, b, c = (_random_poly(rng, rank) for _ in range(3))
        if (a * b) * c != a * (b * c) or a * (b + c) != a * b + a * c or a * b != b * a:
            bad += 1
        if (a * b).dual() != a.dual() * b.dual():
            bad += 1
    rep.add(Check(f"ring axioms and dual multiplicativity on {cases} seeded random triples", bad == 0, bad, 0,
                  "representation ring of the torus"))
    return rep


def _random_poly(rng: random.Random, rank: int) -> LaurentPoly:
    terms = {}
    for _ in range(rng.randint(0, 5)):
        e = tuple(rng.randint(-3, 3) for _ in range(rank)) + (rng.randint(0, 2),)
        terms[e] = rng.randint(-5, 5)
    return LaurentPoly(rank, terms)


# -- serre -------------------------------------------------------------------


def serre_grid(rank: int, pool: list[tuple[int, ...]], max_v: int, max_w: int) -> list[TwoTermComplex]:
    out = []
    for k in range(1, max_w + 1):
        for w in combinations(pool, k):
            for j in range(max_v + 1):
                for v in combinations_with_replacement(pool, j):
                    out.append(TwoTermComplex.of(rank, v, w))
    return out


def suite_serre(sc: Scenario, params: dict[str, Any], ctx: Context, index: int) -> Report:
    rep = Report("serre")
    rank = sc.torus_rank
    pool = _pool(sc, params, _default_pool(rank))
    dmin, dmax = params.get("dmin", -4), params.get("dmax", 4)
    grid = serre_grid(rank, pool, params.get("max_v", 2), params.get("max_w", 3))
    for f in grid:
        label = f"V={[w[:-1] for w in f.v.weights]} W={[w[:-1] for w in f.w.weights]}"
        rep.extend(serre_regime_check(f, dmin, dmax, label))
        bad = [d for d in range(dmin, dmax + 1) if (lambda p: p[0] != p[1])(serre_duality_defect(f, d))]
        rep.add(Check(f"{label}: dual(pr_*O(d)) = (-1)^(r-1) det pr_*O(-d-r) on [{dmin},{dmax}]",
                      not bad, bad, [], "relative Serre duality on the projectivization"))
    rep.notes.append(f"{len(grid)} complexes, degrees {dmin}..{dmax}")
    return rep


# -- blow-up suites ------------------------------------------------------------


def suite_vanishing(sc: Scenario, params: dict[str, Any], ctx: Context, index: int) -> Report:
    rep = Report("vanishing")
    margin = params.get("margin", 3)
    witnesses = []
    for m in _models(sc, params):
        bound = abs(m.r) + margin
        rep.extend(rees.vanishing_check(m, -bound, bound))
        if m.r <= 0 and rees.blowup_piece_via_chart(m, -m.r) != rees.rees_piece(m, -m.r):
            witnesses.append(m.name)
    rep.add(Check("non-vacuity: some model with r <= 0 has pr_*O_Bl(-r) != R^(-r)", bool(witnesses),
                  witnesses, None, "vanishing theorem: the bound d > -r is sharp"))
    return rep


def suite_lattice(sc: Scenario, params: dict[str, Any], ctx: Context, index: int) -> Report:
    rep = Report("lattice")
    lo, hi = params.get("lo", -3), params.get("hi", 3)
    for m in _models(sc, params):
        rep.extend(rees.verify_lattice(m, lo, hi))
    return rep


def suite_comparison(sc: Scenario, params: dict[str, Any], ctx: Context, index: int) -> Report:
    rep = Report("comparison")
    for m in _models(sc, params):
        rep.extend(rees.comparison_formula(m))
    return rep


def suite_rees_presentation(sc: Scenario, params: dict[str, Any], ctx: Context, index: int) -> Report:
    rep = Report("rees-presentation")
    order = params.get("order", ctx.truncation)
    for m in _models(sc, params, rees.ZERO_SECTION):
        rep.extend(rees.rees_presentation_char(m, order))
    return rep


# -- diagonal ----------------------------------------------------------------


def _random_diagonals(rng: random.Random, rank: int, ranks: list[int], count: int) -> list[diagonal.DiagonalScenario]:
    out = []
    for r in ranks:
        for j in range(count):
            ws: list[tuple[int, ...]] = []
            while len(ws) < r:
                w = tuple(rng.randint(-2, 2) for _ in range(rank))
                if any(w) and w not in ws:
                    ws.append(w)
            out.append(diagonal.DiagonalScenario(Bundle.of(rank, ws), name=f"random-r{r}-{j + 1}"))
    return out


def suite_diagonal(sc: Scenario, params: dict[str, Any], ctx: Context, index: int) -> Report:
    rep = Report("diagonal")
    names = params.get("scenarios", list(sc.diagonals))
    scen = [sc.diagonals[n] for n in names]
    scen += _random_diagonals(_rng(ctx, index, "diagonal"), sc.torus_rank,
                              params.get("ranks", []), params.get("random_per_rank", 0))
    twist = params.get("twist", "both")
    if twist != "both":
        for s in scen:
            rep.extend(diagonal.telescope_check(s.with_twist(twist)))
        return rep

    outcomes: dict[str, list[bool]] = {}
    for t in diagonal.TWISTS:
        outcomes[t] = []
        for s in scen:
            sub = diagonal.telescope_check(s.with_twist(t))
            outcomes[t].append(sub.passed)
            c = sub.checks[0]
            if s.r == 2:
                rep.add(Check(f"{c.name} (degenerate, twist-independent)", c.passed, c.lhs, c.rhs, c.anchor, c.elapsed))
            else:
                rep.add(Check(c.name, c.passed, c.lhs, c.rhs, c.anchor, c.elapsed,
                              note="identity holds" if c.passed else "identity fails", info=True))
    high = [i for i, s in enumerate(scen) if s.r >= 3]
    winners = [t for t in diagonal.TWISTS if all(outcomes[t][i] for i in high)]
    rep.add(Check("exactly one twist convention satisfies the telescope for every r >= 3",
                  len(winners) == 1 and bool(high), winners, None, diagonal.ANCHOR))
    if len(winners) == 1:
        loser = [t for t in diagonal.TWISTS if t != winners[0]][0]
        failed_at = sorted({scen[i].r for i in high if not outcomes[loser][i]})
        rep.notes.append(f"adopted twist: {winners[0]}; {loser} fails at r in {failed_at}")
        for r in sorted({scen[i].r for i in high}):
            idx = [i for i in high if scen[i].r == r]
            rep.add(Check(f"adopted twist {winners[0]} passes on all {len(idx)} weight assignments with r={r}",
                          all(outcomes[winners[0]][i] for i in idx), len(idx), None, diagonal.ANCHOR))
            stable = len({outcomes[loser][i] for i in idx}) == 1
            rep.add(Check(f"rejected twist {loser}: outcome at r={r} is the same for every weight assignment",
                          stable, [outcomes[loser][i] for i in idx], None, diagonal.ANCHOR))
    return rep


# -- localization ----------------------------------------------------------------


def suite_localization(sc: Scenario, params: dict[str, Any], ctx: Context, index: int) -> Report:
    rep = Report("localization")
    rank = sc.torus_rank
    pool = _pool(sc, params, _default_pool(rank) + [tuple(-x for x in _unit_weights(rank)[0])])
    methods = tuple(params.get("methods", localization.METHODS))
    grid_all = []
    for k in range(0, 4):
        for w in combinations(pool, k):
            for j in range(0, 3):
                for v in combinations_with_replacement(pool, j):
                    grid_all.append(TwoTermComplex.of(rank, v, w))
    size = min(params.get("grid", 24), len(grid_all))
    rng = _rng(ctx, index, "localization")
    grid = [grid_all[i] for i in sorted(rng.sample(range(len(grid_all)), size))]
    for f in grid:
        label = f"V={[w[:-1] for w in f.v.weights]} W={[w[:-1] for w in f.w.weights]}"
        rep.extend(localization.lemma_check(f, label, methods))
    for f, g in zip(grid[::2], grid[1::2]):
        lhs = localization.inv_wedge(f + g)
        rhs = localization.inv_wedge(f) * localization.inv_wedge(g)
        rep.add(Check(f"inv_wedge multiplicative on a direct sum of ranks {f.rank}, {g.rank}", lhs == rhs, lhs, rhs,
                      localization.ANCHOR_LEMMA))
    rep.notes.append(f"{size} complexes sampled from {len(grid_all)}")

    w1, w2 = pool[0], pool[1]
    s = pool[2] if len(pool) > 2 else pool[0]
    rep.extend(localization.vloc_check(*localization.affine_space_example(Bundle.of(rank, [w1, w2])), "affine plane"))
    rep.extend(localization.vloc_check(*localization.projective_line_example(rank, tuple(w1) + (0,)), "P^1 Atiyah-Bott"))
    rep.extend(localization.vloc_check(
        *localization.derived_zero_locus_example(Bundle.of(rank, [w1, w2]), tuple(s), params.get("zero_locus_degree", 2)),
        "derived zero locus on P^1",
    ))
    return rep


# -- approx --------------------------------------------------------------------------


def suite_approx(sc: Scenario, params: dict[str, Any], ctx: Context, index: int) -> Report:
    rep = Report("approx")
    names = params.get("sequences", list(sc.sequences))
    for name in names:
        entry = sc.sequences[name]
        models = [sc.models[n] for n in entry.steps]
        seq = approx.glue(models)
        initial = models[0].ambient()
        if entry.corrupt_step:
            bad = approx.corrupt(seq, entry.corrupt_step, LaurentPoly.one(sc.torus_rank))
            sub = approx.sequence_telescope_check(bad, initial)
            blamed = approx.failing_steps(sub)
            rep.add(Check(f"{name}: corruption at step {entry.corrupt_step} is detected and attributed",
                          blamed == [entry.corrupt_step] and not sub.passed, blamed, [entry.corrupt_step],
                          approx.ANCHOR_FORMULA, note="negative control"))
        else:
            sub = approx.sequence_telescope_check(seq, initial)
            for c in sub.checks:
                c.name = f"{name}: {c.name}"
            rep.extend(sub)
    rng = _rng(ctx, index, "approx")
    for j in range(params.get("random_chains", 0)):
        models = approx.random_chain(rng, sc.torus_rank, rng.randint(1, 4))
        seq = approx.glue(models)
        sub = approx.sequence_telescope_check(seq, models[0].ambient())
        rep.add(Check(f"random chain {j + 1} ({len(models)} steps): telescope closes", sub.passed,
                      approx.approx_rhs(seq), models[0].ambient(), approx.ANCHOR_FORMULA,
                      note="" if sub.passed else "; ".join(c.name for c in sub.failures())))
    return rep


REGISTRY: dict[str, Callable[[Scenario, dict, Context, int], Report]] = {
    "kernel": suite_kernel,
    "serre": suite_serre,
    "vanishing": suite_vanishing,
    "lattice": suite_lattice,
    "comparison": suite_comparison,
    "rees-presentation": suite_rees_presentation,
    "diagonal": suite_diagonal,
    "localization": suite_localization,
    "approx": suite_approx,
}
assert set(REGISTRY) == set(SUITES)


def run_check(sc: Scenario, suite: str, params: dict[str, Any], ctx: Context, index: int) -> Report:
    return REGISTRY[suite](sc, params, ctx, index)
