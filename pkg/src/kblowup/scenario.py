"""Scenario files: TOML documents naming models and the suites to run on them.

See ``docs/scenario-format.md`` for the grammar. Parse errors carry a line
(and, for syntax errors, a column) pointing into the source text.
"""

from __future__ import annotations

import hashlib
import re
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - exercised only on 3.10
    import tomli as tomllib

from .diagonal import MAX_R, TWISTS, DiagonalScenario
from .localization import METHODS
from .oracle import H_BRUTE_MAX_DEGREE, H_BRUTE_MAX_RANK
from .lambda_ops import Bundle
from .rees import CHART, ZERO_SECTION, BlowupModel, ModelError

SUITES = (
    "kernel",
    "serre",
    "vanishing",
    "lattice",
    "comparison",
    "rees-presentation",
    "diagonal",
    "localization",
    "approx",
)

TOP_KEYS = {"torus_rank", "seed", "truncation", "description", "models", "diagonal", "sequences", "checks"}
MODEL_KEYS = {"kind", "v", "w"}
DIAGONAL_KEYS = {"weights"}
SEQUENCE_KEYS = {"steps", "corrupt_step"}

LIST_PARAMS = ("models", "scenarios", "sequences", "pool", "methods", "ranks")

DEFAULT_SCENARIO = "default_scenario.toml"


class ScenarioError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None, source: str = ""):
        self.line, self.column, self.source = line, column, source
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            where = f"{source}, {where}: " if source else f"{where}: "
        elif source:
            where = f"{source}: "
        super().__init__(where + message)


@dataclass(frozen=True)
class CheckSpec:
    suite: str
    params: dict[str, Any]
    index: int
    line: int | None = None


@dataclass(frozen=True)
class SequenceSpec:
    name: str
    steps: tuple[str, ...]
    corrupt_step: int = 0


@dataclass
class Scenario:
    torus_rank: int
    models: dict[str, BlowupModel] = field(default_factory=dict)
    diagonals: dict[str, DiagonalScenario] = field(default_factory=dict)
    sequences: dict[str, SequenceSpec] = field(default_factory=dict)
    checks: list[CheckSpec] = field(default_factory=list)
    seed: int = 0
    truncation: int = 12
    description: str = ""
    source: str = "<memory>"
    sha256: str = ""


class _Locator:
    """Best-effort line lookup for semantic errors (TOML parsers drop positions)."""

    def __init__(self, text: str):
        self.lines = text.splitlines()

    def find(self, *patterns: str, start: int = 1) -> int | None:
        for pattern in patterns:
            rx = re.compile(pattern)
            for i in range(max(start, 1) - 1, len(self.lines)):
                if rx.search(self.lines[i]):
                    return i + 1
        return None

    def table(self, section: str, name: str) -> int | None:
        esc = re.escape(name)
        return self.find(rf"^\s*\[\s*{section}\s*\.\s*\"?{esc}\"?\s*\]", rf"^\s*{esc}\s*=")

    def check(self, index: int) -> int | None:
        hits = [i + 1 for i, ln in enumerate(self.lines) if re.match(r"^\s*\[\[\s*checks\s*\]\]", ln)]
        return hits[index] if index < len(hits) else None


def _weights(value: Any, rank: int, what: str, err) -> list[tuple[int, ...]]:
    if not isinstance(value, list):
        raise err(f"{what} must be a list of integer vectors")
    out = []
    for w in value:
        if not isinstance(w, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in w):
            raise err(f"{what}: weight {w!r} is not an integer vector")
        if len(w) not in (rank, rank + 1):
            raise err(f"{what}: weight {w} has length {len(w)}, expected {rank} (or {rank + 1} with a q slot)")
        out.append(tuple(w))
    return out


def parse_scenario(text: str, source: str = "<memory>") -> Scenario:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+), column (\d+)", str(exc))
        line, col = (int(m.group(1)), int(m.group(2))) if m else (None, None)
        msg = re.sub(r"\s*\(at line \d+, column \d+\)", "", str(exc))
        raise ScenarioError(f"syntax error: {msg}", line, col, source) from None
    loc = _Locator(text)

    def fail(message: str, line: int | None = None):
        return ScenarioError(message, line, None, source)

    unknown = set(doc) - TOP_KEYS
    if unknown:
        key = sorted(unknown)[0]
        raise fail(f"unknown top-level key {key!r}", loc.find(rf"^\s*\[*\s*{re.escape(key)}\b"))
    rank = doc.get("torus_rank")
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
        raise fail("torus_rank must be a positive integer", loc.find(r"^\s*torus_rank\s*="))
    seed = doc.get("seed", 0)
    truncation = doc.get("truncation", 12)
    for key, val in (("seed", seed), ("truncation", truncation)):
        if not isinstance(val, int) or isinstance(val, bool) or val < 0:
            raise fail(f"{key} must be a non-negative integer", loc.find(rf"^\s*{key}\s*="))

    sc = Scenario(torus_rank=rank, seed=seed, truncation=truncation,
                  description=str(doc.get("description", "")), source=source,
                  sha256=hashlib.sha256(text.encode()).hexdigest())

    for name, body in doc.get("models", {}).items():
        line = loc.table("models", name)
        err = lambda m, line=line: fail(f"model {name!r}: {m}", line)  # noqa: E731
        if not isinstance(body, dict):
            raise err("must be a table")
        extra = set(body) - MODEL_KEYS
        if extra:
            raise err(f"unknown key {sorted(extra)[0]!r}")
        kind = body.get("kind", ZERO_SECTION)
        if kind not in (ZERO_SECTION, CHART):
            raise err(f"kind must be {ZERO_SECTION!r} or {CHART!r}")
        v = Bundle.of(rank, _weights(body.get("v", []), rank, "v", err))
        w = Bundle.of(rank, _weights(body.get("w", []), rank, "w", err))
        try:
            sc.models[name] = BlowupModel(kind, v, w, name)
        except ModelError as exc:
            raise err(str(exc)) from None

    for name, body in doc.get("diagonal", {}).items():
        line = loc.table("diagonal", name)
        err = lambda m, line=line: fail(f"diagonal {name!r}: {m}", line)  # noqa: E731
        if not isinstance(body, dict) or set(body) - DIAGONAL_KEYS:
            raise err("must be a table with a single 'weights' key")
        try:
            sc.diagonals[name] = DiagonalScenario(Bundle.of(rank, _weights(body.get("weights"), rank, "weights", err)),
                                                  name=name)
        except ValueError as exc:
            if isinstance(exc, ScenarioError):
                raise
            raise err(str(exc)) from None

    for name, body in doc.get("sequences", {}).items():
        line = loc.table("sequences", name)
        err = lambda m, line=line: fail(f"sequence {name!r}: {m}", line)  # noqa: E731
        if not isinstance(body, dict) or set(body) - SEQUENCE_KEYS:
            raise err(f"must be a table with keys {sorted(SEQUENCE_KEYS)}")
        steps = body.get("steps")
        if not isinstance(steps, list) or not steps or not all(isinstance(s, str) for s in steps):
            raise err("steps must be a nonempty list of model names")
        for s in steps:
            if s not in sc.models:
                raise err(f"unknown model {s!r}")
        corrupt = body.get("corrupt_step", 0)
        if not isinstance(corrupt, int) or isinstance(corrupt, bool) or not 0 <= corrupt <= len(steps):
            raise err(f"corrupt_step must be an integer in [0, {len(steps)}]")
        sc.sequences[name] = SequenceSpec(name, tuple(steps), corrupt)

    checks = doc.get("checks", [])
    if not isinstance(checks, list):
        raise fail("checks must be an array of tables ([[checks]])", loc.find(r"^\s*checks\s*="))
    for i, body in enumerate(checks):
        line = loc.check(i)
        if not isinstance(body, dict) or "suite" not in body:
            raise fail(f"check #{i + 1} has no 'suite' key", line)
        suite = body["suite"]
        if suite not in SUITES:
            raise fail(f"unknown suite {suite!r}; known suites: {', '.join(SUITES)}",
                       loc.find(rf"suite\s*=\s*\"{re.escape(str(suite))}\"", start=line or 1) or line)
        params = {k: v for k, v in body.items() if k != "suite"}
        _validate_params(sc, suite, params, lambda m, line=line: fail(f"check #{i + 1} ({suite}): {m}", line))
        sc.checks.append(CheckSpec(suite, params, i, line))
    return sc


_RANGE_PAIRS = {"serre": ("dmin", "dmax")}


def _validate_params(sc: Scenario, suite: str, params: dict[str, Any], err) -> None:
    def names(key: str, table: dict) -> None:
        if key in params:
            val = params[key]
            if not isinstance(val, list) or not all(isinstance(x, str) for x in val):
                raise err(f"{key} must be a list of names")
            for x in val:
                if x not in table:
                    raise err(f"unknown name {x!r} in {key}")

    for key, val in params.items():
        if key in LIST_PARAMS or key == "twist":
            continue
        if not isinstance(val, (int, bool)):
            raise err(f"parameter {key!r} must be an integer or boolean")
    names("models", sc.models)
    names("scenarios", sc.diagonals)
    names("sequences", sc.sequences)
    if "pool" in params:
        _weights(params["pool"], sc.torus_rank, "pool", err)
    pair = _RANGE_PAIRS.get(suite)
    if pair and pair[0] in params and pair[1] in params and params[pair[0]] > params[pair[1]]:
        raise err(f"empty degree range [{params[pair[0]]}, {params[pair[1]]}]")
    if suite == "lattice" and params.get("lo", -3) >= params.get("hi", 3):
        raise err("lattice grid needs lo < hi")
    if suite == "diagonal" and params.get("twist", "both") not in ("both",) + TWISTS:
        raise err(f"twist must be 'both' or one of {TWISTS}")
    if suite == "localization":
        bad = [m for m in params.get("methods", []) if m not in METHODS]
        if bad:
            raise err(f"unknown method {bad[0]!r}; choose from {', '.join(METHODS)}")
    if suite == "diagonal":
        ranks = params.get("ranks", [])
        if not all(isinstance(r, int) and 2 <= r <= MAX_R for r in ranks):
            raise err(f"ranks must be integers in [2, {MAX_R}]")
    if suite == "kernel" and (params.get("max_degree", 0) > H_BRUTE_MAX_DEGREE
                              or params.get("h_max_rank", 0) > H_BRUTE_MAX_RANK):
        raise err(f"brute-force grid limited to degree {H_BRUTE_MAX_DEGREE}, rank {H_BRUTE_MAX_RANK}")
    if suite == "rees-presentation" and params.get("order", 0) > 20:
        raise err("truncation order above 20 is refused")


def load_scenario(path: str | Path) -> Scenario:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario: {exc.strerror}", source=str(p)) from None
    return parse_scenario(text, str(p))


def default_scenario_text() -> str:
    return resources.files("kblowup").joinpath(DEFAULT_SCENARIO).read_text(encoding="utf-8")


def load_default() -> Scenario:
    return parse_scenario(default_scenario_text(), "<default>")

