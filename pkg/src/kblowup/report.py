"""Check results and their text / structured renderings."""

from __future__ import annotations

import hashlib
import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Iterator

from .laurent import LaurentPoly, RationalClass

SCHEMA_VERSION = "kblowup-report/1"

PASS, FAIL, SKIP, INFO = "pass", "fail", "skip", "info"
STATUSES = (PASS, FAIL, SKIP, INFO)


class _Clock:
    elapsed: float | None = None


@contextmanager
def timed() -> Iterator[_Clock]:
    clock = _Clock()
    start = time.perf_counter()
    try:
        yield clock
    finally:
        clock.elapsed = time.perf_counter() - start


def serialize_value(value: Any) -> Any:
    """JSON-ready form of a compared value."""
    if value is None:
        return None
    if isinstance(value, LaurentPoly):
        return {"kind": "laurent", "rank": value.rank, "terms": value.to_records()}
    if isinstance(value, RationalClass):
        return {"kind": "rational", "rank": value.rank, **value.to_record()}
    if isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, (list, tuple)):
        return [serialize_value(v) for v in value]
    return str(value)


def digest(value: Any) -> str:
    blob = json.dumps(serialize_value(value), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class Check:
    name: str
    passed: bool | None
    lhs: Any = None
    rhs: Any = None
    anchor: str = ""
    elapsed: float | None = None
    note: str = ""
    info: bool = False

    @property
    def status(self) -> str:
        """``info`` rows record an observation without asserting anything."""
        if self.info:
            return INFO
        if self.passed is None:
            return SKIP
        return PASS if self.passed else FAIL

    def to_dict(self, full_classes: bool = False, timings: bool = False) -> dict:
        row: dict[str, Any] = {"name": self.name, "status": self.status, "anchor": self.anchor}
        if self.status == FAIL or full_classes:
            row["lhs"] = serialize_value(self.lhs)
            row["rhs"] = serialize_value(self.rhs)
        else:
            row["lhs_sha256"] = digest(self.lhs)
            row["rhs_sha256"] = digest(self.rhs)
        if self.note:
            row["note"] = self.note
        if timings:
            row["wall_time_s"] = self.elapsed
        return row


@dataclass
class Report:
    suite: str
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    def extend(self, other: "Report") -> "Report":
        self.checks.extend(other.checks)
        self.notes.extend(other.notes)
        return self

    @property
    def passed(self) -> bool:
        return all(c.status != FAIL for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def counts(self) -> dict[str, int]:
        out = {k: 0 for k in STATUSES}
        for c in self.checks:
            out[c.status] += 1
        return out

    def to_dict(self, full_classes: bool = False, timings: bool = False) -> dict:
        return {
            "suite": self.suite,
            "status": PASS if self.passed else FAIL,
            "counts": self.counts(),
            "notes": list(self.notes),
            "checks": [c.to_dict(full_classes, timings) for c in self.checks],
        }


VerificationReport = Report


def _tally(counts: dict[str, int]) -> str:
    return ", ".join(f"{counts[k]} {k}" for k in STATUSES)


def render_text(reports: list[Report], header: list[str] | None = None, timings: bool = False) -> str:
    lines = list(header or [])
    total = {k: 0 for k in STATUSES}
    for rep in reports:
        counts = rep.counts()
        for k, v in counts.items():
            total[k] += v
        status = "PASS" if rep.passed else "FAIL"
        lines.append(f"== suite {rep.suite}: {status} ({_tally(counts)})")
        for note in rep.notes:
            lines.append(f"   note: {note}")
        for c in rep.checks:
            stamp = f" [{c.elapsed:.4f}s]" if timings and c.elapsed is not None else ""
            lines.append(f"  [{c.status.upper()}] {c.name}  <{c.anchor}>{stamp}")
            if c.note:
                lines.append(f"      note: {c.note}")
            if c.status == FAIL:
                lines.append(f"      lhs: {c.lhs}")
                lines.append(f"      rhs: {c.rhs}")
    overall = "PASS" if all(r.passed for r in reports) else "FAIL"
    lines.append(f"== overall: {overall} ({_tally(total)})")
    return "\n".join(lines) + "\n"
