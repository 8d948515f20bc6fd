"""Check results and their text / structured renderings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

PASS = "pass"
FAIL = "fail"
ABORTED = "aborted"


def jsonable(value: Any) -> Any:
    """Convert witness data to plain JSON values (rationals become strings)."""
    if isinstance(value, bool) or value is None or isinstance(value, (str, float)):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return str(value) if value.denominator != 1 else value.numerator
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)


@dataclass
class CheckReport:
    check: str
    status: str
    details: str = ""
    witness: Any = None
    duration: float | None = None
    parts: list["CheckReport"] = field(default_factory=list)

    def __post_init__(self):
        if self.status not in (PASS, FAIL, ABORTED):
            raise ValueError(f"unknown status {self.status!r}")
        self.witness = jsonable(self.witness)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def records(self, timing: bool = False) -> list[dict]:
        """Flat structured form: this report, then its parts (names prefixed)."""
        rec = {"check": self.check, "status": self.status, "details": self.details,
               "duration": round(self.duration, 6) if timing and self.duration is not None else None}
        if self.witness is not None:
            rec["witness"] = self.witness
        out = [rec]
        for part in self.parts:
            for sub in part.records(timing):
                sub["check"] = f"{self.check}/{sub['check']}"
                out.append(sub)
        return out

    def render_text(self) -> str:
        lines = [f"[{self.status.upper():7}] {self.check}"
                 + (f"  ({self.duration:.3f}s)" if self.duration is not None else "")]
        for line in self.details.splitlines():
            lines.append(f"          {line}")
        if self.witness is not None and self.status != PASS:
            lines.append(f"          witness: {json.dumps(self.witness, sort_keys=True)}")
        for part in self.parts:
            lines.extend("    " + line for line in part.render_text().splitlines())
        return "\n".join(lines)


def render_structured(reports: list[CheckReport], timing: bool = False) -> str:
    records = [r for rep in reports for r in rep.records(timing)]
    return dumps_records(records)


def dumps_records(records: list[dict]) -> str:
    return json.dumps(records, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def combine(check: str, parts: list[CheckReport], details: str = "") -> CheckReport:
    """Aggregate: aborted if any part aborted, else fail if any failed."""
    statuses = {p.status for p in parts}
    status = ABORTED if ABORTED in statuses else FAIL if FAIL in statuses else PASS
    return CheckReport(check, status, details, parts=parts)

