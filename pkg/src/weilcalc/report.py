"""Check records and their text / JSON renderings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

PASS, FAIL, ERROR = "pass", "fail", "error"


@dataclass
class CheckRecord:
    name: str
    kind: str
    status: str
    anchor: str
    details: dict = field(default_factory=dict)
    duration: float = 0.0  # seconds; left out of JSON so reports stay reproducible

    @property
    def passed(self) -> bool:
        return self.status == PASS


@dataclass
class Report:
    records: list[CheckRecord] = field(default_factory=list)

    def add(self, rec: CheckRecord) -> CheckRecord:
        self.records.append(rec)
        return rec

    def extend(self, other: Report) -> None:
        self.records.extend(other.records)

    def summary(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, ERROR: 0}
        for r in self.records:
            out[r.status] += 1
        return out

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.records)

    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_dict(self) -> dict:
        return {
            "checks": [
                {"name": r.name, "kind": r.kind, "status": r.status, "anchor": r.anchor,
                 "details": _plain(r.details)}
                for r in self.records
            ],
            "summary": self.summary(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        lines = []
        for r in self.records:
            lines.append(f"[{r.status.upper():5}] {r.kind:<11} {r.name}  ({r.anchor})")
            for k, v in r.details.items():
                lines.append(f"          {k}: {_short(_plain(v))}")
        s = self.summary()
        lines.append(f"{len(self.records)} checks: {s[PASS]} passed, {s[FAIL]} failed, {s[ERROR]} errors")
        return "\n".join(lines) + "\n"


def _plain(v):
    """Make a value JSON-friendly with a deterministic shape."""
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    return str(v)


def _short(v) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, ensure_ascii=False)
    return str(v)
