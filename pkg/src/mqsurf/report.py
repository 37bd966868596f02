"""Verification report: a flat, ordered list of checks plus rendering."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

STATUSES = ("pass", "fail", "assumption")


@dataclass(frozen=True)
class Check:
    id: str
    description: str
    paper_location: str  # topic label used for grouping
    expected: Any
    computed: Any
    status: str

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "description": self.description,
            "paper_location": self.paper_location,
            "expected": _jsonable(self.expected),
            "computed": _jsonable(self.computed),
            "status": self.status,
        }


def _jsonable(v):
    if isinstance(v, bool) or v is None:
        return str(v).lower() if isinstance(v, bool) else "none"
    if isinstance(v, int):
        return v
    return str(v)


def compare(id: str, description: str, topic: str, expected, computed) -> Check:
    return Check(id, description, topic, expected, computed, "pass" if expected == computed else "fail")


def assumption(id: str, description: str, topic: str, value) -> Check:
    return Check(id, description, topic, value, value, "assumption")


@dataclass
class VerificationReport:
    config: dict
    checks: list[Check] = field(default_factory=list)

    def add(self, check: Check):
        if any(c.id == check.id for c in self.checks):
            raise ValueError(f"duplicate check id {check.id!r}")
        self.checks.append(check)

    def extend(self, checks):
        for c in checks:
            self.add(c)

    @property
    def summary(self) -> dict:
        out = {s: 0 for s in STATUSES}
        for c in self.checks:
            out[c.status] += 1
        return out

    @property
    def overall(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == "fail"]

    def as_dict(self) -> dict:
        return {
            "config": self.config,
            "checks": [c.as_dict() for c in self.checks],
            "summary": self.summary,
            "overall": self.overall,
        }


def render_report(rep: VerificationReport, format: str = "text") -> str:
    if format == "json":
        return json.dumps(rep.as_dict(), indent=2, sort_keys=False, ensure_ascii=True) + "\n"
    if format != "text":
        raise ValueError(f"unknown format {format!r}")
    return _render_text(rep)


def _render_text(rep: VerificationReport) -> str:
    rows = [c.as_dict() for c in rep.checks]
    w_id = max([len(r["id"]) for r in rows] + [5])
    w_exp = max([len(str(r["expected"])) for r in rows] + [8])
    w_cmp = max([len(str(r["computed"])) for r in rows] + [8])
    lines = []
    topics: list[str] = []
    for r in rows:
        if r["paper_location"] not in topics:
            topics.append(r["paper_location"])
    for topic in topics:
        lines.append(f"== {topic} ==")
        lines.append(f"  {'check':<{w_id}}  {'expected':>{w_exp}}  {'computed':>{w_cmp}}  status")
        for r in rows:
            if r["paper_location"] == topic:
                lines.append(
                    f"  {r['id']:<{w_id}}  {str(r['expected']):>{w_exp}}  {str(r['computed']):>{w_cmp}}  {r['status']}"
                )
        lines.append("")
    s = rep.summary
    total = sum(s.values())
    lines.append(
        f"{total} checks: {s['pass']} pass, {s['fail']} fail, {s['assumption']} assumption"
    )
    lines.append(f"overall: {'PASS' if rep.overall else 'FAIL'}")
    return "\n".join(lines) + "\n"
