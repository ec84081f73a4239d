"""Validation reports: ordered lists of named pass/fail checks with witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    name: str
    ok: bool
    witness: Any = None
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "verdict": "pass" if self.ok else "fail",
                "witness": render_witness(self.witness), "detail": self.detail}


@dataclass
class Report:
    title: str = ""
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, ok: bool, witness: Any = None, detail: str = "") -> Check:
        c = Check(name, bool(ok), witness, detail)
        self.checks.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.ok, c.witness, c.detail))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def names(self) -> list[str]:
        return [c.name for c in self.checks]

    def to_json(self) -> dict:
        return {"title": self.title, "ok": self.ok, "checks": [c.to_json() for c in self.checks]}

    def __str__(self):
        lines = [self.title] if self.title else []
        for c in self.checks:
            tag = "PASS" if c.ok else "FAIL"
            w = "" if c.ok or c.witness is None else f"  witness: {render_witness(c.witness)}"
            lines.append(f"[{tag}] {c.name}{w}")
        return "\n".join(lines)


def render_witness(w: Any):
    """JSON-friendly, deterministic rendering of witnesses."""
    from fractions import Fraction

    if w is None or isinstance(w, (bool, int, str)):
        return w
    if isinstance(w, Fraction):
        return str(w)
    if isinstance(w, dict):
        return {str(k): render_witness(v) for k, v in w.items()}
    if isinstance(w, (list, tuple)):
        return [render_witness(x) for x in w]
    return str(w)
