"""Verification reports shared by every checking operation.

A report is an ordered list of checks; ordering is fixed by
construction so that repeated runs serialize byte-identically.  Wall
times are recorded but excluded from serialization unless explicitly
requested, for the same reason.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
MODULO_COMPLETION = "modulo-completion"

SCHEMA = "qforge-report/1"


@dataclass
class Check:
    id: str
    law: str
    status: str = PASS
    witness: str | None = None
    seconds: float | None = None

    @property
    def ok(self) -> bool:
        return self.status != FAIL


@dataclass
class VerificationReport:
    suite: str
    checks: list[Check] = field(default_factory=list)

    def add(self, id: str, law: str, ok: bool, witness: str | None = None,
            seconds: float | None = None, soft: bool = False) -> Check:
        status = PASS if ok else (MODULO_COMPLETION if soft else FAIL)
        if ok:
            witness = None
        c = Check(id=id, law=law, status=status, witness=witness, seconds=seconds)
        self.checks.append(c)
        return c

    def merge(self, other: "VerificationReport", prefix: str = "") -> None:
        for c in other.checks:
            cid = f"{prefix}{c.id}" if prefix else c.id
            self.checks.append(Check(cid, c.law, c.status, c.witness, c.seconds))

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def to_dict(self, timings: bool = False) -> dict:
        checks = []
        for c in self.checks:
            d = {"id": c.id, "law": c.law, "status": c.status}
            if c.witness is not None:
                d["witness"] = c.witness
            if timings and c.seconds is not None:
                d["wall_time"] = c.seconds
            checks.append(d)
        return {"schema": SCHEMA, "suite": self.suite, "checks": checks}

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings=timings), indent=2) + "\n"

    def to_text(self, timings: bool = False) -> str:
        lines = [f"suite: {self.suite}"]
        for c in self.checks:
            mark = {"pass": "PASS", "fail": "FAIL", "modulo-completion": "PASS*"}[c.status]
            line = f"  [{mark}] {c.id}: {c.law}"
            if timings and c.seconds is not None:
                line += f"  ({c.seconds:.3f}s)"
            lines.append(line)
            if c.witness:
                lines.append(f"         witness: {c.witness}")
        n_fail = len(self.failures())
        lines.append(f"  {len(self.checks)} checks, {n_fail} failed")
        return "\n".join(lines) + "\n"
