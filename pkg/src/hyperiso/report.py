"""Check bookkeeping shared by the verification entry points."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import DomainError

VERDICTS = ("pass", "fail", "report-only", "hypothesis-violated")

__all__ = ["CheckResult", "VerificationReport", "VERDICTS"]


@dataclass(frozen=True)
class CheckResult:
    """One named inequality or identity with its measured slack.

    For inequalities of the form lhs <= rhs the slack is rhs - lhs, so
    passing means slack >= -tolerance.  Identities record the absolute
    deviation the same way.  `report-only` rows carry context without
    affecting the overall outcome, and `hypothesis-violated` marks
    instances where the statement's assumptions fail, which is a finding
    about the instance rather than a numerical failure.
    """

    name: str
    lhs: float
    rhs: float
    slack: float
    tolerance: float
    verdict: str

    def __post_init__(self) -> None:
        if self.verdict not in VERDICTS:
            raise DomainError(f"unknown verdict {self.verdict!r}")


def _num(x: float):
    if math.isfinite(x):
        return float(x)
    return repr(float(x))


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)

    def add(
        self,
        name: str,
        lhs: float,
        rhs: float,
        slack: float,
        tolerance: float,
        verdict: str,
    ) -> CheckResult:
        row = CheckResult(name, float(lhs), float(rhs), float(slack),
                          float(tolerance), verdict)
        self.checks.append(row)
        return row

    def extend(self, other: "VerificationReport") -> None:
        self.checks.extend(other.checks)

    @property
    def passed(self) -> bool:
        return all(c.verdict != "fail" for c in self.checks)

    def counts(self) -> dict[str, int]:
        out = {v: 0 for v in VERDICTS}
        for c in self.checks:
            out[c.verdict] += 1
        return out

    def to_json(self, indent: int = 2) -> str:
        doc = {
            "checks": [
                {
                    "name": c.name,
                    "lhs": _num(c.lhs),
                    "rhs": _num(c.rhs),
                    "slack": _num(c.slack),
                    "tolerance": _num(c.tolerance),
                    "verdict": c.verdict,
                }
                for c in self.checks
            ]
        }
        return json.dumps(doc, indent=indent)
