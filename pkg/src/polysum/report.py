from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


def fmt_rat(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass
class VerifierReport:
    """Outcome of one identity check.

    ``passed`` requires ``lhs == rhs`` and every auxiliary check in
    ``checks``. ``violations`` lists hypotheses of the identity that do not
    hold for the input; such a report is advisory.
    """

    identity: str
    lhs: Fraction
    rhs: Fraction
    diagnostics: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return Fraction(self.lhs) == Fraction(self.rhs) and all(self.checks.values())

    @property
    def advisory(self) -> bool:
        return bool(self.violations)

    def to_json(self) -> dict:
        diags = [{"precondition_violated": v} for v in self.violations]
        diags += [{"check": k, "ok": v} for k, v in sorted(self.checks.items())]
        diags += list(self.diagnostics)
        return {
            "identity": self.identity,
            "lhs": fmt_rat(self.lhs),
            "rhs": fmt_rat(self.rhs),
            "pass": self.passed,
            "diagnostics": diags,
        }

    def __str__(self):
        status = "pass" if self.passed else "FAIL"
        note = " (advisory: " + "; ".join(self.violations) + ")" if self.violations else ""
        return f"{self.identity}: lhs={fmt_rat(self.lhs)} rhs={fmt_rat(self.rhs)} {status}{note}"
