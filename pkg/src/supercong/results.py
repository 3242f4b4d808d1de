"""Verdict records shared by the identity checks, congruence verifiers and sweeps."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Union

from .arith import PadicResidue

Value = Union[PadicResidue, Fraction, int, None]


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    PRECONDITION_UNMET = "precondition-unmet"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CaseLabel:
    """Which branch of a four-way case split applies.

    ``parity`` is the parity of <-alpha>_p; ``small`` says whether it lies below
    the split's threshold (written out in ``threshold``).
    """

    parity: str
    small: bool
    threshold: str

    def __str__(self):
        return f"{self.parity},{'<' if self.small else '>='}{self.threshold}"


def _fmt(v: Value) -> str | None:
    if v is None:
        return None
    if isinstance(v, PadicResidue):
        return str(v.value)
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else str(v.numerator)
    return str(v)


@dataclass(frozen=True)
class CheckResult:
    check: str
    p: int | None
    params: dict = field(default_factory=dict)
    modulus: int | None = None
    lhs: Value = None
    rhs: Value = None
    verdict: Verdict = Verdict.PASS
    case_label: CaseLabel | str | None = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def to_record(self) -> dict[str, Any]:
        """Flat JSON-ready dict; residues become decimal strings in [0, p^k)."""
        return {
            "check": self.check,
            "p": self.p,
            "params": {k: _fmt(v) if not isinstance(v, str) else v for k, v in self.params.items()},
            "modulus": self.modulus,
            "lhs": _fmt(self.lhs),
            "rhs": _fmt(self.rhs),
            "verdict": str(self.verdict),
            "case_label": None if self.case_label is None else str(self.case_label),
            "note": self.note,
        }

    def with_note(self, note: str) -> "CheckResult":
        return replace(self, note=f"{self.note}; {note}" if self.note else note)


def congruence_result(check: str, p: int, params: dict, lhs: PadicResidue, rhs: PadicResidue,
                      case_label=None, note: str = "") -> CheckResult:
    """Compare two residues of the same context and build the record."""
    verdict = Verdict.PASS if lhs == rhs else Verdict.FAIL
    return CheckResult(check, p, params, lhs.context.modulus, lhs, rhs, verdict, case_label, note)


def exact_result(check: str, params: dict, lhs, rhs, note: str = "", p: int | None = None) -> CheckResult:
    verdict = Verdict.PASS if lhs == rhs else Verdict.FAIL
    return CheckResult(check, p, params, None, lhs, rhs, verdict, None, note)
