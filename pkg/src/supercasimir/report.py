"""Machine-readable verification results."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exact import LaurentPoly, fraction_str


def jsonable(obj: Any) -> Any:
    """Convert exact results into JSON-ready structures (fractions as strings)."""
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return fraction_str(obj)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, LaurentPoly):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


@dataclass
class VerificationReport:
    """Residuals of an identity checked against a list of generators.

    A residual is any exact object whose truthiness means "nonzero": a
    UEAElement, a sparse tensor dict, a list of escaping vectors.  The report
    never stores an expected verdict, only what was computed.
    """

    checked_against: list[str]
    residuals: dict[str, Any]
    informational: dict[str, Any] = field(default_factory=dict)
    title: str = ""

    @property
    def passed(self) -> bool:
        return not any(bool(r) for r in self.residuals.values())

    def failures(self) -> list[str]:
        return [g for g, r in self.residuals.items() if r]

    def to_json(self) -> dict:
        out = {
            "title": self.title,
            "checked_against": list(self.checked_against),
            "residuals": {g: jsonable(r) for g, r in self.residuals.items()},
            "pass": self.passed,
        }
        if self.informational:
            out["informational"] = {g: jsonable(r) for g, r in self.informational.items()}
        return out


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple
    detail: str = ""

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "witness": list(self.witness), "detail": self.detail}

    def __str__(self) -> str:
        return f"{self.axiom} at {self.witness}: {self.detail}"


@dataclass
class ValidationReport:
    """Violated structural axioms; empty means valid."""

    violations: list[Violation] = field(default_factory=list)
    checks_run: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        # truthy when something is wrong, like a nonzero residual
        return bool(self.violations)

    def add(self, axiom: str, witness: tuple, detail: str = "") -> None:
        self.violations.append(Violation(axiom, tuple(witness), detail))

    def to_json(self) -> dict:
        return {
            "checks_run": list(self.checks_run),
            "violations": [v.to_json() for v in self.violations],
            "pass": self.passed,
        }
