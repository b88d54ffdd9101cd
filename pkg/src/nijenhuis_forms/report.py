"""Verification reports with reproducible witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .graded import Element, fraction_str


@dataclass
class Residual:
    identity: str
    inputs: tuple
    value: Any

    def to_json(self) -> dict:
        return {"identity": self.identity, "inputs": [str(i) for i in self.inputs], "residual": jsonable(self.value)}


@dataclass
class Report:
    name: str
    passed: bool
    regime: str = "exact"
    residuals: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def witness(self) -> Residual | None:
        return self.residuals[0] if self.residuals else None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "regime": self.regime,
            "residuals": [r.to_json() for r in self.residuals],
            "details": jsonable(self.details),
        }


def jsonable(value):
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, Fraction):
        return fraction_str(value)
    if isinstance(value, Element):
        return value.to_json()
    if isinstance(value, Report):
        return value.to_json()
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)


def first_residual(fs, identity: str) -> Residual | None:
    """Lexicographically first nonzero entry of a FormSum, as a witness."""
    for k in sorted(fs.parts):
        f = fs.parts[k]
        mono = min(f.table)
        labels = tuple(f.space.labels[s] for s in mono)
        return Residual(identity, labels, Element(f.space, f.table[mono]))
    return None


def combine(name: str, reports, regime: str | None = None, **details) -> Report:
    reports = list(reports)
    residuals = [r for rep in reports for r in rep.residuals]
    regime = regime or (reports[0].regime if reports else "exact")
    return Report(name, all(r.passed for r in reports), regime, residuals,
                  {"checks": {r.name: r.passed for r in reports}, **details})
