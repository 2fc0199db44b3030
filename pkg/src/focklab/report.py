"""Verification records and their tolerance policy."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

__all__ = ["THEOREMS", "VerificationReport", "bound_tolerance", "jsonable"]

THEOREMS = (
    "zhuhe",
    "thm1",
    "thm2",
    "nulla",
    "corollary",
    "dera1",
    "example",
    "operator",
    "reproducing",
    "quadrature",
)

BASE_TOL = 1e-8


def bound_tolerance(rel_error):
    """Pass threshold: 1e-8 plus three times the propagated relative error."""
    return BASE_TOL + 3.0 * rel_error


def jsonable(value):
    """Convert complex numbers, numpy scalars and non-finite floats for JSON output."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, complex):
        from .language import format_complex

        return format_complex(value)
    if hasattr(value, "item"):
        return jsonable(value.item())
    value = float(value)
    if math.isfinite(value):
        return value
    return "inf" if value > 0 else ("-inf" if value < 0 else "nan")


def _ratio(lhs, rhs):
    if rhs != 0:
        return lhs / rhs
    return 0.0 if lhs == 0 else math.inf


@dataclass(frozen=True)
class VerificationReport:
    """One checked inequality or identity.

    ``passed`` is decided by the check kind: ``bound`` means
    ``ratio <= 1 + tolerance``, ``equality`` means ``|ratio - 1| <= tolerance``
    and ``residual`` (``lhs`` an error, ``rhs`` its scale) means
    ``ratio <= tolerance``.
    """

    theorem: str
    inputs: dict
    lhs: float
    rhs: float
    ratio: float
    tolerance: float
    passed: bool
    notes: str = ""
    oracles: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.theorem not in THEOREMS:
            raise ValueError(f"unknown theorem id {self.theorem!r}")

    @classmethod
    def bound(cls, theorem, inputs, lhs, rhs, tolerance, notes="", oracles=None):
        ratio = _ratio(lhs, rhs)
        return cls(theorem, dict(inputs), float(lhs), float(rhs), ratio, float(tolerance),
                   bool(ratio <= 1.0 + tolerance), _join("check=bound", notes), dict(oracles or {}))

    @classmethod
    def equality(cls, theorem, inputs, lhs, rhs, tolerance, notes="", oracles=None):
        ratio = _ratio(lhs, rhs)
        return cls(theorem, dict(inputs), float(lhs), float(rhs), ratio, float(tolerance),
                   bool(abs(ratio - 1.0) <= tolerance), _join("check=equality", notes), dict(oracles or {}))

    @classmethod
    def residual(cls, theorem, inputs, error, scale, tolerance, notes="", oracles=None):
        ratio = _ratio(error, scale)
        return cls(theorem, dict(inputs), float(error), float(scale), ratio, float(tolerance),
                   bool(ratio <= tolerance), _join("check=residual", notes), dict(oracles or {}))

    def as_equality(self, tolerance, notes=""):
        """Re-judge the same sides as a sharpness (attainment) check."""
        base = self.notes.replace("check=bound", "check=equality")
        return replace(
            self,
            tolerance=float(tolerance),
            passed=bool(abs(self.ratio - 1.0) <= tolerance),
            notes=_join(base, notes),
        )

    def with_pass(self, passed, notes=""):
        return replace(self, passed=bool(self.passed and passed), notes=_join(self.notes, notes))

    def to_dict(self):
        return {
            "theorem": self.theorem,
            "inputs": jsonable(self.inputs),
            "lhs": jsonable(self.lhs),
            "rhs": jsonable(self.rhs),
            "ratio": jsonable(self.ratio),
            "tolerance": jsonable(self.tolerance),
            "pass": self.passed,
            "notes": self.notes,
            "oracles": jsonable(self.oracles),
        }

    def sort_key(self):
        import json

        return (self.theorem, json.dumps(jsonable(self.inputs), sort_keys=True), self.notes)


def _join(a, b):
    return "; ".join(s for s in (a, b) if s)
