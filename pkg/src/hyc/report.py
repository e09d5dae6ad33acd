"""Structured pass/fail records shared by every verification suite."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Optional


def _jsonable(x: Any) -> Any:
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item") and callable(x.item):  # numpy scalars
        return _jsonable(x.item())
    return x


def dumps(obj: Any) -> str:
    """Deterministic JSON (sorted keys, non-finite floats as strings)."""
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2)


@dataclass
class Check:
    name: str
    lhs: float
    rhs: float
    passed: bool
    tol: float = 0.0

    def to_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "passed": bool(self.passed), "tol": self.tol}


@dataclass
class VerificationReport:
    suite: str
    seed: Optional[int] = None
    params: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    max_observed_ratio: Optional[float] = None

    def add(self, name: str, lhs: float, rhs: float, tol: float = 0.0, passed: Optional[bool] = None) -> Check:
        """Record ``lhs <= rhs + tol`` (or an explicit verdict)."""
        lhs, rhs = float(lhs), float(rhs)
        if passed is None:
            passed = lhs <= rhs + tol
        chk = Check(name, lhs, rhs, bool(passed), float(tol))
        self.checks.append(chk)
        return chk

    def add_ge(self, name: str, lhs: float, rhs: float, tol: float = 0.0) -> Check:
        """Record ``lhs >= rhs - tol``."""
        return self.add(name, lhs, rhs, tol, passed=float(lhs) >= float(rhs) - tol)

    def observe_ratio(self, ratio: float) -> None:
        if self.max_observed_ratio is None or ratio > self.max_observed_ratio:
            self.max_observed_ratio = float(ratio)

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.lhs, c.rhs, c.passed, c.tol))
        if other.max_observed_ratio is not None:
            self.observe_ratio(other.max_observed_ratio)

    @property
    def n_passed(self) -> int:
        return sum(c.passed for c in self.checks)

    @property
    def n_failed(self) -> int:
        return len(self.checks) - self.n_passed

    @property
    def passed(self) -> bool:
        return self.n_failed == 0

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "params": self.params,
            "checks": [c.to_dict() for c in self.checks],
            "summary": {"passed": self.n_passed, "failed": self.n_failed},
            "max_observed_ratio": self.max_observed_ratio,
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())
