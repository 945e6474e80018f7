"""Check results shared by every checker and by the CLI report."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

PASS = "pass"
FAIL = "fail"
UNKNOWN = "unknown"
NOT_APPLICABLE = "not_applicable"


def plain(value: Any) -> Any:
    """Convert numpy scalars/arrays (recursively) to JSON-friendly values."""
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return plain(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not np.isfinite(value):
            return str(value)
        return value
    return value


@dataclass
class CheckReport:
    """Outcome of one check.

    ``passed`` is True exactly when ``status == "pass"``; for numeric checks
    that means ``max_violation <= tolerance``.
    """

    name: str
    status: str
    max_violation: Optional[float] = None
    tolerance: float = 0.0
    witness: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @classmethod
    def from_violation(cls, name: str, violation: float, tolerance: float = 0.0,
                       witness: Optional[dict] = None, **details) -> "CheckReport":
        violation = float(violation)
        status = PASS if violation <= tolerance else FAIL
        return cls(name, status, violation, tolerance, witness or {}, details)

    def to_dict(self) -> dict:
        return plain({
            "name": self.name,
            "status": self.status,
            "passed": self.passed,
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "witness": self.witness,
            "details": self.details,
        })

    @classmethod
    def from_dict(cls, data: dict) -> "CheckReport":
        return cls(
            name=data["name"],
            status=data["status"],
            max_violation=data.get("max_violation"),
            tolerance=data.get("tolerance", 0.0),
            witness=dict(data.get("witness", {})),
            details=dict(data.get("details", {})),
        )

    def __str__(self):
        mv = "n/a" if self.max_violation is None else f"{self.max_violation:.3g}"
        return f"{self.status.upper():<8} {self.name}  max_violation={mv}  tol={self.tolerance:g}"
