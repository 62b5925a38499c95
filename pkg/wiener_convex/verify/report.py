"""The record every property check returns."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np


def jsonable(value: Any) -> Any:
    """Convert numpy scalars, arrays and infinities into JSON friendly values."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if np.isnan(value):
            return "nan"
        if np.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


@dataclass
class CheckReport:
    """The outcome of a property check."""

    name: str
    passed: bool
    measured: Optional[float] = None
    """The headline measured value, for instance the worst violation."""
    tolerance: Optional[float] = None
    seed: Optional[int] = None
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """The report as a JSON friendly dict."""
        return jsonable(
            {
                "name": self.name,
                "passed": self.passed,
                "measured": self.measured,
                "tolerance": self.tolerance,
                "seed": self.seed,
                "details": self.details,
            }
        )
