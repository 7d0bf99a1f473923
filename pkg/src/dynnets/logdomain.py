"""Log-domain carrier for covering-number bounds too large for float64."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping


@dataclass(frozen=True)
class LogBound:
    """A bound stored as its natural logarithm, with the inputs that produced it.

    ``ln_value`` is ln(N) for a bound N on a covering number; N itself is
    usually far beyond float64 range, so it is never materialized.
    """

    ln_value: float
    context: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not math.isfinite(self.ln_value):
            raise ValueError("log-domain value must be finite")
        object.__setattr__(self, "context", dict(self.context))

    @property
    def log10_value(self) -> float:
        return self.ln_value / math.log(10.0)

    def as_dict(self) -> dict[str, Any]:
        return {
            "ln_value": self.ln_value,
            "log10_value": self.log10_value,
            "context": dict(self.context),
        }
