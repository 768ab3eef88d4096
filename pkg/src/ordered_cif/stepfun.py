"""Right-continuous step functions, the carrier type for every process here.

All estimators, hazard processes, test processes, and resampled replicates
in this package are piecewise constant, jumping only at observed times.
Representing them with one exact carrier keeps pointwise projections and
suprema free of interpolation error: the supremum of a step function over
an interval is the maximum over finitely many evaluation points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import PreconditionError


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Piecewise-constant, right-continuous function on the real line.

    The value at ``t`` is the value attached to the largest knot ``<= t``,
    or ``initial_value`` when ``t`` lies before every knot.  Knots must be
    strictly increasing; an empty knot sequence yields the constant
    function ``initial_value``.
    """

    knots: np.ndarray
    values: np.ndarray
    initial_value: float = 0.0

    def __post_init__(self):
        knots = np.atleast_1d(np.asarray(self.knots, dtype=float))
        values = np.atleast_1d(np.asarray(self.values, dtype=float))
        if knots.size == 0:
            knots = np.empty(0, dtype=float)
            values = np.empty(0, dtype=float)
        if knots.shape != values.shape or knots.ndim != 1:
            raise PreconditionError("knots and values must be 1-d and of equal length")
        if knots.size and not np.all(np.diff(knots) > 0):
            raise PreconditionError("knots must be strictly increasing")
        knots.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "initial_value", float(self.initial_value))

    def __call__(self, t):
        """Right-continuous evaluation at scalar or array ``t``."""
        idx = np.searchsorted(self.knots, t, side="right") - 1
        padded = np.concatenate(([self.initial_value], self.values))
        out = padded[idx + 1]
        if np.isscalar(t):
            return float(out)
        return out

    def left_limit(self, t):
        """Value just before ``t``: attached to the largest knot ``< t``."""
        idx = np.searchsorted(self.knots, t, side="left") - 1
        padded = np.concatenate(([self.initial_value], self.values))
        out = padded[idx + 1]
        if np.isscalar(t):
            return float(out)
        return out

    def compact(self) -> "StepFunction":
        """Drop knots that do not change the value.

        The result is equal as a function; repeated consecutive values
        (including leading values equal to ``initial_value``) are removed.
        """
        if self.knots.size == 0:
            return self
        prev = np.concatenate(([self.initial_value], self.values[:-1]))
        keep = self.values != prev
        return StepFunction(self.knots[keep], self.values[keep], self.initial_value)

    def to_dict(self) -> dict[str, Any]:
        return {
            "initial_value": self.initial_value,
            "points": [
                {"t": float(t), "value": float(v)}
                for t, v in zip(self.knots, self.values)
            ],
        }

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> "StepFunction":
        points = payload.get("points", [])
        return cls(
            knots=np.array([p["t"] for p in points], dtype=float),
            values=np.array([p["value"] for p in points], dtype=float),
            initial_value=float(payload.get("initial_value", 0.0)),
        )


def evaluate(f: StepFunction, t):
    """Right-continuous evaluation, as a free function."""
    return f(t)
