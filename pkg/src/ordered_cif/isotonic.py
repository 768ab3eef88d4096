"""Weighted isotonic regression and its pointwise application to
cumulative incidence estimates across ordered groups."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import PreconditionError
from .estimators import CifEstimate
from .stepfun import StepFunction


@dataclass(frozen=True)
class IsotonicProblem:
    """A vector to project onto the nondecreasing cone, with positive weights."""

    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if values.ndim != 1 or values.shape != weights.shape:
            raise PreconditionError(
                f"values and weights must be 1-d and equally long, got shapes "
                f"{values.shape} and {weights.shape}"
            )
        if values.size == 0:
            raise PreconditionError("empty isotonic problem")
        if not np.all(weights > 0):
            raise PreconditionError("weights must all be positive")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "weights", weights)


def isoreg_weighted(problem: IsotonicProblem) -> np.ndarray:
    """Weighted least-squares projection onto nondecreasing vectors,
    by pooling adjacent violating blocks."""
    x = problem.values
    w = problem.weights
    k = x.size
    # stack of blocks as (weight sum, weighted value sum, member count)
    bw = np.empty(k)
    bwx = np.empty(k)
    bn = np.empty(k, dtype=np.int64)
    top = -1
    for i in range(k):
        top += 1
        bw[top] = w[i]
        bwx[top] = w[i] * x[i]
        bn[top] = 1
        while top > 0 and bwx[top - 1] * bw[top] > bwx[top] * bw[top - 1]:
            bw[top - 1] += bw[top]
            bwx[top - 1] += bwx[top]
            bn[top - 1] += bn[top]
            top -= 1
    out = np.empty(k)
    pos = 0
    for b in range(top + 1):
        # untouched components pass through bit-exactly
        out[pos : pos + bn[b]] = x[pos] if bn[b] == 1 else bwx[b] / bw[b]
        pos += bn[b]
    return out


def isoreg_maxmin(problem: IsotonicProblem) -> np.ndarray:
    """Same projection via windowed weighted averages: component i is
    max over r <= i of min over s >= i of the average on [r, s].  Cubic
    in k; kept as an independent cross-check of the pooling algorithm."""
    x = problem.values
    w = problem.weights
    k = x.size
    cw = np.concatenate([[0.0], np.cumsum(w)])
    cwx = np.concatenate([[0.0], np.cumsum(w * x)])
    out = np.empty(k)
    for i in range(k):
        best = -np.inf
        for r in range(i + 1):
            inner = min(
                (cwx[s + 1] - cwx[r]) / (cw[s + 1] - cw[r]) for s in range(i, k)
            )
            if inner > best:
                best = inner
        out[i] = best
    return out


@dataclass(frozen=True)
class RestrictedCifSet:
    """Order-restricted cause-1 incidence estimates on a shared grid.

    At every grid point the group values are nondecreasing in the
    hypothesized order; each function is still nondecreasing in t and
    stays in [0, 1].
    """

    estimates: tuple[CifEstimate, ...]
    weights: tuple[float, ...]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(e.group_label for e in self.estimates)


def restrict_cifs(
    estimates: Sequence[CifEstimate], weights: Sequence[float], grid
) -> RestrictedCifSet:
    """Project the group values at every grid point onto the hypothesized
    order, weighting each group by its size.

    The inputs must jump only at grid points; between grid points every
    function involved is constant, so the pointwise projection is exact.
    """
    grid = np.asarray(grid, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if len(estimates) != weights.size:
        raise PreconditionError(
            f"{len(estimates)} estimates but {weights.size} weights"
        )
    if not np.all(weights > 0):
        raise PreconditionError("group weights must be positive")
    for est in estimates:
        if not np.all(np.isin(est.f_hat.knots, grid)):
            raise PreconditionError(
                f"estimate for group {est.group_label!r} jumps outside the "
                "shared grid; build the grid from the full dataset"
            )
    stacked = np.vstack([est.f_hat(grid) for est in estimates])
    projected = np.empty_like(stacked)
    for col in range(grid.size):
        projected[:, col] = isoreg_weighted(
            IsotonicProblem(stacked[:, col], weights)
        )
    restricted = tuple(
        CifEstimate(
            group_label=est.group_label,
            cause=est.cause,
            f_hat=StepFunction(grid, projected[row], 0.0).compact(),
            n=est.n,
        )
        for row, est in enumerate(estimates)
    )
    return RestrictedCifSet(estimates=restricted, weights=tuple(map(float, weights)))
