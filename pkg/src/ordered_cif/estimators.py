"""Unrestricted estimation for one group under right censoring.

Everything here is a finite-sample counting-process computation: the
empirical cumulative incidence for uncensored data, the product-limit
survival estimator, cause-specific cumulative hazards, the censored-data
cumulative incidence, and the plug-in covariance kernel of the
normalized cause-1 incidence process.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .data import GroupSample
from .errors import PreconditionError, RangeError
from .stepfun import StepFunction


@dataclass(frozen=True)
class EventTable:
    """Per distinct observed time: cause counts and the at-risk count."""

    times: np.ndarray      # distinct observed times, ascending
    d1: np.ndarray         # cause-1 events at each time
    d2: np.ndarray         # cause-2 events
    censored: np.ndarray   # cause-0 records
    at_risk: np.ndarray    # subjects with observed time >= this time
    n: int


@dataclass(frozen=True)
class SurvivalEstimate:
    """Product-limit estimate of all-cause survival.

    ``s_hat`` is the right-continuous store, so ``s_hat(t)`` includes the
    factor of an event at t itself.  The left limit, the version every
    incidence formula here consumes, is exposed as :meth:`left_value`.
    """

    group_label: str
    s_hat: StepFunction

    def left_value(self, t):
        """Product of hazard factors over event times strictly before t."""
        return self.s_hat.left_limit(t)


@dataclass(frozen=True)
class HazardEstimate:
    """Cumulative cause-specific hazard: sum of (events at u) / (at risk at u)."""

    group_label: str
    cause: int
    lambda_hat: StepFunction


@dataclass(frozen=True)
class CifEstimate:
    """Cumulative incidence of one cause, with the sample size it came from."""

    group_label: str
    cause: int
    f_hat: StepFunction
    n: int

    def to_dict(self, restricted: bool = False) -> dict:
        out = {
            "group": self.group_label,
            "cause": self.cause,
            "n": self.n,
            **self.f_hat.to_dict(),
        }
        if restricted:
            out["restricted"] = True
        return out


@dataclass(frozen=True)
class CovarianceKernel:
    """Plug-in covariance of the normalized cause-1 incidence on a grid."""

    group_label: str
    grid: np.ndarray
    matrix: np.ndarray

    def diagonal(self) -> np.ndarray:
        return np.diagonal(self.matrix)


def event_table(group: GroupSample) -> EventTable:
    times, inverse = np.unique(group.times, return_inverse=True)
    causes = group.causes
    counts = np.zeros((3, times.size), dtype=np.int64)
    for code in (0, 1, 2):
        np.add.at(counts[code], inverse[causes == code], 1)
    total_here = counts.sum(axis=0)
    # at risk at u counts subjects with observed time >= u; ties at u are
    # all still at risk there, which is the failures-first convention
    at_risk = group.n - np.concatenate([[0], np.cumsum(total_here)[:-1]])
    return EventTable(
        times=times,
        d1=counts[1],
        d2=counts[2],
        censored=counts[0],
        at_risk=at_risk,
        n=group.n,
    )


def empirical_cif(group: GroupSample, cause: int) -> CifEstimate:
    """Uncensored-data incidence: fraction of records at or before t with
    the matching cause.  Refuses censored input."""
    _check_cause(cause)
    if np.any(group.causes == 0):
        raise PreconditionError(
            f"group {group.label!r} contains censored records; use cif_censored"
        )
    table = event_table(group)
    d = table.d1 if cause == 1 else table.d2
    mask = d > 0
    values = np.cumsum(d[mask]) / table.n
    return CifEstimate(
        group_label=group.label,
        cause=cause,
        f_hat=StepFunction(table.times[mask], values, 0.0),
        n=group.n,
    )


def km_left(group: GroupSample) -> SurvivalEstimate:
    table = event_table(group)
    d = table.d1 + table.d2
    mask = d > 0
    factors = 1.0 - d[mask] / table.at_risk[mask]
    return SurvivalEstimate(
        group_label=group.label,
        s_hat=StepFunction(table.times[mask], np.cumprod(factors), 1.0),
    )


def nelson_aalen(group: GroupSample, cause: int) -> HazardEstimate:
    _check_cause(cause)
    table = event_table(group)
    d = table.d1 if cause == 1 else table.d2
    mask = d > 0
    values = np.cumsum(d[mask] / table.at_risk[mask])
    return HazardEstimate(
        group_label=group.label,
        cause=cause,
        lambda_hat=StepFunction(table.times[mask], values, 0.0),
    )


def cif_censored(group: GroupSample, cause: int) -> CifEstimate:
    """Censored-data incidence: sum over matching-cause event times u <= t
    of (survival just before u) times (hazard jump at u).

    Accumulation runs in exact rational arithmetic.  For cause-0-free
    input the survival left limit telescopes to (at risk)/n, each jump to
    (events)/n, and the returned doubles coincide bit for bit with the
    uncensored estimator.
    """
    _check_cause(cause)
    table = event_table(group)
    d_all = table.d1 + table.d2
    d_match = table.d1 if cause == 1 else table.d2
    surv = Fraction(1)
    total = Fraction(0)
    knots: list[float] = []
    values: list[float] = []
    for i in range(table.times.size):
        y = int(table.at_risk[i])
        dm = int(d_match[i])
        da = int(d_all[i])
        if dm > 0:
            total += surv * Fraction(dm, y)
            knots.append(float(table.times[i]))
            values.append(float(total))
        if da > 0:
            surv *= Fraction(y - da, y)
    return CifEstimate(
        group_label=group.label,
        cause=cause,
        f_hat=StepFunction(np.array(knots), np.array(values), 0.0),
        n=group.n,
    )


@dataclass(frozen=True)
class _KernelParts:
    """Cumulants of the covariance integrands over uncensored event times.

    With h_j(u) = (hazard-j jump at u) / (at-risk fraction at u), the
    kernel at s <= t is

        cum0(s) - [F1(s) + F1(t)] cum1(s) + F1(s) F1(t) cum2(s)

    where cum0 accumulates (1-F2(u))^2 h_1 + F1(u)^2 h_2, cum1 accumulates
    (1-F2(u)) h_1 + F1(u) h_2, and cum2 accumulates h_1 + h_2.
    """

    event_times: np.ndarray
    cum0: np.ndarray
    cum1: np.ndarray
    cum2: np.ndarray
    f1: StepFunction
    max_time: float
    label: str

    def value(self, s: float, t: float) -> float:
        if s > t:
            raise PreconditionError(f"need s <= t, got s={s}, t={t}")
        for point in (s, t):
            if point > self.max_time:
                raise RangeError(
                    f"covariance requested at {point} where no subject of group "
                    f"{self.label!r} remains at risk; truncate the horizon to "
                    f"{self.max_time} or less"
                )
        idx = int(np.searchsorted(self.event_times, s, side="right"))
        if idx == 0:
            return 0.0
        f1s = self.f1(s)
        f1t = self.f1(t)
        return float(
            self.cum0[idx - 1]
            - (f1s + f1t) * self.cum1[idx - 1]
            + f1s * f1t * self.cum2[idx - 1]
        )


def kernel_parts(group: GroupSample) -> _KernelParts:
    table = event_table(group)
    f1 = cif_censored(group, 1).f_hat
    f2 = cif_censored(group, 2).f_hat
    mask = (table.d1 + table.d2) > 0
    times = table.times[mask]
    y = table.at_risk[mask].astype(float)
    # hazard jump over at-risk fraction: (d_j/Y) / (Y/n) = n d_j / Y^2
    h1 = table.n * table.d1[mask] / y**2
    h2 = table.n * table.d2[mask] / y**2
    f1_at = f1(times)
    f2_at = f2(times)
    one_minus_f2 = 1.0 - f2_at
    return _KernelParts(
        event_times=times,
        cum0=np.cumsum(one_minus_f2**2 * h1 + f1_at**2 * h2),
        cum1=np.cumsum(one_minus_f2 * h1 + f1_at * h2),
        cum2=np.cumsum(h1 + h2),
        f1=f1,
        max_time=group.max_time,
        label=group.label,
    )


def plugin_covariance(group: GroupSample, s: float, t: float) -> float:
    """Plug-in estimate of Cov of the normalized cause-1 incidence at (s, t)."""
    return kernel_parts(group).value(s, t)


def plugin_covariance_matrix(group: GroupSample, grid) -> CovarianceKernel:
    grid = np.asarray(grid, dtype=float)
    parts = kernel_parts(group)
    if grid.size and grid.max() > parts.max_time:
        raise RangeError(
            f"covariance grid reaches {grid.max()} where no subject of group "
            f"{group.label!r} remains at risk; truncate to {parts.max_time} or less"
        )
    idx = np.searchsorted(parts.event_times, grid, side="right")
    pad = lambda c: np.concatenate([[0.0], c])
    c0, c1, c2 = pad(parts.cum0)[idx], pad(parts.cum1)[idx], pad(parts.cum2)[idx]
    f1 = parts.f1(grid)
    lo = np.minimum.outer(np.arange(grid.size), np.arange(grid.size))
    fs = np.add.outer(f1, f1)
    fp = np.multiply.outer(f1, f1)
    matrix = c0[lo] - fs * c1[lo] + fp * c2[lo]
    return CovarianceKernel(group_label=group.label, grid=grid, matrix=matrix)


def _check_cause(cause: int) -> None:
    if cause not in (1, 2):
        raise PreconditionError(f"cause must be 1 or 2, got {cause}")
