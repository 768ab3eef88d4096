"""Simultaneous confidence bands for one group's cause-1 incidence.

The band works on a transformed scale: with phi increasing and smooth,
the process g(t) phi'(Fhat(t)) Zhat(t) approximates the normalized error
of phi(Fhat).  The (1-alpha) quantile q of its absolute sup over the
interval, taken across multiplier replicates, gives the band

    phi_inverse( phi(center(t)) +/- q / (sqrt(n) g(t)) )

clipped to [0, 1].  The center may be the unrestricted estimate or the
order-restricted one; the half-width in phi-scale is the same for both,
always computed from the unrestricted process.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import expit

from .data import MultiGroupDataset, pooled_event_grid
from .errors import ConfigError, DomainError, RangeError
from .estimators import cif_censored, plugin_covariance_matrix
from .isotonic import restrict_cifs
from .ordered_test import MIN_REPLICATES
from .resampling import AbsSup, replicate_sups, sup_quantile
from .stepfun import StepFunction


@dataclass(frozen=True)
class TransformSpec:
    """An increasing rescaling of [0, 1] with its derivative and inverse."""

    name: str
    phi: Callable[[np.ndarray], np.ndarray]
    dphi: Callable[[np.ndarray], np.ndarray]
    inverse: Callable[[np.ndarray], np.ndarray]
    needs_positive: bool
    needs_below_one: bool


TRANSFORMS = {
    "identity": TransformSpec(
        name="identity",
        phi=lambda x: x,
        dphi=lambda x: np.ones_like(x),
        inverse=lambda y: y,
        needs_positive=False,
        needs_below_one=False,
    ),
    "log": TransformSpec(
        name="log",
        phi=np.log,
        dphi=lambda x: 1.0 / x,
        inverse=np.exp,
        needs_positive=True,
        needs_below_one=False,
    ),
    "cloglog": TransformSpec(
        name="cloglog",
        phi=lambda x: np.log(-np.log1p(-x)),
        dphi=lambda x: -1.0 / ((1.0 - x) * np.log1p(-x)),
        inverse=lambda y: -np.expm1(-np.exp(y)),
        needs_positive=True,
        needs_below_one=True,
    ),
    "logit": TransformSpec(
        name="logit",
        phi=lambda x: np.log(x / (1.0 - x)),
        dphi=lambda x: 1.0 / (x * (1.0 - x)),
        inverse=expit,
        needs_positive=True,
        needs_below_one=True,
    ),
}

WEIGHTS = ("unit", "inverse-sd")
CENTERS = ("unrestricted", "restricted")


def get_transform(spec) -> TransformSpec:
    if isinstance(spec, TransformSpec):
        return spec
    if spec in TRANSFORMS:
        return TRANSFORMS[spec]
    raise ConfigError(
        f"unknown transform {spec!r}; choose one of {sorted(TRANSFORMS)}"
    )


@dataclass(frozen=True)
class BandResult:
    group_label: str
    interval: tuple[float, float]
    center: str
    q_alpha: float
    lower: StepFunction
    upper: StepFunction
    center_fun: StepFunction
    alpha: float
    transform: str
    weight: str
    b_replicates: int
    seed: int
    n: int

    def to_dict(self) -> dict:
        return {
            "group": self.group_label,
            "n": self.n,
            "interval": [self.interval[0], self.interval[1]],
            "alpha": self.alpha,
            "transform": self.transform,
            "weight": self.weight,
            "center": self.center,
            "q_alpha": self.q_alpha,
            "b_replicates": self.b_replicates,
            "seed": self.seed,
            "lower": self.lower.to_dict(),
            "center_estimate": self.center_fun.to_dict(),
            "upper": self.upper.to_dict(),
        }


def compute_band(
    dataset: MultiGroupDataset,
    group_index: int,
    alpha: float,
    interval: tuple[float, float] | None = None,
    transform="identity",
    weight: str = "unit",
    center: str = "unrestricted",
    b_replicates: int = 1000,
    seed: int = 0,
    workers: int | None = None,
    seed_path: tuple[int, ...] = (),
) -> BandResult:
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if b_replicates < MIN_REPLICATES:
        raise ConfigError(
            f"need at least {MIN_REPLICATES} replicates for a band, "
            f"got {b_replicates}"
        )
    if weight not in WEIGHTS:
        raise ConfigError(f"unknown weight {weight!r}; choose one of {WEIGHTS}")
    if center not in CENTERS:
        raise ConfigError(f"unknown center {center!r}; choose one of {CENTERS}")
    spec = get_transform(transform)
    group = dataset.groups[group_index]
    cif1 = cif_censored(group, 1)

    if interval is None:
        knots = cif1.f_hat.knots
        if knots.size == 0:
            raise DomainError(
                f"group {group.label!r} has no cause-1 events; no band exists"
            )
        interval = (float(knots[0]), group.max_time)
    t1, t2 = float(interval[0]), float(interval[1])
    if not 0 < t1 < t2 or t2 > group.max_time:
        raise RangeError(
            f"interval [{t1}, {t2}] must satisfy 0 < t1 < t2 <= "
            f"{group.max_time}, the group's largest observed time"
        )

    pooled = pooled_event_grid(dataset)
    grid = np.concatenate([[t1], pooled[(pooled > t1) & (pooled <= t2)]])

    f_unres = cif1.f_hat(grid)
    _check_domain(spec, f_unres, grid, "the unrestricted estimate")
    if center == "restricted":
        restricted = restrict_cifs(
            [cif_censored(g, 1) for g in dataset.groups],
            dataset.sizes,
            pooled,
        )
        center_vals = restricted.estimates[group_index].f_hat(grid)
        _check_domain(spec, center_vals, grid, "the restricted estimate")
    else:
        center_vals = f_unres

    if weight == "unit":
        g_vals = np.ones_like(grid)
    else:
        variances = plugin_covariance_matrix(group, grid).diagonal()
        if np.any(variances <= 0):
            bad = grid[variances <= 0][0]
            raise DomainError(
                f"variance estimate is zero at t={bad}; start the band at or "
                "after the group's first event"
            )
        g_vals = 1.0 / np.sqrt(variances)

    batch = replicate_sups(
        dataset,
        AbsSup(group_index, scale=g_vals * spec.dphi(f_unres)),
        b_replicates,
        seed,
        grid=grid,
        workers=workers,
        seed_path=seed_path,
    )
    q_alpha = sup_quantile(batch, alpha)

    half = q_alpha / (np.sqrt(group.n) * g_vals)
    phi_center = spec.phi(center_vals)
    lower = np.clip(spec.inverse(phi_center - half), 0.0, 1.0)
    upper = np.clip(spec.inverse(phi_center + half), 0.0, 1.0)
    return BandResult(
        group_label=group.label,
        interval=(t1, t2),
        center=center,
        q_alpha=q_alpha,
        lower=StepFunction(grid, lower, float(lower[0])),
        upper=StepFunction(grid, upper, float(upper[0])),
        center_fun=StepFunction(grid, center_vals, float(center_vals[0])),
        alpha=alpha,
        transform=spec.name,
        weight=weight,
        b_replicates=b_replicates,
        seed=seed,
        n=group.n,
    )


def _check_domain(spec: TransformSpec, values: np.ndarray, grid, what: str) -> None:
    if spec.needs_positive and np.any(values <= 0):
        bad = np.asarray(grid)[values <= 0][0]
        raise DomainError(
            f"the {spec.name} transform needs {what} strictly positive, "
            f"violated at t={bad}; choose a later interval start"
        )
    if spec.needs_below_one and np.any(values >= 1):
        bad = np.asarray(grid)[values >= 1][0]
        raise DomainError(
            f"the {spec.name} transform needs {what} strictly below one, "
            f"violated at t={bad}; choose an earlier interval end"
        )
