"""Constant-hazard data generation and Monte Carlo studies.

Constant hazards keep every validation target in closed form: with
cause-specific rates a and b and censoring rate c,

    F1(t) = a/(a+b) * (1 - exp(-(a+b) t))

the long-run cause-1 share is a/(a+b), and the censored fraction is
c/(a+b+c).  The studies check test size and power, the accuracy gain of
the order-restricted estimator, multiplier-vs-plug-in covariance
agreement, and simultaneous band coverage.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bands import compute_band
from .data import FailureRecord, GroupSample, MultiGroupDataset, pooled_event_grid
from .errors import ConfigError, OrderedCifError
from .estimators import cif_censored, kernel_parts
from .isotonic import restrict_cifs
from .ordered_test import pvalue_analytic, sequential_test
from .resampling import ZhatEngine, build_counting
from .seeding import rng_for

STUDIES = ("size", "power", "mse", "coverage", "covmatch")

# sub-stream namespaces so data generation never shares a stream with
# the multiplier draws of the same replicate
_NS_DATA = 0
_NS_INNER = 1


def true_cif1(t, lam1: float, lam2: float):
    total = lam1 + lam2
    return lam1 / total * -np.expm1(-total * np.asarray(t, dtype=float))


@dataclass(frozen=True)
class GroupScenario:
    n: int
    lam1: float
    lam2: float
    lamc: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"group size must be >= 1, got {self.n}")
        if min(self.lam1, self.lam2, self.lamc) < 0:
            raise ConfigError("hazard rates must be nonnegative")
        if self.lam1 + self.lam2 <= 0:
            raise ConfigError("at least one failure rate must be positive")


@dataclass(frozen=True)
class ScenarioSpec:
    study: str
    groups: tuple[GroupScenario, ...]
    replications: int
    seed: int
    alpha: float = 0.05
    b_replicates: int = 1000
    interval: tuple[float, float] | None = None
    transform: str = "identity"
    weight: str = "unit"
    center: str = "unrestricted"
    eval_time: float | None = None

    def __post_init__(self):
        if self.study not in STUDIES:
            raise ConfigError(f"unknown study {self.study!r}; choose from {STUDIES}")
        if len(self.groups) < 2:
            raise ConfigError("scenarios need at least two groups")
        if self.replications < 1:
            raise ConfigError("replications must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")

    @property
    def censored(self) -> bool:
        return any(g.lamc > 0 for g in self.groups)

    @classmethod
    def from_dict(cls, raw: dict) -> "ScenarioSpec":
        if not isinstance(raw, dict):
            raise ConfigError("scenario must be a table of fields")
        known = {
            "study", "groups", "replications", "seed", "alpha", "b_replicates",
            "interval", "transform", "weight", "center", "eval_time",
        }
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown scenario fields: {sorted(unknown)}")
        for name in ("study", "groups", "replications", "seed"):
            if name not in raw:
                raise ConfigError(f"scenario is missing required field {name!r}")
        try:
            groups = tuple(
                GroupScenario(
                    n=int(g["n"]),
                    lam1=float(g["lam1"]),
                    lam2=float(g["lam2"]),
                    lamc=float(g.get("lamc", 0.0)),
                )
                for g in raw["groups"]
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad group entry in scenario: {exc}") from None
        interval = raw.get("interval")
        return cls(
            study=str(raw["study"]),
            groups=groups,
            replications=int(raw["replications"]),
            seed=int(raw["seed"]),
            alpha=float(raw.get("alpha", 0.05)),
            b_replicates=int(raw.get("b_replicates", 1000)),
            interval=None if interval is None else (float(interval[0]), float(interval[1])),
            transform=str(raw.get("transform", "identity")),
            weight=str(raw.get("weight", "unit")),
            center=str(raw.get("center", "unrestricted")),
            eval_time=None if raw.get("eval_time") is None else float(raw["eval_time"]),
        )

    def to_dict(self) -> dict:
        return {
            "study": self.study,
            "groups": [
                {"n": g.n, "lam1": g.lam1, "lam2": g.lam2, "lamc": g.lamc}
                for g in self.groups
            ],
            "replications": self.replications,
            "seed": self.seed,
            "alpha": self.alpha,
            "b_replicates": self.b_replicates,
            "interval": None if self.interval is None else list(self.interval),
            "transform": self.transform,
            "weight": self.weight,
            "center": self.center,
            "eval_time": self.eval_time,
        }


def load_scenario(path) -> ScenarioSpec:
    path = Path(path)
    try:
        if path.suffix.lower() == ".toml":
            try:
                import tomllib
            except ModuleNotFoundError:
                import tomli as tomllib
            raw = tomllib.loads(path.read_text(encoding="utf-8"))
        else:
            raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc}") from None
    except ValueError as exc:
        raise ConfigError(f"cannot parse scenario file {path}: {exc}") from None
    return ScenarioSpec.from_dict(raw)


@dataclass(frozen=True)
class StudyReport:
    study: str
    cells: tuple[dict, ...]
    scenario: dict
    warnings: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "study": self.study,
            "scenario": self.scenario,
            "cells": list(self.cells),
            "warnings": list(self.warnings),
        }


def gen_competing(
    n: int,
    lam1: float,
    lam2: float,
    lamc: float = 0.0,
    seed: int | None = None,
    rng: np.random.Generator | None = None,
    label: str = "g1",
) -> GroupSample:
    """One group from latent exponential failure and censoring clocks.

    The latent all-cause failure time is exponential with rate lam1+lam2,
    assigned to cause 1 with probability lam1/(lam1+lam2); an independent
    exponential censoring clock (rate lamc, absent when zero) may cut it
    off first.  Ties between clocks resolve to the failure.
    """
    if lam1 + lam2 <= 0:
        raise ConfigError("at least one failure rate must be positive")
    if min(lam1, lam2, lamc) < 0:
        raise ConfigError("hazard rates must be nonnegative")
    if rng is None:
        rng = rng_for(0 if seed is None else seed)
    total = lam1 + lam2
    failure = rng.exponential(1.0 / total, n)
    cause = np.where(rng.random(n) < lam1 / total, 1, 2)
    if lamc > 0:
        censor = rng.exponential(1.0 / lamc, n)
    else:
        censor = np.full(n, np.inf)
    observed = np.minimum(failure, censor)
    code = np.where(censor < failure, 0, cause)
    return GroupSample(
        label=label,
        records=tuple(
            FailureRecord(time=t, cause=int(c)) for t, c in zip(observed, code)
        ),
    )


def run_study(spec: ScenarioSpec) -> StudyReport:
    runner = {
        "size": _run_rejection,
        "power": _run_rejection,
        "mse": _run_mse,
        "coverage": _run_coverage,
        "covmatch": _run_covmatch,
    }[spec.study]
    cells, warnings = runner(spec)
    return StudyReport(
        study=spec.study,
        cells=tuple(cells),
        scenario=spec.to_dict(),
        warnings=tuple(warnings),
    )


def _dataset_for(spec: ScenarioSpec, rep: int) -> MultiGroupDataset:
    return MultiGroupDataset(
        tuple(
            gen_competing(
                g.n, g.lam1, g.lam2, g.lamc,
                rng=rng_for(spec.seed, rep, _NS_DATA, i),
                label=f"g{i + 1}",
            )
            for i, g in enumerate(spec.groups)
        )
    )


def _attach_rep(exc: OrderedCifError, rep: int) -> OrderedCifError:
    return type(exc)(f"replicate {rep}: {exc}")


def _rate_cell(name: str, hits: int, total: int) -> dict:
    rate = hits / total
    return {
        "metric": name,
        "value": rate,
        "mc_se": math.sqrt(rate * (1.0 - rate) / total),
    }


def _run_rejection(spec: ScenarioSpec) -> tuple[list[dict], list[str]]:
    k = len(spec.groups)
    rejected = 0
    rejected_two_sided = 0
    stats = np.empty(spec.replications)
    for rep in range(spec.replications):
        try:
            dataset = _dataset_for(spec, rep)
            if spec.censored:
                report = sequential_test(
                    dataset,
                    method="resampled",
                    b_replicates=spec.b_replicates,
                    seed=spec.seed,
                    seed_path=(rep, _NS_INNER),
                )
            else:
                report = sequential_test(dataset, method="analytic")
                # two-sided comparator: sup of |T_j| against the doubled
                # one-sided tail, for the power contrast
                sup_abs = max(
                    float(np.max(np.abs(pair.process.values), initial=0.0))
                    for pair in report.pairs
                )
                p_two = min(1.0, 2.0 * pvalue_analytic(sup_abs, k)[1])
                rejected_two_sided += p_two <= spec.alpha
            stats[rep] = report.t_n
            rejected += report.p_value <= spec.alpha
        except OrderedCifError as exc:
            raise _attach_rep(exc, rep) from exc
    cells = [
        _rate_cell("rejection_rate", rejected, spec.replications),
        {
            "metric": "mean_statistic",
            "value": float(stats.mean()),
            "mc_se": float(stats.std(ddof=1) / math.sqrt(spec.replications))
            if spec.replications > 1
            else 0.0,
        },
    ]
    if not spec.censored:
        cells.append(
            _rate_cell("two_sided_rejection_rate", rejected_two_sided, spec.replications)
        )
    return cells, []


def _run_mse(spec: ScenarioSpec) -> tuple[list[dict], list[str]]:
    k = len(spec.groups)
    first = spec.groups[0]
    t_eval = spec.eval_time
    if t_eval is None:
        # median of the first group's all-cause failure distribution
        t_eval = math.log(2.0) / (first.lam1 + first.lam2)
    truth = np.array([float(true_cif1(t_eval, g.lam1, g.lam2)) for g in spec.groups])
    err_unres = np.empty((spec.replications, k))
    err_res = np.empty((spec.replications, k))
    for rep in range(spec.replications):
        try:
            dataset = _dataset_for(spec, rep)
            cifs = [cif_censored(g, 1) for g in dataset.groups]
            restricted = restrict_cifs(cifs, dataset.sizes, pooled_event_grid(dataset))
            for i in range(k):
                err_unres[rep, i] = (cifs[i].f_hat(t_eval) - truth[i]) ** 2
                err_res[rep, i] = (
                    restricted.estimates[i].f_hat(t_eval) - truth[i]
                ) ** 2
        except OrderedCifError as exc:
            raise _attach_rep(exc, rep) from exc
    cells = []
    for i in range(k):
        mse_u = float(err_unres[:, i].mean())
        mse_r = float(err_res[:, i].mean())
        diff = err_unres[:, i] - err_res[:, i]
        cells.append(
            {
                "group": f"g{i + 1}",
                "eval_time": float(t_eval),
                "true_value": float(truth[i]),
                "mse_unrestricted": mse_u,
                "mse_restricted": mse_r,
                "mse_ratio": mse_r / mse_u if mse_u > 0 else math.nan,
                "mse_diff": float(diff.mean()),
                "mse_diff_se": float(diff.std(ddof=1) / math.sqrt(spec.replications))
                if spec.replications > 1
                else 0.0,
            }
        )
    return cells, []


def _run_coverage(spec: ScenarioSpec) -> tuple[list[dict], list[str]]:
    first = spec.groups[0]
    covered = 0
    for rep in range(spec.replications):
        try:
            dataset = _dataset_for(spec, rep)
            band = compute_band(
                dataset,
                0,
                spec.alpha,
                interval=spec.interval,
                transform=spec.transform,
                weight=spec.weight,
                center=spec.center,
                b_replicates=spec.b_replicates,
                seed=spec.seed,
                seed_path=(rep, _NS_INNER),
            )
            covered += _simultaneous_hit(band, first.lam1, first.lam2)
        except OrderedCifError as exc:
            raise _attach_rep(exc, rep) from exc
    return [_rate_cell("coverage", covered, spec.replications)], []


def _simultaneous_hit(band, lam1: float, lam2: float) -> bool:
    """True when the band contains the true curve over the whole interval.

    The band is constant on [u_j, u_{j+1}) while the truth is continuous
    and increasing, so containment on each piece reduces to the truth at
    the left end staying above the lower limit and the truth at the right
    end staying below the upper limit.
    """
    knots = band.lower.knots
    left = true_cif1(knots, lam1, lam2)
    right_ends = np.concatenate([knots[1:], [band.interval[1]]])
    right = true_cif1(right_ends, lam1, lam2)
    return bool(
        np.all(band.lower.values <= left) and np.all(right <= band.upper.values)
    )


def _run_covmatch(spec: ScenarioSpec) -> tuple[list[dict], list[str]]:
    dataset = _dataset_for(spec, 0)
    group = dataset.groups[0]
    data = build_counting(group)
    if data.num_events < 20:
        raise ConfigError(
            "covariance matching needs a group with at least 20 events; "
            f"got {data.num_events}"
        )
    event_grid = np.unique(data.event_times)
    # ten (s, t) pairs at decile positions of the event grid, s <= t
    deciles = [
        int(q * (event_grid.size - 1)) for q in
        (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    ]
    q = {10 * (i + 1): event_grid[d] for i, d in enumerate(deciles)}
    pairs = [
        (q[10], q[10]), (q[10], q[50]), (q[10], q[90]), (q[30], q[50]),
        (q[30], q[90]), (q[50], q[50]), (q[50], q[70]), (q[50], q[90]),
        (q[70], q[90]), (q[90], q[90]),
    ]
    points = np.unique([t for pair in pairs for t in pair])
    engine = ZhatEngine(
        data, cif_censored(group, 1), cif_censored(group, 2), points
    )
    total = np.zeros((points.size, points.size))
    b = spec.b_replicates
    for r in range(b):
        rng = rng_for(spec.seed, 0, _NS_INNER, r)
        z = engine.values(rng.standard_normal(data.num_events))
        total += np.outer(z, z)
    mc_cov = total / b
    parts = kernel_parts(group)
    index = {t: i for i, t in enumerate(points)}
    cells = []
    for s, t in pairs:
        plug = parts.value(s, t)
        mc = float(mc_cov[index[s], index[t]])
        tol = max(0.10 * abs(plug), 0.01)
        cells.append(
            {
                "s": float(s),
                "t": float(t),
                "mc_cov": mc,
                "plugin_cov": plug,
                "abs_err": abs(mc - plug),
                "tolerance": tol,
                "within_tolerance": bool(abs(mc - plug) <= tol),
            }
        )
    return cells, []
