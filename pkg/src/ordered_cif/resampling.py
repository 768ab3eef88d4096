"""Gaussian-multiplier simulation of the limiting cause-1 incidence
processes, conditional on the observed data.

Each uncensored event carries one independent standard-normal multiplier
per replicate.  The simulated process for a group of size n is

    Zhat(t) = sqrt(n) [ sum over cause-1 events u <= t of (1 - F2(u)) V_e / Y(u)
                      + sum over cause-2 events u <= t of F1(u) V_e / Y(u)
                      - F1(t) * sum over all events u <= t of V_e / Y(u) ]

with F1, F2 the censored-data incidence estimates and Y the at-risk
count.  Its covariance given the data reproduces the plug-in kernel of
the estimators module identically, term by term.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Protocol, Sequence

import numpy as np

from .data import GroupSample, MultiGroupDataset, pooled_event_grid
from .errors import DomainError, PreconditionError
from .estimators import CifEstimate, cif_censored
from .seeding import chunk_ranges, resolve_workers, rng_for
from .stepfun import StepFunction


@dataclass(frozen=True)
class CountingProcessData:
    """Uncensored events of one group, sorted by (time, subject index),
    with the at-risk count at each event's time."""

    label: str
    n: int
    event_times: np.ndarray
    event_causes: np.ndarray
    event_subjects: np.ndarray
    at_risk: np.ndarray

    @property
    def num_events(self) -> int:
        return self.event_times.size


def build_counting(group: GroupSample) -> CountingProcessData:
    order = [
        (t, s) for s, (t, c) in enumerate(zip(group.times, group.causes)) if c != 0
    ]
    order.sort()
    times = np.array([t for t, _ in order], dtype=float)
    subjects = np.array([s for _, s in order], dtype=np.int64)
    causes = group.causes[subjects] if subjects.size else np.empty(0, dtype=np.int64)
    # at risk counts every record, censored or not, with observed time >= u
    at_risk = group.n - np.searchsorted(np.sort(group.times), times, side="left")
    return CountingProcessData(
        label=group.label,
        n=group.n,
        event_times=times,
        event_causes=causes,
        event_subjects=subjects,
        at_risk=at_risk.astype(np.int64),
    )


class ZhatEngine:
    """Precomputed linear map from multiplier vectors to process values
    on a fixed evaluation grid."""

    def __init__(
        self,
        data: CountingProcessData,
        cif1: CifEstimate,
        cif2: CifEstimate,
        grid,
    ):
        grid = np.asarray(grid, dtype=float)
        u = data.event_times
        y = data.at_risk.astype(float)
        f1_at = cif1.f_hat(u) if u.size else np.empty(0)
        f2_at = cif2.f_hat(u) if u.size else np.empty(0)
        cause1 = data.event_causes == 1
        self.coef_event = np.where(cause1, 1.0 - f2_at, f1_at) / np.where(y > 0, y, 1.0)
        self.coef_drift = 1.0 / np.where(y > 0, y, 1.0)
        self.pos = np.searchsorted(u, grid, side="right")
        self.f1_grid = cif1.f_hat(grid)
        self.scale = float(np.sqrt(data.n))
        self.grid = grid
        self.num_events = u.size

    def values_batch(self, normals: np.ndarray) -> np.ndarray:
        """Map (B, events) multipliers to (B, grid) process values."""
        normals = np.atleast_2d(np.asarray(normals, dtype=float))
        if normals.shape[1] != self.num_events:
            raise PreconditionError(
                f"expected {self.num_events} multipliers per replicate, "
                f"got {normals.shape[1]}"
            )
        pad = np.zeros((normals.shape[0], 1))
        a = np.hstack([pad, np.cumsum(self.coef_event * normals, axis=1)])
        c = np.hstack([pad, np.cumsum(self.coef_drift * normals, axis=1)])
        return self.scale * (a[:, self.pos] - self.f1_grid * c[:, self.pos])

    def values(self, normals: np.ndarray) -> np.ndarray:
        return self.values_batch(normals)[0]


def zhat_replicate(
    data: CountingProcessData,
    cif1: CifEstimate,
    cif2: CifEstimate,
    normals,
    grid,
) -> StepFunction:
    """One simulated process as a step function on the given grid."""
    normals = np.asarray(normals, dtype=float)
    if normals.ndim != 1 or normals.size != data.num_events:
        raise PreconditionError(
            f"need exactly one multiplier per uncensored event "
            f"({data.num_events}), got shape {normals.shape}"
        )
    engine = ZhatEngine(data, cif1, cif2, grid)
    return StepFunction(engine.grid, engine.values(normals), 0.0)


class SupFunctional(Protocol):
    """Reduces per-group process replicates to one sup value each.

    ``groups`` names the dataset group indices whose processes are
    needed; multipliers are drawn for exactly those groups, in ascending
    index order, so the draw sequence is part of the seeding contract.
    """

    groups: tuple[int, ...]

    def sups(self, zhats: dict[int, np.ndarray]) -> np.ndarray: ...


@dataclass(frozen=True)
class AbsSup:
    """sup over the grid of |scale(t) * Zhat(t)| for one group."""

    group: int
    scale: np.ndarray | float = 1.0

    @property
    def groups(self) -> tuple[int, ...]:
        return (self.group,)

    def sups(self, zhats: dict[int, np.ndarray]) -> np.ndarray:
        z = zhats[self.group]
        return np.max(np.abs(self.scale * z), axis=1)


@dataclass(frozen=True)
class ReplicateBatch:
    """Sup values of B seeded replicates; reproducible from (data, seed)."""

    b_replicates: int
    seed: int
    sups: np.ndarray
    seed_path: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "b_replicates": self.b_replicates,
            "seed": self.seed,
            "seed_path": list(self.seed_path),
            "sups": [float(v) for v in self.sups],
        }


def replicate_sups(
    dataset: MultiGroupDataset,
    functional: SupFunctional,
    b_replicates: int,
    seed: int,
    grid=None,
    horizon: float | None = None,
    workers: int | None = None,
    seed_path: tuple[int, ...] = (),
) -> ReplicateBatch:
    """Simulate B replicates and record the functional's sup for each.

    Replicate r draws its multipliers from the stream (seed, *seed_path, r),
    so output is identical however the replicate range is chunked across
    workers.  Minimum replicate counts are the caller's policy; small B
    is allowed here for closed-form checks.
    """
    if b_replicates < 1:
        raise PreconditionError(f"need at least one replicate, got {b_replicates}")
    if grid is None:
        grid = pooled_event_grid(dataset)
        if horizon is not None:
            grid = grid[grid <= horizon]
    grid = np.asarray(grid, dtype=float)
    wanted = tuple(sorted(set(functional.groups)))
    engines = {}
    counts = {}
    for i in wanted:
        group = dataset.groups[i]
        data = build_counting(group)
        engines[i] = ZhatEngine(
            data, cif_censored(group, 1), cif_censored(group, 2), grid
        )
        counts[i] = data.num_events
    out = np.empty(b_replicates)

    def run_chunk(chunk: range) -> None:
        draws = {i: np.empty((len(chunk), counts[i])) for i in wanted}
        for row, r in enumerate(chunk):
            rng = rng_for(seed, *seed_path, r)
            for i in wanted:
                draws[i][row] = rng.standard_normal(counts[i])
        zhats = {i: engines[i].values_batch(draws[i]) for i in wanted}
        out[chunk.start : chunk.stop] = functional.sups(zhats)

    chunks = chunk_ranges(b_replicates, resolve_workers(workers))
    if len(chunks) == 1:
        run_chunk(chunks[0])
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            list(pool.map(run_chunk, chunks))
    return ReplicateBatch(
        b_replicates=b_replicates, seed=seed, sups=out, seed_path=seed_path
    )


def sup_quantile(batch: ReplicateBatch, alpha: float) -> float:
    """The ceil((1-alpha) B)-th order statistic of the sup values."""
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    b = batch.b_replicates
    rank = int(np.ceil((1.0 - alpha) * b - 1e-9))
    rank = min(max(rank, 1), b)
    return float(np.sort(batch.sups)[rank - 1])
