"""Multiplier resampling engine, replicate batches, and seeding.

The engine is a linear map from multiplier vectors to process values,
which makes two exact checks possible: a one-event closed form, and a
term-by-term reproduction of the plug-in covariance kernel as the
conditional covariance of the simulated process.
"""

import numpy as np
import pytest

from ordered_cif import (
    AbsSup,
    ConfigError,
    DomainError,
    PreconditionError,
    ReplicateBatch,
    build_counting,
    cif_censored,
    plugin_covariance,
    pooled_event_grid,
    replicate_sups,
    sup_quantile,
    zhat_replicate,
)
from ordered_cif.resampling import ZhatEngine
from ordered_cif.seeding import THREADS_ENV, chunk_ranges, resolve_workers, rng_for
from conftest import make_group, random_dataset, random_group


def engine_for(group, grid):
    return ZhatEngine(
        build_counting(group), cif_censored(group, 1), cif_censored(group, 2), grid
    )


def test_build_counting_orders_events_and_counts_risk():
    g = make_group("a", [(2.0, 1), (1.0, 0), (1.5, 2), (2.0, 2)])
    data = build_counting(g)
    assert data.n == 4
    assert np.array_equal(data.event_times, [1.5, 2.0, 2.0])
    # ties sort by subject position within the group
    assert np.array_equal(data.event_subjects, [2, 0, 3])
    assert np.array_equal(data.event_causes, [2, 1, 2])
    assert np.array_equal(data.at_risk, [3, 2, 2])


def test_build_counting_skips_censored_records():
    g = make_group("a", [(1.0, 0), (2.0, 0)])
    data = build_counting(g)
    assert data.num_events == 0


def test_zhat_single_event_closed_form():
    # one cause-1 event at t=1 with Y=2, F1 jumps to 1/2 there, F2 = 0:
    # Zhat(t) = sqrt(2) V (1 - F1(t)) / 2, so sqrt(2) V / 4 for t >= 1
    g = make_group("a", [(1.0, 1), (2.0, 0)])
    data = build_counting(g)
    f1 = cif_censored(g, 1)
    f2 = cif_censored(g, 2)
    for v in (1.0, -0.7, 2.5):
        z = zhat_replicate(data, f1, f2, [v], np.array([0.5, 1.0, 1.5]))
        assert z(0.5) == 0.0
        assert z(1.0) == pytest.approx(np.sqrt(2) * v / 4, rel=1e-15)
        assert z(1.5) == pytest.approx(np.sqrt(2) * v / 4, rel=1e-15)


def test_zhat_zero_multipliers_give_zero_process(rng):
    g = random_group(rng, 30, censor=0.3)
    data = build_counting(g)
    grid = pooled_event_grid_like(g)
    z = zhat_replicate(data, cif_censored(g, 1), cif_censored(g, 2),
                       np.zeros(data.num_events), grid)
    assert np.all(z.values == 0.0)


def pooled_event_grid_like(group):
    return np.unique(group.times)


def test_zhat_rejects_wrong_multiplier_count(rng):
    g = random_group(rng, 10, censor=0.0)
    data = build_counting(g)
    with pytest.raises(PreconditionError):
        zhat_replicate(data, cif_censored(g, 1), cif_censored(g, 2),
                       np.zeros(data.num_events + 1), [1.0])


def test_engine_is_linear(rng):
    g = random_group(rng, 40, censor=0.2)
    eng = engine_for(g, pooled_event_grid_like(g))
    v1 = rng.standard_normal(eng.num_events)
    v2 = rng.standard_normal(eng.num_events)
    lhs = eng.values(2.0 * v1 - 3.0 * v2)
    rhs = 2.0 * eng.values(v1) - 3.0 * eng.values(v2)
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)


def test_conditional_covariance_reproduces_plugin_kernel(rng):
    """The simulated process is sum_e w_e(t) V_e with deterministic
    weights, so its conditional covariance is sum_e w_e(s) w_e(t).
    Summed directly, that matches the plug-in kernel to rounding."""
    g = random_group(rng, 60, censor=0.3)
    data = build_counting(g)
    f1 = cif_censored(g, 1).f_hat
    f2 = cif_censored(g, 2).f_hat
    u = data.event_times
    y = data.at_risk.astype(float)
    cause1 = data.event_causes == 1
    base = np.where(cause1, 1.0 - f2(u), f1(u)) / y
    drift = 1.0 / y

    def weight(t):
        live = u <= t
        return np.sqrt(data.n) * live * (base - f1(t) * drift)

    grid = np.quantile(u, [0.15, 0.4, 0.6, 0.85])
    for i, s in enumerate(grid):
        for t in grid[i:]:
            cond = float(np.dot(weight(s), weight(t)))
            assert cond == pytest.approx(plugin_covariance(g, s, t), rel=1e-10, abs=1e-12)


def test_replicate_sups_matches_manual_recomputation(rng):
    ds = random_dataset(rng, [20, 25], censor=0.2)
    grid = pooled_event_grid(ds)
    batch = replicate_sups(ds, AbsSup(group=1), b_replicates=3, seed=42)
    eng = engine_for(ds.groups[1], grid)
    for r in range(3):
        v = rng_for(42, r).standard_normal(eng.num_events)
        manual = np.max(np.abs(eng.values(v)))
        assert batch.sups[r] == pytest.approx(manual, rel=1e-12)


def test_replicate_sups_deterministic_and_worker_independent(rng):
    ds = random_dataset(rng, [30, 30], censor=0.25)
    a = replicate_sups(ds, AbsSup(group=0), b_replicates=64, seed=7, workers=1)
    b = replicate_sups(ds, AbsSup(group=0), b_replicates=64, seed=7, workers=5)
    c = replicate_sups(ds, AbsSup(group=0), b_replicates=64, seed=7, workers=64)
    assert np.array_equal(a.sups, b.sups)
    assert np.array_equal(a.sups, c.sups)


def test_replicate_sups_reads_worker_env(rng, monkeypatch):
    ds = random_dataset(rng, [15, 15], censor=0.0)
    base = replicate_sups(ds, AbsSup(group=0), b_replicates=16, seed=3)
    monkeypatch.setenv(THREADS_ENV, "4")
    env = replicate_sups(ds, AbsSup(group=0), b_replicates=16, seed=3)
    assert np.array_equal(base.sups, env.sups)


def test_replicate_sups_seed_path_changes_draws(rng):
    ds = random_dataset(rng, [15, 15], censor=0.0)
    a = replicate_sups(ds, AbsSup(group=0), b_replicates=8, seed=3)
    b = replicate_sups(ds, AbsSup(group=0), b_replicates=8, seed=3, seed_path=(1,))
    assert not np.array_equal(a.sups, b.sups)


def test_replicate_sups_horizon_truncates_grid(rng):
    ds = random_dataset(rng, [40, 40], censor=0.2)
    t_half = float(np.median(pooled_event_grid(ds)))
    full = replicate_sups(ds, AbsSup(group=0), b_replicates=32, seed=9)
    cut = replicate_sups(ds, AbsSup(group=0), b_replicates=32, seed=9, horizon=t_half)
    # sup over a subinterval never exceeds the full-interval sup
    assert np.all(cut.sups <= full.sups + 1e-12)


def test_replicate_sups_rejects_zero_replicates(rng):
    ds = random_dataset(rng, [10, 10], censor=0.0)
    with pytest.raises(PreconditionError):
        replicate_sups(ds, AbsSup(group=0), b_replicates=0, seed=1)


def test_sup_quantile_order_statistic():
    batch = ReplicateBatch(4, 0, np.array([2.0, 4.0, 1.0, 3.0]))
    assert sup_quantile(batch, 0.25) == 3.0
    assert sup_quantile(batch, 0.5) == 2.0
    assert sup_quantile(batch, 0.001) == 4.0
    assert sup_quantile(batch, 0.999) == 1.0


def test_sup_quantile_rejects_bad_alpha():
    batch = ReplicateBatch(2, 0, np.array([1.0, 2.0]))
    for alpha in (0.0, 1.0, -0.5, 2.0):
        with pytest.raises(DomainError):
            sup_quantile(batch, alpha)


def test_rng_for_is_reproducible_and_distinct():
    a = rng_for(5, 1, 2).standard_normal(4)
    b = rng_for(5, 1, 2).standard_normal(4)
    c = rng_for(5, 1, 3).standard_normal(4)
    d = rng_for(6, 1, 2).standard_normal(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_chunk_ranges_partition():
    for total in (1, 5, 17, 100):
        for workers in (1, 2, 3, 7, 200):
            chunks = chunk_ranges(total, workers)
            flat = [i for c in chunks for i in c]
            assert flat == list(range(total))


def test_resolve_workers(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert resolve_workers() == 1
    assert resolve_workers(6) == 6
    monkeypatch.setenv(THREADS_ENV, "3")
    assert resolve_workers() == 3
    monkeypatch.setenv(THREADS_ENV, "zero")
    with pytest.raises(ConfigError):
        resolve_workers()
    with pytest.raises(ConfigError):
        resolve_workers(0)
