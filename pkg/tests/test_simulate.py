"""Data generation under constant hazards and the Monte Carlo studies."""

import json

import numpy as np
import pytest

from ordered_cif import (
    ConfigError,
    ScenarioSpec,
    cif_censored,
    gen_competing,
    load_scenario,
    run_study,
    true_cif1,
)
from ordered_cif.simulate import GroupScenario


def test_true_cif1_closed_form():
    # limit mass is lam1/(lam1+lam2); half the all-cause mass at median
    assert true_cif1(np.inf, 1.0, 3.0) == pytest.approx(0.25)
    assert true_cif1(0.0, 1.0, 3.0) == 0.0
    t_med = np.log(2.0) / 4.0
    assert true_cif1(t_med, 1.0, 3.0) == pytest.approx(0.125)


def test_gen_competing_shares_match_rates():
    g = gen_competing(40000, lam1=1.0, lam2=1.0, lamc=2 / 3, seed=9)
    causes = g.causes
    censored = np.mean(causes == 0)
    assert censored == pytest.approx(2 / 3 / (1 + 1 + 2 / 3), abs=0.01)
    events = causes[causes != 0]
    assert np.mean(events == 1) == pytest.approx(0.5, abs=0.01)


def test_gen_competing_uncensored_when_rate_zero():
    g = gen_competing(500, 1.0, 0.5, lamc=0.0, seed=3)
    assert np.all(g.causes != 0)
    assert np.all(g.causes[g.causes != 1] == 2)


def test_gen_competing_estimator_recovers_truth():
    g = gen_competing(20000, lam1=2.0, lam2=1.0, seed=4)
    f1 = cif_censored(g, 1).f_hat
    for t in (0.1, 0.3, 0.8):
        assert f1(t) == pytest.approx(float(true_cif1(t, 2.0, 1.0)), abs=0.015)


def test_gen_competing_reproducible_by_seed():
    a = gen_competing(50, 1.0, 1.0, lamc=0.5, seed=7)
    b = gen_competing(50, 1.0, 1.0, lamc=0.5, seed=7)
    c = gen_competing(50, 1.0, 1.0, lamc=0.5, seed=8)
    assert np.array_equal(a.times, b.times)
    assert np.array_equal(a.causes, b.causes)
    assert not np.array_equal(a.times, c.times)


def test_gen_competing_rejects_bad_rates():
    with pytest.raises(ConfigError):
        gen_competing(10, 0.0, 0.0)
    with pytest.raises(ConfigError):
        gen_competing(10, 1.0, -0.5)


def scenario_dict(**overrides):
    raw = {
        "study": "size",
        "groups": [
            {"n": 40, "lam1": 0.9, "lam2": 0.1},
            {"n": 40, "lam1": 0.9, "lam2": 0.1},
        ],
        "replications": 25,
        "seed": 12,
    }
    raw.update(overrides)
    return raw


def test_scenario_from_dict_defaults():
    spec = ScenarioSpec.from_dict(scenario_dict())
    assert spec.alpha == 0.05
    assert spec.b_replicates == 1000
    assert spec.transform == "identity"
    assert not spec.censored


def test_scenario_round_trip():
    spec = ScenarioSpec.from_dict(scenario_dict(alpha=0.1, interval=[0.2, 0.8]))
    again = ScenarioSpec.from_dict(spec.to_dict())
    assert again == spec


def test_scenario_rejects_unknown_and_missing_fields():
    with pytest.raises(ConfigError, match="unknown"):
        ScenarioSpec.from_dict(scenario_dict(extra=1))
    bad = scenario_dict()
    del bad["seed"]
    with pytest.raises(ConfigError, match="seed"):
        ScenarioSpec.from_dict(bad)
    with pytest.raises(ConfigError, match="study"):
        ScenarioSpec.from_dict(scenario_dict(study="bootstrap"))
    with pytest.raises(ConfigError, match="group"):
        ScenarioSpec.from_dict(scenario_dict(groups=[{"n": 10}]))


def test_group_scenario_validation():
    with pytest.raises(ConfigError):
        GroupScenario(n=0, lam1=1.0, lam2=1.0)
    with pytest.raises(ConfigError):
        GroupScenario(n=10, lam1=0.0, lam2=0.0)


def test_load_scenario_json_and_toml(tmp_path):
    raw = scenario_dict()
    jpath = tmp_path / "s.json"
    jpath.write_text(json.dumps(raw))
    tpath = tmp_path / "s.toml"
    tpath.write_text(
        'study = "size"\nreplications = 25\nseed = 12\n'
        "[[groups]]\nn = 40\nlam1 = 0.9\nlam2 = 0.1\n"
        "[[groups]]\nn = 40\nlam1 = 0.9\nlam2 = 0.1\n"
    )
    assert load_scenario(jpath) == load_scenario(tpath)


def test_load_scenario_bad_file(tmp_path):
    p = tmp_path / "s.json"
    p.write_text("{not json")
    with pytest.raises(ConfigError, match="parse"):
        load_scenario(p)
    with pytest.raises(ConfigError, match="read"):
        load_scenario(tmp_path / "absent.json")


def test_size_study_runs_and_reports():
    spec = ScenarioSpec.from_dict(scenario_dict())
    report = run_study(spec)
    metrics = {c["metric"]: c for c in report.cells}
    assert set(metrics) == {"rejection_rate", "mean_statistic", "two_sided_rejection_rate"}
    assert 0.0 <= metrics["rejection_rate"]["value"] <= 1.0
    assert report.scenario["study"] == "size"


def test_size_study_censored_uses_resampling():
    raw = scenario_dict(
        groups=[
            {"n": 30, "lam1": 1.0, "lam2": 1.0, "lamc": 0.5},
            {"n": 30, "lam1": 1.0, "lam2": 1.0, "lamc": 0.5},
        ],
        replications=6,
        b_replicates=120,
    )
    report = run_study(ScenarioSpec.from_dict(raw))
    metrics = {c["metric"] for c in report.cells}
    # the two-sided comparator only exists for the uncensored closed form
    assert metrics == {"rejection_rate", "mean_statistic"}


def test_power_study_detects_strong_ordering():
    raw = scenario_dict(
        study="power",
        groups=[
            {"n": 120, "lam1": 0.3, "lam2": 0.7},
            {"n": 120, "lam1": 1.5, "lam2": 0.5},
        ],
        replications=30,
    )
    report = run_study(ScenarioSpec.from_dict(raw))
    rate = next(c for c in report.cells if c["metric"] == "rejection_rate")
    assert rate["value"] >= 0.9


def test_run_study_is_deterministic():
    spec = ScenarioSpec.from_dict(scenario_dict(replications=12))
    a = run_study(spec).to_dict()
    b = run_study(spec).to_dict()
    assert a == b


def test_mse_study_reports_per_group_cells():
    raw = scenario_dict(study="mse", replications=40)
    report = run_study(ScenarioSpec.from_dict(raw))
    assert len(report.cells) == 2
    for cell in report.cells:
        assert cell["mse_unrestricted"] >= 0
        assert cell["mse_restricted"] >= 0
        assert cell["eval_time"] == pytest.approx(np.log(2.0))
        assert cell["true_value"] == pytest.approx(float(true_cif1(np.log(2.0), 0.9, 0.1)))


def test_mse_study_honors_eval_time():
    raw = scenario_dict(study="mse", replications=10, eval_time=0.25)
    report = run_study(ScenarioSpec.from_dict(raw))
    assert report.cells[0]["eval_time"] == 0.25


def test_coverage_study_small_run():
    raw = scenario_dict(
        study="coverage",
        groups=[
            {"n": 120, "lam1": 1.0, "lam2": 1.0},
            {"n": 120, "lam1": 1.0, "lam2": 1.0},
        ],
        replications=40,
        b_replicates=150,
        interval=[0.1, 0.7],
    )
    report = run_study(ScenarioSpec.from_dict(raw))
    cell = report.cells[0]
    assert cell["metric"] == "coverage"
    # loose sanity bound: nominal 95%, tiny replication budget
    assert cell["value"] >= 0.8


def test_covmatch_study_within_tolerance():
    raw = scenario_dict(
        study="covmatch",
        groups=[
            {"n": 150, "lam1": 1.0, "lam2": 1.0, "lamc": 2 / 3},
            {"n": 150, "lam1": 1.0, "lam2": 1.0, "lamc": 2 / 3},
        ],
        replications=1,
        b_replicates=1500,
    )
    report = run_study(ScenarioSpec.from_dict(raw))
    assert len(report.cells) == 10
    for cell in report.cells:
        assert cell["s"] <= cell["t"]
        assert cell["within_tolerance"]


def test_covmatch_needs_enough_events():
    raw = scenario_dict(
        study="covmatch",
        groups=[
            {"n": 5, "lam1": 1.0, "lam2": 1.0},
            {"n": 5, "lam1": 1.0, "lam2": 1.0},
        ],
        replications=1,
        b_replicates=200,
    )
    with pytest.raises(ConfigError, match="20 events"):
        run_study(ScenarioSpec.from_dict(raw))
