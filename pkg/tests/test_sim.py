import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric3d.sim import (
    CSV_HEADER,
    DECODE_FAILURE,
    LOGICAL,
    TRIVIAL,
    DecoderOptions,
    LatticeContext,
    LatticeSource,
    PointResult,
    TrialConfig,
    TrialRecord,
    crossing,
    default_threads,
    fit_power_law,
    run_point,
    run_sweep,
    run_trial,
    sample_error,
    trial_rng,
)


def test_sample_error_extremes():
    rng = np.random.default_rng(0)
    for _ in range(20):
        assert len(sample_error(192, 0.0, rng)) == 0
        assert len(sample_error(192, 1.0, rng)) == 192
    with pytest.raises(ValueError):
        sample_error(10, 1.5, rng)


def test_sample_error_mean_weight():
    weights = [len(sample_error(192, 0.1, trial_rng(0, 4, 0.1, i))) for i in range(10_000)]
    sigma = math.sqrt(192 * 0.1 * 0.9 / 10_000)
    assert abs(np.mean(weights) - 19.2) < 5 * sigma


def test_trial_rng_depends_on_every_key():
    base = trial_rng(1, 4, 0.1, 7).random(4).tolist()
    assert trial_rng(1, 4, 0.1, 7).random(4).tolist() == base
    for other in (trial_rng(2, 4, 0.1, 7), trial_rng(1, 6, 0.1, 7), trial_rng(1, 4, 0.11, 7), trial_rng(1, 4, 0.1, 8)):
        assert other.random(4).tolist() != base


def test_config_validation():
    src = LatticeSource("cubic-torus", 3)
    with pytest.raises(ValueError):
        TrialConfig(src, -0.1)
    with pytest.raises(ValueError):
        TrialConfig(src, 0.1, max_trials=0)
    with pytest.raises(ValueError):
        TrialConfig(src, 0.1, max_logical=0)


def test_trial_outcomes():
    ctx = LatticeContext.from_source(LatticeSource("cubic-torus", 3))
    config = TrialConfig(LatticeSource("cubic-torus", 3), 0.0)
    assert run_trial(ctx, config, 0).kind == TRIVIAL
    c = ctx.lattice
    x = ctx.basis.x_reps[0]
    rec = run_trial(ctx, config, 0, forced_error=x, forced_estimate=c.face_set())
    assert rec.kind == LOGICAL and rec.failed


def test_trial_outcome_on_a_slab():
    src = LatticeSource("rough-slab", 3)
    ctx = LatticeContext.from_source(src)
    config = TrialConfig(src, 0.0)
    assert run_trial(ctx, config, 0).kind == TRIVIAL
    x = ctx.basis.x_reps[0]
    assert run_trial(ctx, config, 0, forced_error=x, forced_estimate=ctx.lattice.face_set()).kind == LOGICAL


def test_point_accounting():
    r = PointResult("cubic-torus", 3, 81, 0.1, 0)
    r.add(TrialRecord(TRIVIAL, "Success", 0.001))
    r.add(TrialRecord(LOGICAL, "Success", 0.001, retry_used=True))
    r.add(TrialRecord(DECODE_FAILURE, "KleinBottleSuspected", 0.001, True, True))
    assert (r.trials, r.logical_failures, r.decode_failures, r.failures) == (3, 1, 1, 2)
    assert r.retry_trials == 2 and r.projection_failures == 1
    assert r.failures_by_status == {"KleinBottleSuspected": 1}
    assert math.isclose(r.logical_rate, 2 / 3)
    assert math.isclose(r.stderr, math.sqrt(2 / 3 * 1 / 3 / 3))
    assert r.csv_row(timing=False) == "cubic-torus,3,81,0.1,3,1,2,0.666667,0.272166,,0"


def test_monotone_in_p():
    src = LatticeSource("cubic-torus", 4)
    low = run_point(TrialConfig(src, 0.05, max_trials=1000, max_logical=10**6))
    high = run_point(TrialConfig(src, 0.15, max_trials=1000, max_logical=10**6))
    assert low.trials == high.trials == 1000
    assert low.logical_rate < high.logical_rate


def test_zero_noise_sweep():
    rep = run_sweep("cubic-torus", [4], [0.0], max_trials=50)
    assert rep.rows[0].failures == 0 and rep.rows[0].trials == 50
    assert rep.rate(4, 0.0) == 0.0


def test_stop_rule_ends_a_point_early():
    src = LatticeSource("cubic-torus", 3)
    r = run_point(TrialConfig(src, 0.2, max_trials=10_000, max_logical=5))
    assert r.failures == 5
    assert r.trials < 10_000


@pytest.mark.slow
def test_ordering_flips_across_threshold():
    opts = dict(max_trials=1000, max_logical=10**6, threads=4)
    rep = run_sweep("cubic-torus", [4, 6], [0.09, 0.15], **opts)
    assert rep.rate(6, 0.09) < rep.rate(4, 0.09)
    assert rep.rate(6, 0.15) > rep.rate(4, 0.15)


def test_report_does_not_depend_on_worker_count():
    kw = dict(seed=3, max_trials=300, max_logical=40)
    one = run_sweep("cubic-torus", [3], [0.08, 0.12], threads=1, **kw)
    three = run_sweep("cubic-torus", [3], [0.08, 0.12], threads=3, **kw)
    assert one.to_csv(timing=False) == three.to_csv(timing=False)
    assert one.to_json(timing=False) == three.to_json(timing=False)


def test_csv_layout():
    rep = run_sweep("cubic-torus", [3], [0.0], max_trials=10)
    lines = rep.to_csv().splitlines()
    assert lines[0] == CSV_HEADER
    assert CSV_HEADER == "family,L,n,p,trials,decode_failures,logical_failures,logical_rate,stderr,mean_decode_ms,seed"
    fields = lines[1].split(",")
    assert len(fields) == 11 and fields[0] == "cubic-torus" and fields[2] == "81"
    assert float(fields[9]) >= 0
    assert rep.to_csv(timing=False).splitlines()[1].split(",")[9] == ""


def test_general_estimator_and_fallback_options():
    src = LatticeSource("cubic-torus", 3)
    opts = DecoderOptions("general", 1, True)
    r = run_point(TrialConfig(src, 0.1, max_trials=200, options=opts))
    assert r.trials == 200
    assert r.decode_failures == 0


def test_crossing_helper():
    ps = [0.1, 0.2, 0.3]
    assert crossing(ps, [0.1, 0.3, 0.5], [0.2, 0.3, 0.4]) == [0.2]
    (x,) = crossing(ps, [0.0, 0.4, 0.5], [0.2, 0.2, 0.2])
    assert math.isclose(x, 0.15)
    assert crossing(ps, [0.1, 0.2, 0.3], [0.2, 0.3, 0.4]) == []


@settings(max_examples=50, deadline=None)
@given(
    c=st.floats(1e-4, 10.0),
    alpha=st.floats(0.5, 3.0),
    ns=st.lists(st.integers(10, 10_000), min_size=3, max_size=6, unique=True),
)
def test_power_law_fit_recovers_exponent(c, alpha, ns):
    ts = [c * n**alpha for n in ns]
    c_fit, a_fit = fit_power_law(ns, ts)
    assert math.isclose(a_fit, alpha, rel_tol=1e-6)
    assert math.isclose(c_fit, c, rel_tol=1e-5)


def test_thread_default_from_environment(monkeypatch):
    monkeypatch.delenv("TORIC3D_THREADS", raising=False)
    assert default_threads() == 1
    monkeypatch.setenv("TORIC3D_THREADS", "3")
    assert default_threads() == 3
    monkeypatch.setenv("TORIC3D_THREADS", "many")
    assert default_threads() == 1
