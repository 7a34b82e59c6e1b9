import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_encounter
from oracles import head_on_alerts
from wingman_metrics import (
    AlertReason,
    IrregularDt,
    MetricConfig,
    NonMonotonicTime,
    ScenarioKind,
    ScenarioSpec,
    StreamState,
    TooShort,
    evaluate,
    generate,
    stream_finalize,
    stream_new,
    stream_push,
)

CAUSAL = MetricConfig(derivative_scheme="backward")


def run_stream(enc, cfg=CAUSAL, **kw):
    state = StreamState(cfg, **kw)
    alerts = []
    for t, pw, ph in zip(enc.times, enc.wingman.samples, enc.human.samples):
        alerts.extend(state.push(t, pw, ph))
    return state, alerts


def assert_equivalent(batch, stream):
    for name in ("m1", "m2", "m3", "m4_m"):
        assert getattr(stream, name) == pytest.approx(getattr(batch, name), rel=1e-9, abs=0)
    assert stream.m5_count == batch.m5_count
    assert stream.frame_count == batch.frame_count
    assert stream.m4_time_s == batch.m4_time_s
    assert stream.alert_frames == batch.alert_frames


def test_new_state_is_empty():
    state = stream_new()
    assert state.frame_count == 0 and state.cfg == MetricConfig()
    with pytest.raises(TooShort):
        stream_finalize(state)


def test_config_passthrough_and_independence():
    a = stream_new(MetricConfig(epsilon_m=1852.0))
    b = stream_new()
    stream_push(a, 0.0, [0, 0, 0], [1000, 0, 0])
    stream_push(a, 1.0, [0, 0, 0], [1000, 0, 0])
    assert a.cfg.epsilon_m == 1852.0
    assert b.frame_count == 0 and a.m5_count == 1


def test_head_on_stream():
    enc = generate(ScenarioSpec.of("head-on"))
    state, alerts = run_stream(enc)
    assert alerts[0].t == 21.0 and alerts[0].reason is AlertReason.TTR_BELOW_CRITICAL
    assert [(a.t, a.reason.value) for a in alerts] == head_on_alerts()
    report = state.finalize()
    assert report.m5_count == 29 and report.m4_m == 200.0


def test_static_formation_alerts_every_evaluated_frame():
    state = StreamState(MetricConfig(epsilon_m=926.0))
    counts = []
    for k in range(20):
        counts.append(len(state.push(float(k), [0, 0, 1000], [0, 500, 1000])))
    assert counts == [0] + [1] * 19
    report = state.finalize()
    assert report.m5_rate == 1.0 and report.m1 == 0.0


def test_constant_velocity_stream():
    state = StreamState()
    for k in range(100):
        state.push(k * 0.5, [10.0 * k * 0.5, 0, 0], [10.0 * k * 0.5, 5000, 0])
    report = state.finalize()
    assert report.m1 == 100.0 and report.m2 == 0.0 and report.m3 == 0.0


def test_non_monotonic_time():
    state = StreamState()
    state.push(5.0, [0, 0, 0], [1, 0, 0])
    with pytest.raises(NonMonotonicTime):
        state.push(4.0, [0, 0, 0], [1, 0, 0])
    # the rejected sample leaves the state untouched
    assert state.frame_count == 1 and state.dt is None


def test_irregular_dt():
    state = StreamState()
    state.push(0.0, [0, 0, 0], [1, 0, 0])
    state.push(1.0, [0, 0, 0], [1, 0, 0])
    state.push(2.0 + 5e-7, [0, 0, 0], [1, 0, 0])
    with pytest.raises(IrregularDt) as info:
        state.push(3.5, [0, 0, 0], [1, 0, 0])
    assert info.value.expected == 1.0


def test_finalize_after_three_frames():
    state = StreamState()
    for k in range(3):
        state.push(float(k), [k, 0, 0], [0, 100, 0])
    with pytest.raises(TooShort):
        state.finalize()
    state.push(3.0, [3, 0, 0], [0, 100, 0])
    state.finalize()


@pytest.mark.parametrize("kind", list(ScenarioKind))
def test_equivalence_every_scenario(kind):
    enc = generate(ScenarioSpec.of(kind))
    state, _ = run_stream(enc, dt=enc.dt)
    assert_equivalent(evaluate(enc, CAUSAL), state.finalize())


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**20), eps=st.floats(200, 3000), tc=st.floats(5, 90))
def test_equivalence_random(seed, eps, tc):
    cfg = MetricConfig(epsilon_m=eps, t_critical_s=tc, derivative_scheme="backward")
    enc = random_encounter(seed, duration_s=40.0, dt_s=0.5)
    state, alerts = run_stream(enc, cfg)
    batch = evaluate(enc, cfg)
    assert_equivalent(batch, state.finalize())
    assert tuple(alerts) == batch.alert_frames


def test_window_is_bounded():
    enc = random_encounter(3, duration_s=500.0)
    state = StreamState(keep_alerts=False)
    sizes = set()
    for t, pw, ph in zip(enc.times, enc.wingman.samples, enc.human.samples):
        state.push(t, pw, ph)
        sizes.add(len(state.window))
        assert all(s >= 0 for s in state.sums)
    assert max(sizes) == 5
    assert state.alerts == []
    baseline = sum(sys.getsizeof(v) for v in vars(state).values())
    state.push(enc.times[-1] + enc.dt, [0, 0, 0], [9e3, 0, 0])
    assert sum(sys.getsizeof(v) for v in vars(state).values()) == baseline


def test_thresholds_carried_to_stream_report():
    from wingman_metrics import NaturalnessThresholds

    cfg = MetricConfig(thresholds=NaturalnessThresholds(1.0, 1.0, 1.0))
    state = StreamState(cfg)
    for k in range(6):
        state.push(float(k), [10.0 * k, 0, 0], [0, 3000, 0])
    assert state.finalize().threshold_verdicts == {"m1": "fail", "m2": "pass", "m3": "pass"}
