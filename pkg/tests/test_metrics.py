import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_encounter
from oracles import head_on_alerts, scan_min_distance
from wingman_metrics import (
    AlertReason,
    MetricConfig,
    NaturalnessThresholds,
    Scheme,
    Trajectory,
    collision_risk,
    evaluate,
    min_distance,
    naturalness,
    validate_encounter,
)


def straight(start, vel, n, dt=1.0, agent="a", t0=0.0):
    t = np.arange(n)[:, None] * dt
    return Trajectory(agent, t0, dt, np.asarray(start, float) + t * np.asarray(vel, float))


def pair(w, h):
    return validate_encounter(w, h)


def head_on(frames=50):
    return pair(
        straight([0, 0, 3000], [100, 0, 0], frames, agent="w"),
        straight([10000, 0, 3000], [-100, 0, 0], frames, agent="h"),
    )


def orbit(R=5000.0, w=0.02, dt=0.1, n=10000, lag=0.0):
    t = np.arange(n) * dt
    th = w * t - lag
    return Trajectory("o", 0.0, dt, np.column_stack([R * np.cos(th), R * np.sin(th), np.full(n, 6000.0)]))


# -- naturalness ---------------------------------------------------------------


@pytest.mark.parametrize("n", [5, 6, 50])
@pytest.mark.parametrize("scheme", list(Scheme))
def test_constant_velocity_naturalness(n, scheme):
    traj = straight([0, 0, 1000], [10, 0, 0], n)
    assert naturalness(traj, 1, scheme) == pytest.approx(100.0, rel=1e-12)
    assert naturalness(traj, 2, scheme) == 0.0
    assert naturalness(traj, 3, scheme) == 0.0


def test_static_trajectory_is_zero():
    traj = straight([1, 2, 3], [0, 0, 0], 10)
    assert [naturalness(traj, n) for n in (1, 2, 3)] == [0.0, 0.0, 0.0]


def test_circular_orbit_closed_form():
    # |v| = R w, |a| = R w^2, |j| = R w^3 for uniform circular motion
    R, w = 5000.0, 0.02
    traj = orbit(R, w)
    assert naturalness(traj, 1) == pytest.approx(R**2 * w**2, rel=0.01)
    assert naturalness(traj, 2) == pytest.approx(R**2 * w**4, rel=0.01)
    assert naturalness(traj, 3) == pytest.approx(R**2 * w**6, rel=0.01)
    assert R**2 * w**2 == pytest.approx(10000.0)
    assert R**2 * w**4 == pytest.approx(4.0)
    assert R**2 * w**6 == pytest.approx(1.6e-3)


def test_constant_acceleration():
    dt, n = 0.5, 400
    t = np.arange(n) * dt
    a = np.array([3.0, -4.0, 0.0])
    p = 0.5 * np.outer(t**2, a) + np.outer(t, [50.0, 0, 0])
    traj = Trajectory("a", 0.0, dt, p)
    assert naturalness(traj, 2) == pytest.approx(25.0, rel=1e-6)


def test_naturalness_counts_every_sample():
    # boundary samples enter the mean through one-sided stencils
    traj = Trajectory("a", 0.0, 1.0, np.array([[0, 0, 0], [1, 0, 0], [4, 0, 0], [9, 0, 0.0]]))
    # central velocity: [1, 2, 4, 5]
    assert naturalness(traj, 1) == pytest.approx((1 + 4 + 16 + 25) / 4)


# -- minimum distance ----------------------------------------------------------


def test_parallel_lines_min_distance_earliest():
    enc = pair(straight([0, 0, 0], [10, 0, 0], 20), straight([0, 300, 0], [10, 0, 0], 20))
    assert min_distance(enc) == (300.0, 0.0)


def test_head_on_min_distance():
    assert min_distance(head_on()) == (200.0, 49.0)


@pytest.mark.parametrize("seed", range(40))
def test_min_distance_matches_scan(seed):
    enc = random_encounter(seed)
    got = min_distance(enc)
    assert got == scan_min_distance(enc.wingman.samples.tolist(), enc.human.samples.tolist(), enc.t0, enc.dt)


# -- collision risk ------------------------------------------------------------


def test_formation_inside_epsilon_flags_every_evaluated_frame():
    enc = pair(straight([0, 0, 0], [10, 0, 0], 100), straight([0, 500, 0], [10, 0, 0], 100))
    count, diags = collision_risk(enc, MetricConfig(epsilon_m=926.0))
    assert count == 99
    assert len(diags) == 99 and diags[0].t == 1.0
    assert all(d.alert is AlertReason.WITHIN_EPSILON and d.ttr_s is None for d in diags)


def test_receding_agents_never_flag():
    enc = pair(straight([0, 0, 0], [-50, 0, 0], 60), straight([2000, 0, 0], [50, 0, 0], 60))
    count, diags = collision_risk(enc)
    assert count == 0
    assert all(d.v_close < 0 for d in diags)


def test_head_on_matches_oracle():
    count, diags = collision_risk(head_on(), MetricConfig(epsilon_m=926.0, t_critical_s=30.0))
    got = [(d.t, d.alert.value) for d in diags if d.alert is not None]
    expected = head_on_alerts()
    assert count == len(expected) == 29
    assert got == expected
    assert got[0] == (21.0, "TTRBelowCritical")
    assert [t for t, r in got if r == "WithinEpsilon"] == [46.0, 47.0, 48.0, 49.0]


def test_head_on_ttr_and_closing_speed():
    _, diags = collision_risk(head_on())
    d20 = diags[19]
    assert d20.t == 20.0 and d20.v_close == 200.0 and d20.ttr_s == 30.0 and d20.alert is None


def test_diagnostic_invariants():
    cfg = MetricConfig()
    for seed in range(10):
        _, diags = collision_risk(random_encounter(seed), cfg)
        for f in diags:
            assert f.d == pytest.approx(math.hypot(*f.r), rel=1e-9)
            assert (f.ttr_s is not None) == (f.v_close > 0 and f.d >= cfg.epsilon_m)


def test_degenerate_distance_counts_as_within_epsilon():
    w = straight([0, 0, 0], [10, 0, 0], 5)
    enc = pair(w, Trajectory("h", 0.0, 1.0, w.samples))
    cfg = MetricConfig(epsilon_m=1e-9, degenerate_distance_m=1e-6)
    count, diags = collision_risk(enc, cfg)
    assert count == 4
    assert all(d.alert is AlertReason.WITHIN_EPSILON and d.v_close == 0.0 for d in diags)


# -- evaluate ------------------------------------------------------------------


def test_evaluate_formation_hold():
    enc = pair(straight([0, 0, 3000], [10, 0, 0], 100), straight([0, 300, 3000], [10, 0, 0], 100))
    report = evaluate(enc)
    assert report.m1 == pytest.approx(100.0)
    assert report.m2 == pytest.approx(0.0, abs=1e-12) and report.m3 == pytest.approx(0.0, abs=1e-12)
    assert report.m4_m == 300.0 and report.m4_time_s == 0.0
    assert report.m5_count == 99 and report.m5_rate == 1.0
    assert report.frame_count == 100
    assert report.threshold_verdicts is None


def test_thresholds_on_orbit_all_pass():
    traj = orbit()
    enc = pair(traj, orbit(lag=0.5))
    th = NaturalnessThresholds(max_m1=1e6, max_m2=100, max_m3=10, profile_name="test")
    report = evaluate(enc, MetricConfig(thresholds=th))
    assert report.threshold_verdicts == {"m1": "pass", "m2": "pass", "m3": "pass"}
    strict = NaturalnessThresholds(max_m1=1e6, max_m2=1.0, max_m3=10)
    assert evaluate(enc, MetricConfig(thresholds=strict)).threshold_verdicts["m2"] == "fail"


def test_report_alert_frames_mirror_diagnostics():
    report = evaluate(head_on())
    assert [(a.t, a.reason.value) for a in report.alert_frames] == head_on_alerts()
    assert report.m5_rate == pytest.approx(29 / 49)


def test_evaluate_too_short():
    from wingman_metrics import TooShort

    enc = pair(straight([0, 0, 0], [1, 0, 0], 4), straight([0, 10, 0], [1, 0, 0], 4))
    with pytest.raises(TooShort):
        evaluate(enc)
    evaluate(enc, MetricConfig(derivative_scheme="backward"))


# -- invariants ----------------------------------------------------------------


seeds = st.integers(0, 10_000)


@settings(max_examples=40, deadline=None)
@given(seed=seeds, scheme=st.sampled_from(list(Scheme)))
def test_non_negative_and_bounded(seed, scheme):
    r = evaluate(random_encounter(seed), MetricConfig(derivative_scheme=scheme))
    assert min(r.m1, r.m2, r.m3, r.m4_m, r.m5_count) >= 0
    assert 0 <= r.m5_count <= r.frame_count - 1
    assert 0.0 <= r.m5_rate <= 1.0


@settings(max_examples=30, deadline=None)
@given(seed=seeds, offset=st.tuples(*(st.floats(-1e5, 1e5) for _ in range(3))))
def test_translation_invariance(seed, offset):
    enc = random_encounter(seed)
    moved = validate_encounter(enc.wingman.translated(offset), enc.human.translated(offset))
    a, b = evaluate(enc), evaluate(moved)
    for name in ("m1", "m2", "m3", "m4_m"):
        assert getattr(b, name) == pytest.approx(getattr(a, name), rel=1e-9)
    assert a.m4_time_s == pytest.approx(b.m4_time_s, abs=enc.dt * (enc.frame_count - 1))


@pytest.mark.parametrize("seed", range(15))
def test_time_reversal(seed):
    enc = random_encounter(seed)
    rev = validate_encounter(enc.wingman.reversed(), enc.human.reversed())
    a, b = evaluate(enc), evaluate(rev)
    for name in ("m1", "m2", "m3", "m4_m"):
        assert getattr(b, name) == pytest.approx(getattr(a, name), rel=1e-9)


def test_reversed_head_on_only_within_epsilon():
    enc = head_on()
    rev = validate_encounter(enc.wingman.reversed(), enc.human.reversed())
    report = evaluate(rev)
    assert all(a.reason is AlertReason.WITHIN_EPSILON for a in report.alert_frames)
    # original frames 46..48 are inside 926 m; original frame 49 becomes frame 0, never evaluated
    assert report.m5_count == 3


@settings(max_examples=40, deadline=None)
@given(
    seed=seeds,
    eps=st.floats(100, 5000),
    eps_extra=st.floats(0, 5000),
    tc=st.floats(1, 120),
    tc_extra=st.floats(0, 120),
)
def test_m5_monotone(seed, eps, eps_extra, tc, tc_extra):
    enc = random_encounter(seed)
    base = collision_risk(enc, MetricConfig(epsilon_m=eps, t_critical_s=tc))[0]
    assert collision_risk(enc, MetricConfig(epsilon_m=eps + eps_extra, t_critical_s=tc))[0] >= base
    assert collision_risk(enc, MetricConfig(epsilon_m=eps, t_critical_s=tc + tc_extra))[0] >= base


@pytest.mark.parametrize("s", [2.0, 3.0, 0.5])
def test_velocity_scaling_covariance(s):
    dt, n = 1.0, 30
    t = np.arange(n) * dt
    coeffs = np.array([[1.0, -2.0, 0.5], [3.0, 0.2, -1.0], [0.1, 0.05, 0.02], [0.01, -0.002, 0.003]])
    p = sum(np.outer(t**j, coeffs[j]) for j in range(4))
    slow = Trajectory("a", 0.0, dt, p)
    fast = Trajectory("a", 0.0, dt / s, p)
    for order, power in ((1, 2), (2, 4), (3, 6)):
        assert naturalness(fast, order) == pytest.approx(s**power * naturalness(slow, order), rel=1e-6)
