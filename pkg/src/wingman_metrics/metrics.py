"""Batch evaluation of the five social-navigation metrics over an encounter.

Naturalness (M1-M3) is the per-sample mean of the squared norm of the
wingman's first, second and third position derivatives. Comfort is the
minimum separation over every frame (M4) and the count of collision-risk
frames (M5).

Closing speed is ``-(r . v_rel) / d`` with ``r = p_h - p_w`` and
``v_rel = v_h - v_w``, so that a positive value means the separation is
shrinking and ``d / v_close`` is the time to reach.
"""

from __future__ import annotations

import numpy as np

from .differentiation import differentiate, dot, squared_norm
from .model import (
    AlertEvent,
    AlertReason,
    Encounter,
    FrameDiagnostics,
    MetricConfig,
    MetricReport,
    Scheme,
    Trajectory,
)


def naturalness(traj: Trajectory, order: int, scheme: Scheme | str = Scheme.CENTRAL) -> float:
    """Mean over all samples of ``|d^n p / dt^n|^2``, in ``(m/s^n)^2``."""
    series = differentiate(traj.validate(), order, scheme)
    return float(np.sum(squared_norm(series.values)) / len(series))


def separation(enc: Encounter) -> np.ndarray:
    r = enc.human.samples - enc.wingman.samples
    return np.sqrt(squared_norm(r))


def min_distance(enc: Encounter) -> tuple[float, float]:
    """Smallest separation over frames 0..T and the earliest time it occurs."""
    d = separation(enc)
    k = int(np.argmin(d))
    return float(d[k]), float(enc.t0 + k * enc.dt)


def classify_frame(d: float, v_close: float, cfg: MetricConfig) -> tuple[float | None, AlertReason | None]:
    """Return ``(ttr, alert)`` for one frame.

    Frames inside the critical distance alert without a time to reach; all
    other frames get a TTR only while closing.
    """
    if d < cfg.degenerate_distance_m or d < cfg.epsilon_m:
        return None, AlertReason.WITHIN_EPSILON
    if v_close > 0:
        ttr = d / v_close
        if ttr < cfg.t_critical_s:
            return ttr, AlertReason.TTR_BELOW_CRITICAL
        return ttr, None
    return None, None


def closing_speed(r: np.ndarray, v_rel: np.ndarray, d: np.ndarray, guard: float) -> np.ndarray:
    """Vectorised ``-(r . v_rel) / d``; zero where ``d`` is below ``guard``."""
    num = dot(r, v_rel)
    safe = d >= guard
    out = np.zeros_like(d)
    np.divide(num, d, out=out, where=safe)
    return np.where(safe, -out, 0.0)


def collision_risk(
    enc: Encounter,
    cfg: MetricConfig | None = None,
    scheme: Scheme | str | None = None,
) -> tuple[int, list[FrameDiagnostics]]:
    """Count collision-risk frames over ``t = 1..T``.

    A frame counts once, either because the agents are closer than
    ``cfg.epsilon_m`` or because they are closing with a time to reach below
    ``cfg.t_critical_s``. Frame 0 is never evaluated. Relative velocity comes
    from the same differentiation scheme used for naturalness.
    """
    cfg = cfg or MetricConfig()
    scheme = Scheme.parse(scheme if scheme is not None else cfg.derivative_scheme)
    # velocity needs two samples for any scheme; central order 1 needs three
    min_len = 3 if scheme is Scheme.CENTRAL else 2
    enc.wingman.validate(min_len)
    enc.human.validate(min_len)

    r = enc.human.samples - enc.wingman.samples
    d = np.sqrt(squared_norm(r))
    v_rel = differentiate(enc.human, 1, scheme).values - differentiate(enc.wingman, 1, scheme).values
    v_close = closing_speed(r, v_rel, d, cfg.degenerate_distance_m)

    times = enc.times
    count = 0
    diagnostics: list[FrameDiagnostics] = []
    for k in range(1, enc.frame_count):
        ttr, alert = classify_frame(float(d[k]), float(v_close[k]), cfg)
        if alert is not None:
            count += 1
        diagnostics.append(
            FrameDiagnostics(
                t=float(times[k]),
                d=float(d[k]),
                r=tuple(float(c) for c in r[k]),
                v_rel=tuple(float(c) for c in v_rel[k]),
                v_close=float(v_close[k]),
                ttr_s=ttr,
                alert=alert,
            )
        )
    return count, diagnostics


def evaluate(enc: Encounter, cfg: MetricConfig | None = None) -> MetricReport:
    """Compute M1-M5 for one encounter."""
    cfg = cfg or MetricConfig()
    scheme = cfg.derivative_scheme
    m1, m2, m3 = (naturalness(enc.wingman, n, scheme) for n in (1, 2, 3))
    m4, m4_time = min_distance(enc)
    m5, diagnostics = collision_risk(enc, cfg, scheme)
    frames = enc.frame_count
    verdicts = cfg.thresholds.verdicts(m1, m2, m3) if cfg.thresholds is not None else None
    return MetricReport(
        m1=m1,
        m2=m2,
        m3=m3,
        m4_m=m4,
        m4_time_s=m4_time,
        m5_count=m5,
        m5_rate=m5 / (frames - 1),
        frame_count=frames,
        threshold_verdicts=verdicts,
        alert_frames=tuple(AlertEvent(f.t, f.alert) for f in diagnostics if f.alert is not None),
        diagnostics=tuple(diagnostics),
    )
