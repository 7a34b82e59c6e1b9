"""Single-pass evaluator for live telemetry and very long logs.

The stream keeps the last five paired samples and a handful of running
sums. Derivatives use the causal (backward) stencils, so the finalized report
matches :func:`wingman_metrics.metrics.evaluate` run with
``derivative_scheme=Scheme.BACKWARD`` on the same samples.

Collision-risk alerts need only the backward velocity, which is available as
soon as frame ``k`` arrives, so alerts are emitted without lag.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np

from .differentiation import backward_difference, dot, squared_norm
from .errors import IrregularDt, NonFinite, NonMonotonicTime, TooShort
from .metrics import classify_frame
from .model import AlertEvent, MetricConfig, MetricReport

DT_TOLERANCE_S = 1e-6
WINDOW = 5
MIN_FRAMES = 4


class StreamState:
    """Running state for one wingman/human pair.

    Not safe for concurrent pushes; drive one instance from one thread.
    Set ``keep_alerts=False`` to drop the alert log so memory stays constant
    regardless of how many alerts fire (the report's ``alert_frames`` is then
    empty).
    """

    def __init__(self, cfg: MetricConfig | None = None, dt: float | None = None, keep_alerts: bool = True):
        self.cfg = cfg or MetricConfig()
        if dt is not None and not (math.isfinite(dt) and dt > 0):
            raise ValueError(f"dt must be finite and > 0, got {dt!r}")
        self.dt = dt
        self.keep_alerts = keep_alerts
        # rows: [wingman xyz, human xyz]
        self.window: deque[np.ndarray] = deque(maxlen=WINDOW)
        self.sums = [0.0, 0.0, 0.0]
        self.frame_count = 0
        self.last_t: float | None = None
        self.min_d = math.inf
        self.min_t = math.nan
        self.m5_count = 0
        self.alerts: list[AlertEvent] = []

    def push(self, t: float, pos_w, pos_h) -> list[AlertEvent]:
        t = float(t)
        pair = np.empty((2, 3), dtype=np.float64)
        pair[0] = pos_w
        pair[1] = pos_h
        if not (math.isfinite(t) and np.all(np.isfinite(pair))):
            raise NonFinite(f"non-finite sample at t={t!r}")
        dt = self.dt
        if self.last_t is not None:
            step = t - self.last_t
            if not step > 0:
                raise NonMonotonicTime("stream", t)
            if dt is None:
                dt = step
            elif abs(step - dt) > DT_TOLERANCE_S:
                raise IrregularDt(dt, step)

        self.dt = dt
        self.window.append(pair)
        self.last_t = t
        k = self.frame_count
        self.frame_count += 1

        r = pair[1] - pair[0]
        d = float(np.sqrt(squared_norm(r)))
        if d < self.min_d:
            self.min_d = d
            self.min_t = t

        if k == 0:
            return []

        stacked = np.stack(self.window)  # (m, 2, 3), oldest first
        h = self.dt
        for order in (1, 2, 3):
            if k < order:
                break
            deriv = backward_difference(stacked[-(order + 1) :], order, h)[0]
            contrib = float(squared_norm(deriv[0]))
            # frames 0..order-1 reuse the first supported value
            self.sums[order - 1] += contrib * (order + 1) if k == order else contrib

        v = backward_difference(stacked[-2:], 1, h)[0]
        v_rel = v[1] - v[0]
        if d >= self.cfg.degenerate_distance_m:
            v_close = float(-(dot(r, v_rel) / d))
        else:
            v_close = 0.0
        _, alert = classify_frame(d, v_close, self.cfg)
        if alert is None:
            return []
        self.m5_count += 1
        event = AlertEvent(t, alert)
        if self.keep_alerts:
            self.alerts.append(event)
        return [event]

    def finalize(self) -> MetricReport:
        n = self.frame_count
        if n < MIN_FRAMES:
            raise TooShort(f"stream too short: {n} frames, needs {MIN_FRAMES}", needed=MIN_FRAMES, got=n)
        m1, m2, m3 = (s / n for s in self.sums)
        thresholds = self.cfg.thresholds
        return MetricReport(
            m1=m1,
            m2=m2,
            m3=m3,
            m4_m=self.min_d,
            m4_time_s=self.min_t,
            m5_count=self.m5_count,
            m5_rate=self.m5_count / (n - 1),
            frame_count=n,
            threshold_verdicts=thresholds.verdicts(m1, m2, m3) if thresholds is not None else None,
            alert_frames=tuple(self.alerts),
        )


def stream_new(cfg: MetricConfig | None = None, dt: float | None = None) -> StreamState:
    return StreamState(cfg, dt=dt)


def stream_push(state: StreamState, t: float, pos_w, pos_h) -> list[AlertEvent]:
    return state.push(t, pos_w, pos_h)


def stream_finalize(state: StreamState) -> MetricReport:
    return state.finalize()
