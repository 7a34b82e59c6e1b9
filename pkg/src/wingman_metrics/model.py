"""Shared domain types: trajectories, encounters, configuration and reports.

All quantities are SI (meters, seconds). Nautical miles only appear at the
configuration boundary via :func:`nm_to_m`.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import GridMismatch, NonFinite, TooShort

METERS_PER_NM = 1852.0
DEFAULT_EPSILON_M = 0.5 * METERS_PER_NM
DEFAULT_T_CRITICAL_S = 30.0


def nm_to_m(nm: float) -> float:
    return float(nm) * METERS_PER_NM


def m_to_nm(m: float) -> float:
    return float(m) / METERS_PER_NM


class Role(str, enum.Enum):
    WINGMAN = "Wingman"
    HUMAN = "Human"


class Scheme(str, enum.Enum):
    """Finite-difference stencil family.

    ``BACKWARD`` is the causal set: every derivative uses only current and
    past samples, which is what the streaming evaluator can compute online.
    """

    CENTRAL = "central"
    FORWARD = "forward"
    BACKWARD = "backward"

    @classmethod
    def parse(cls, value: "Scheme | str") -> "Scheme":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            names = ", ".join(s.value for s in cls)
            raise ValueError(f"unknown derivative scheme {value!r} (expected one of {names})") from None


class AlertReason(str, enum.Enum):
    WITHIN_EPSILON = "WithinEpsilon"
    TTR_BELOW_CRITICAL = "TTRBelowCritical"


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    pos: tuple[float, float, float]
    agent_id: str

    def __post_init__(self):
        if not math.isfinite(self.t) or self.t < 0:
            raise NonFinite(f"sample time must be finite and >= 0, got {self.t!r}")
        if len(self.pos) != 3 or not all(math.isfinite(c) for c in self.pos):
            raise NonFinite(f"sample position must be a finite 3-vector, got {self.pos!r}")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Uniformly sampled positions of one agent.

    ``samples`` is stored as a read-only ``(N, 3)`` float64 array. Finiteness
    and length are checked by :meth:`validate` rather than at construction so
    that :func:`validate_encounter` can report them with specific errors.
    """

    agent_id: str
    t0: float
    dt: float
    samples: np.ndarray
    role: Role | None = None

    def __post_init__(self):
        arr = np.array(self.samples, dtype=np.float64, copy=True)
        if arr.ndim != 2 or arr.shape[1] != 3:
            raise ValueError(f"samples must have shape (N, 3), got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be finite and > 0, got {self.dt!r}")
        if not math.isfinite(self.t0):
            raise NonFinite(f"t0 must be finite, got {self.t0!r}")

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(len(self)) * self.dt

    @property
    def duration(self) -> float:
        return (len(self) - 1) * self.dt

    def sample(self, k: int) -> TrajectorySample:
        return TrajectorySample(
            t=float(self.t0 + k * self.dt),
            pos=tuple(float(c) for c in self.samples[k]),
            agent_id=self.agent_id,
        )

    def validate(self, min_len: int = 2) -> "Trajectory":
        n = len(self)
        if n < min_len:
            raise TooShort(
                f"trajectory {self.agent_id!r} has {n} samples, needs {min_len}",
                needed=min_len,
                got=n,
            )
        if not np.all(np.isfinite(self.samples)):
            bad = int(np.argmax(~np.all(np.isfinite(self.samples), axis=1)))
            raise NonFinite(f"trajectory {self.agent_id!r} has a non-finite position at index {bad}")
        return self

    def with_role(self, role: Role) -> "Trajectory":
        return dataclasses.replace(self, role=role)

    def translated(self, offset: Sequence[float]) -> "Trajectory":
        return dataclasses.replace(self, samples=self.samples + np.asarray(offset, dtype=np.float64))

    def reversed(self) -> "Trajectory":
        return dataclasses.replace(self, samples=self.samples[::-1])


@dataclass(frozen=True, eq=False)
class Encounter:
    wingman: Trajectory
    human: Trajectory

    @property
    def t0(self) -> float:
        return self.wingman.t0

    @property
    def dt(self) -> float:
        return self.wingman.dt

    @property
    def frame_count(self) -> int:
        return len(self.wingman)

    @property
    def times(self) -> np.ndarray:
        return self.wingman.times


def validate_encounter(wingman: Trajectory, human: Trajectory) -> Encounter:
    """Pair two trajectories after checking they share one time grid."""
    # precedence: too short, then non-finite, then grid mismatch
    for traj in (wingman, human):
        if len(traj) < 2:
            traj.validate()
    wingman.validate()
    human.validate()
    if len(wingman) != len(human):
        raise GridMismatch(f"sample counts differ: {len(wingman)} vs {len(human)}")
    if wingman.dt != human.dt:
        raise GridMismatch(f"sample periods differ: {wingman.dt!r} vs {human.dt!r}")
    if wingman.t0 != human.t0:
        raise GridMismatch(f"start times differ: {wingman.t0!r} vs {human.t0!r}")
    return Encounter(wingman.with_role(Role.WINGMAN), human.with_role(Role.HUMAN))


@dataclass(frozen=True)
class NaturalnessThresholds:
    """Upper bounds on M1-M3 for one aircraft profile."""

    max_m1: float
    max_m2: float
    max_m3: float
    profile_name: str = "default"

    def __post_init__(self):
        for name in ("max_m1", "max_m2", "max_m3"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be > 0, got {value!r}")

    def verdicts(self, m1: float, m2: float, m3: float) -> dict[str, str]:
        def verdict(value, bound):
            return "pass" if value <= bound else "fail"

        return {
            "m1": verdict(m1, self.max_m1),
            "m2": verdict(m2, self.max_m2),
            "m3": verdict(m3, self.max_m3),
        }


@dataclass(frozen=True)
class MetricConfig:
    epsilon_m: float = DEFAULT_EPSILON_M
    t_critical_s: float = DEFAULT_T_CRITICAL_S
    derivative_scheme: Scheme = Scheme.CENTRAL
    thresholds: NaturalnessThresholds | None = None
    degenerate_distance_m: float = 1e-6

    def __post_init__(self):
        object.__setattr__(self, "derivative_scheme", Scheme.parse(self.derivative_scheme))
        for name in ("epsilon_m", "t_critical_s", "degenerate_distance_m"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")

    def replace(self, **changes) -> "MetricConfig":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class AlertEvent:
    t: float
    reason: AlertReason

    def to_dict(self) -> dict:
        return {"t": self.t, "reason": self.reason.value}


@dataclass(frozen=True)
class FrameDiagnostics:
    t: float
    d: float
    r: tuple[float, float, float]
    v_rel: tuple[float, float, float]
    v_close: float
    ttr_s: float | None
    alert: AlertReason | None


REPORT_FIELDS = (
    "m1",
    "m2",
    "m3",
    "m4_m",
    "m4_time_s",
    "m5_count",
    "m5_rate",
    "frame_count",
    "threshold_verdicts",
    "alert_frames",
)


@dataclass(frozen=True)
class MetricReport:
    m1: float
    m2: float
    m3: float
    m4_m: float
    m4_time_s: float
    m5_count: int
    m5_rate: float
    frame_count: int
    threshold_verdicts: Mapping[str, str] | None = None
    alert_frames: tuple[AlertEvent, ...] = ()
    # per-frame series for plotting; not part of the serialized report
    diagnostics: tuple[FrameDiagnostics, ...] = field(default=(), repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "m1": float(self.m1),
            "m2": float(self.m2),
            "m3": float(self.m3),
            "m4_m": float(self.m4_m),
            "m4_time_s": float(self.m4_time_s),
            "m5_count": int(self.m5_count),
            "m5_rate": float(self.m5_rate),
            "frame_count": int(self.frame_count),
            "threshold_verdicts": None if self.threshold_verdicts is None else dict(self.threshold_verdicts),
            "alert_frames": [a.to_dict() for a in self.alert_frames],
        }
