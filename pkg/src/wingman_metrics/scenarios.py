"""Kinematic encounter fixtures with analytically known metric values.

Every kind except ``random`` has an expectation record computed from the
scenario parameters alone (closed-form positions, velocities and derivatives),
never from the finite-difference path it is used to check.

Kinds and parameters (SI units; vectors are ``[x, y, z]``):

constant-velocity
    ``wingman_start``, ``wingman_velocity``, ``human_start``, ``human_velocity``
formation-hold
    ``start``, ``velocity``, ``offset`` (human = wingman + offset)
circular-cap
    ``radius``, ``omega``, ``phase_lag``, ``center``, ``vertical_offset``;
    both agents fly the same orbit, the human trailing by ``phase_lag`` rad
head-on
    ``separation``, ``speed`` (each agent), ``lateral_offset``, ``altitude``
crossing-tracks
    ``wingman_distance``, ``wingman_speed`` (along +x toward the crossing
    point), ``human_distance``, ``human_speed`` (along +y), ``altitude``,
    ``vertical_offset``
random
    ``seed``; smooth sums of sinusoids on top of straight-line motion

All kinds also accept ``duration_s``, ``dt_s`` and ``t0_s``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from .errors import InvalidSpec, NoClosedForm
from .model import Encounter, MetricConfig, MetricReport, Trajectory, validate_encounter

WINGMAN_ID = "w1"
HUMAN_ID = "h1"


class ScenarioKind(str, enum.Enum):
    CONSTANT_VELOCITY = "constant-velocity"
    FORMATION_HOLD = "formation-hold"
    CIRCULAR_CAP = "circular-cap"
    HEAD_ON = "head-on"
    CROSSING_TRACKS = "crossing-tracks"
    RANDOM = "random"

    @classmethod
    def parse(cls, value: "ScenarioKind | str") -> "ScenarioKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        for kind in cls:
            if key in (kind.value, kind.name.lower().replace("_", "-"), kind.value.replace("-", "")):
                return kind
        names = ", ".join(k.value for k in cls)
        raise InvalidSpec(f"unknown scenario {value!r} (expected one of {names})")


DEFAULTS: dict[ScenarioKind, dict[str, Any]] = {
    ScenarioKind.CONSTANT_VELOCITY: dict(
        duration_s=100.0,
        dt_s=1.0,
        wingman_start=(0.0, 0.0, 3000.0),
        wingman_velocity=(10.0, 0.0, 0.0),
        human_start=(0.0, 2000.0, 3000.0),
        human_velocity=(15.0, 0.0, 0.0),
    ),
    ScenarioKind.FORMATION_HOLD: dict(
        duration_s=99.0,
        dt_s=1.0,
        start=(0.0, 0.0, 3000.0),
        velocity=(10.0, 0.0, 0.0),
        offset=(0.0, 300.0, 0.0),
    ),
    ScenarioKind.CIRCULAR_CAP: dict(
        duration_s=999.9,
        dt_s=0.1,
        radius=5000.0,
        omega=0.02,
        phase_lag=0.1,
        center=(0.0, 0.0, 6000.0),
        vertical_offset=0.0,
    ),
    ScenarioKind.HEAD_ON: dict(
        duration_s=49.0,
        dt_s=1.0,
        separation=10000.0,
        speed=100.0,
        lateral_offset=0.0,
        altitude=3000.0,
    ),
    ScenarioKind.CROSSING_TRACKS: dict(
        duration_s=80.0,
        dt_s=1.0,
        wingman_distance=8000.0,
        wingman_speed=200.0,
        human_distance=5000.0,
        human_speed=150.0,
        altitude=3000.0,
        vertical_offset=0.0,
    ),
    ScenarioKind.RANDOM: dict(duration_s=100.0, dt_s=1.0, seed=0),
}

VECTOR_PARAMS = {
    "wingman_start",
    "wingman_velocity",
    "human_start",
    "human_velocity",
    "start",
    "velocity",
    "offset",
    "center",
}


@dataclass(frozen=True)
class ScenarioSpec:
    kind: ScenarioKind
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        kind = ScenarioKind.parse(self.kind)
        object.__setattr__(self, "kind", kind)
        allowed = set(DEFAULTS[kind]) | {"t0_s"}
        unknown = sorted(set(self.params) - allowed)
        if unknown:
            raise InvalidSpec(f"unknown parameter(s) for {kind.value}: {', '.join(unknown)}")
        merged = {"t0_s": 0.0, **DEFAULTS[kind], **self.params}
        for name, value in merged.items():
            merged[name] = _coerce(name, value)
        if not merged["duration_s"] > 0:
            raise InvalidSpec("duration_s must be > 0")
        if not merged["dt_s"] > 0:
            raise InvalidSpec("dt_s must be > 0")
        if merged["duration_s"] / merged["dt_s"] < 4:
            raise InvalidSpec("duration_s / dt_s must be >= 4")
        if merged["t0_s"] < 0:
            raise InvalidSpec("t0_s must be >= 0")
        if kind is ScenarioKind.CIRCULAR_CAP and not merged["radius"] > 0:
            raise InvalidSpec("radius must be > 0")
        object.__setattr__(self, "params", merged)

    @classmethod
    def of(cls, kind: ScenarioKind | str, **params) -> "ScenarioSpec":
        return cls(ScenarioKind.parse(kind), params)

    def __getitem__(self, name: str):
        return self.params[name]

    @property
    def frame_count(self) -> int:
        return int(math.floor(self["duration_s"] / self["dt_s"] + 1e-9)) + 1

    @property
    def times(self) -> np.ndarray:
        return self["t0_s"] + np.arange(self.frame_count) * self["dt_s"]

    @property
    def elapsed(self) -> np.ndarray:
        return np.arange(self.frame_count) * self["dt_s"]


def _coerce(name: str, value):
    if name == "seed":
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            raise InvalidSpec(f"seed must be an integer, got {value!r}")
        return int(value)
    if name in VECTOR_PARAMS:
        try:
            vec = tuple(float(c) for c in value)
        except (TypeError, ValueError):
            raise InvalidSpec(f"{name} must be a 3-vector, got {value!r}") from None
        if len(vec) != 3 or not all(math.isfinite(c) for c in vec):
            raise InvalidSpec(f"{name} must be a finite 3-vector, got {value!r}")
        return vec
    if isinstance(value, bool):
        raise InvalidSpec(f"{name} must be a number, got {value!r}")
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise InvalidSpec(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(out):
        raise InvalidSpec(f"{name} must be finite, got {value!r}")
    return out


# -- straight-line kinematics -------------------------------------------------


def _linear_states(spec: ScenarioSpec) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Initial positions and constant velocities ``(pw0, vw, ph0, vh)``."""
    kind = spec.kind
    if kind is ScenarioKind.CONSTANT_VELOCITY:
        return (
            np.array(spec["wingman_start"]),
            np.array(spec["wingman_velocity"]),
            np.array(spec["human_start"]),
            np.array(spec["human_velocity"]),
        )
    if kind is ScenarioKind.FORMATION_HOLD:
        start = np.array(spec["start"])
        vel = np.array(spec["velocity"])
        return start, vel, start + np.array(spec["offset"]), vel
    if kind is ScenarioKind.HEAD_ON:
        speed, alt, lat = spec["speed"], spec["altitude"], spec["lateral_offset"]
        return (
            np.array([0.0, 0.0, alt]),
            np.array([speed, 0.0, 0.0]),
            np.array([spec["separation"], lat, alt]),
            np.array([-speed, 0.0, 0.0]),
        )
    if kind is ScenarioKind.CROSSING_TRACKS:
        alt = spec["altitude"]
        return (
            np.array([-spec["wingman_distance"], 0.0, alt]),
            np.array([spec["wingman_speed"], 0.0, 0.0]),
            np.array([0.0, -spec["human_distance"], alt + spec["vertical_offset"]]),
            np.array([0.0, spec["human_speed"], 0.0]),
        )
    raise ValueError(f"{kind.value} is not a straight-line scenario")


LINEAR_KINDS = (
    ScenarioKind.CONSTANT_VELOCITY,
    ScenarioKind.FORMATION_HOLD,
    ScenarioKind.HEAD_ON,
    ScenarioKind.CROSSING_TRACKS,
)


def _orbit(spec: ScenarioSpec, lag: float, dz: float) -> np.ndarray:
    R, w = spec["radius"], spec["omega"]
    cx, cy, cz = spec["center"]
    theta = w * spec.elapsed - lag
    return np.column_stack([cx + R * np.cos(theta), cy + R * np.sin(theta), np.full_like(theta, cz + dz)])


def _random_paths(spec: ScenarioSpec) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(spec["seed"])
    t = spec.elapsed

    def path(start):
        heading = rng.uniform(0, 2 * math.pi)
        speed = rng.uniform(50.0, 250.0)
        vel = np.array([speed * math.cos(heading), speed * math.sin(heading), rng.uniform(-10.0, 10.0)])
        p = start + np.outer(t, vel)
        for _ in range(3):
            amp = rng.uniform(20.0, 800.0, size=3) * np.array([1.0, 1.0, 0.2])
            omega = rng.uniform(0.005, 0.2)
            phase = rng.uniform(0, 2 * math.pi, size=3)
            p = p + amp * np.sin(omega * t[:, None] + phase)
        return p

    wingman = path(np.array([0.0, 0.0, 3000.0]))
    bearing = rng.uniform(0, 2 * math.pi)
    rng_dist = rng.uniform(300.0, 6000.0)
    human_start = np.array([rng_dist * math.cos(bearing), rng_dist * math.sin(bearing), 3000.0 + rng.uniform(-300, 300)])
    return wingman, path(human_start)


def generate(spec: ScenarioSpec) -> Encounter:
    """Build the encounter described by ``spec``; deterministic per spec."""
    kind = spec.kind
    if kind in LINEAR_KINDS:
        pw0, vw, ph0, vh = _linear_states(spec)
        t = spec.elapsed[:, None]
        pw = pw0 + t * vw
        ph = ph0 + t * vh
    elif kind is ScenarioKind.CIRCULAR_CAP:
        pw = _orbit(spec, 0.0, 0.0)
        ph = _orbit(spec, spec["phase_lag"], spec["vertical_offset"])
    else:
        pw, ph = _random_paths(spec)
    t0, dt = spec["t0_s"], spec["dt_s"]
    return validate_encounter(
        Trajectory(WINGMAN_ID, t0, dt, pw),
        Trajectory(HUMAN_ID, t0, dt, ph),
    )


# -- expectation records ------------------------------------------------------


@dataclass(frozen=True)
class ExpectedValue:
    value: float
    tol: float  # absolute
    field: str  # MetricReport attribute this entry is checked against

    def holds(self, actual: float) -> bool:
        return abs(float(actual) - self.value) <= self.tol


@dataclass(frozen=True)
class Expectation:
    kind: ScenarioKind
    values: Mapping[str, ExpectedValue]

    def __getitem__(self, name: str) -> ExpectedValue:
        return self.values[name]

    def check(self, report: MetricReport) -> dict[str, bool]:
        return {name: ev.holds(getattr(report, ev.field)) for name, ev in self.values.items()}

    def failures(self, report: MetricReport) -> dict[str, tuple[float, float, float]]:
        """``{name: (expected, actual, tol)}`` for every entry that does not hold."""
        out = {}
        for name, ev in self.values.items():
            actual = getattr(report, ev.field)
            if not ev.holds(actual):
                out[name] = (ev.value, float(actual), ev.tol)
        return out

    def to_dict(self) -> dict:
        return {
            "scenario": self.kind.value,
            "expected": {name: {"value": ev.value, "tol": ev.tol, "field": ev.field} for name, ev in self.values.items()},
        }


def _rel(value: float, rel: float, floor: float = 1e-9) -> float:
    return max(abs(value) * rel, floor)


def _count_risk_frames(r0, v, elapsed, cfg: MetricConfig) -> int:
    """Frame-by-frame scan over exact straight-line relative geometry."""
    count = 0
    for s in elapsed[1:]:
        r = r0 + v * s
        d = math.sqrt(float(r @ r))
        if d < cfg.epsilon_m or d < cfg.degenerate_distance_m:
            count += 1
            continue
        v_close = -float(r @ v) / d
        if v_close > 0 and d / v_close < cfg.t_critical_s:
            count += 1
    return count


def cpa_distance(r0: np.ndarray, v_rel: np.ndarray, horizon: float) -> tuple[float, float]:
    """Continuous closest approach over ``[0, horizon]`` for straight-line motion.

    Returns ``(distance, time)``; the unconstrained CPA distance is the norm
    of ``r0`` with its component along the relative velocity removed.
    """
    speed2 = float(v_rel @ v_rel)
    if speed2 == 0.0:
        return float(np.linalg.norm(r0)), 0.0
    u = v_rel / math.sqrt(speed2)
    t_star = -float(r0 @ v_rel) / speed2
    if 0.0 <= t_star <= horizon:
        return float(np.linalg.norm(r0 - (r0 @ u) * u)), t_star
    t_edge = 0.0 if t_star < 0 else horizon
    return float(np.linalg.norm(r0 + v_rel * t_edge)), t_edge


def _grid_min(r0, v, dt, n) -> tuple[float, int]:
    """Smallest sampled separation, from the grid points bracketing the CPA."""
    speed2 = float(v @ v)
    if speed2 == 0.0:
        return float(np.linalg.norm(r0)), 0
    k_star = -float(r0 @ v) / speed2 / dt
    candidates = {0, n - 1}
    for k in (math.floor(k_star), math.ceil(k_star)):
        candidates.add(min(max(k, 0), n - 1))
    best = min(sorted(candidates), key=lambda k: (float(np.linalg.norm(r0 + v * (k * dt))), k))
    return float(np.linalg.norm(r0 + v * (best * dt))), best


def _linear_expectation(spec: ScenarioSpec, cfg: MetricConfig) -> dict[str, ExpectedValue]:
    pw0, vw, ph0, vh = _linear_states(spec)
    r0, v = ph0 - pw0, vh - vw
    n, dt, t0 = spec.frame_count, spec["dt_s"], spec["t0_s"]
    m1 = float(vw @ vw)
    m4, k_min = _grid_min(r0, v, dt, n)
    m5 = _count_risk_frames(r0, v, spec.elapsed, cfg)
    steady = float(v @ v) == 0.0
    values = {
        "m1": ExpectedValue(m1, _rel(m1, 1e-9), "m1"),
        "m2": ExpectedValue(0.0, 1e-9, "m2"),
        "m3": ExpectedValue(0.0, 1e-9, "m3"),
        "m4_m": ExpectedValue(m4, _rel(m4, 1e-9), "m4_m"),
        # constant separation: every frame attains the minimum
        "m4_time_s": ExpectedValue(t0 + k_min * dt, spec["duration_s"] if steady else 1e-9, "m4_time_s"),
        "m5_count": ExpectedValue(float(m5), 0.0, "m5_count"),
        "m5_rate": ExpectedValue(m5 / (n - 1), 1e-12, "m5_rate"),
        "frame_count": ExpectedValue(float(n), 0.0, "frame_count"),
    }
    if spec.kind is ScenarioKind.CROSSING_TRACKS:
        cpa, _ = cpa_distance(r0, v, (n - 1) * dt)
        # sampled minimum lies within one step's relative travel of the true CPA
        values["cpa_m"] = ExpectedValue(cpa, math.sqrt(float(v @ v)) * dt, "m4_m")
    return values


def _orbit_expectation(spec: ScenarioSpec, cfg: MetricConfig) -> dict[str, ExpectedValue]:
    R, w, dt = spec["radius"], spec["omega"], spec["dt_s"]
    if dt * abs(w) > 0.01:
        raise NoClosedForm(f"circular-cap expectations need dt*omega <= 0.01, got {dt * abs(w):g}")
    n = spec.frame_count
    m1, m2, m3 = R**2 * w**2, R**2 * w**4, R**2 * w**6
    chord = math.hypot(2.0 * R * math.sin(spec["phase_lag"] / 2.0), spec["vertical_offset"])
    m5 = n - 1 if chord < cfg.epsilon_m else 0
    return {
        "m1": ExpectedValue(m1, 0.01 * m1, "m1"),
        "m2": ExpectedValue(m2, 0.01 * m2, "m2"),
        "m3": ExpectedValue(m3, 0.01 * m3, "m3"),
        "m4_m": ExpectedValue(chord, _rel(chord, 1e-6), "m4_m"),
        "m4_time_s": ExpectedValue(spec["t0_s"], spec["duration_s"], "m4_time_s"),
        "m5_count": ExpectedValue(float(m5), 0.0, "m5_count"),
        "m5_rate": ExpectedValue(m5 / (n - 1), 1e-12, "m5_rate"),
        "frame_count": ExpectedValue(float(n), 0.0, "frame_count"),
    }


def expectation(spec: ScenarioSpec, cfg: MetricConfig | None = None) -> Expectation:
    """Closed-form report values and absolute tolerances for ``spec``.

    Straight-line kinds are exact up to rounding (M5 and the sampled minimum
    come from a scan over exact relative geometry). The orbit's naturalness
    values carry a 1% tolerance, valid for ``dt * omega <= 0.01``.
    """
    cfg = cfg or MetricConfig()
    if spec.kind is ScenarioKind.RANDOM:
        raise NoClosedForm("random scenarios have no closed-form expectation")
    if spec.kind is ScenarioKind.CIRCULAR_CAP:
        values = _orbit_expectation(spec, cfg)
    else:
        values = _linear_expectation(spec, cfg)
    return Expectation(spec.kind, values)
