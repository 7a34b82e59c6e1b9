"""Trajectory log parsing and resampling onto a common uniform grid.

Two text formats are accepted, both UTF-8:

* CSV with header ``t,agent_id,x,y,z`` (any column order)
* JSON lines, one ``{"t", "agent_id", "x", "y", "z"}`` object per line

Times are seconds and positions meters in a local Cartesian frame.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import OrderedDict
from dataclasses import dataclass
from typing import IO, Iterable, Literal, Sequence

import numpy as np

from .errors import DuplicateTimestamp, EmptyOverlap, GapTooLarge, NonMonotonicTime, ParseError, TooShort, UnknownAgent
from .model import Encounter, Trajectory, validate_encounter

FIELDS = ("t", "agent_id", "x", "y", "z")
# grid points this close (relative to dt) to an input timestamp take that sample verbatim
SNAP_TOLERANCE = 1e-6


@dataclass(frozen=True)
class RawLogRecord:
    t: float
    agent_id: str
    x: float
    y: float
    z: float

    @property
    def pos(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class IngestOptions:
    target_dt_s: float | Literal["infer"] = "infer"
    interpolation: Literal["linear"] = "linear"
    max_gap_s: float | None = None  # default: 5 * dt

    def __post_init__(self):
        if self.target_dt_s != "infer":
            dt = float(self.target_dt_s)
            if not (math.isfinite(dt) and dt > 0):
                raise ValueError(f"target_dt_s must be > 0 or 'infer', got {self.target_dt_s!r}")
        if self.interpolation != "linear":
            raise ValueError(f"unsupported interpolation {self.interpolation!r}; only 'linear'")
        if self.max_gap_s is not None and not self.max_gap_s > 0:
            raise ValueError(f"max_gap_s must be > 0, got {self.max_gap_s!r}")


def _as_text(data: bytes | str | IO) -> str:
    if hasattr(data, "read"):
        data = data.read()
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise ParseError(0, f"input is not valid UTF-8 ({exc.reason})") from None
    return data


def _number(value, name: str, line: int) -> float:
    if isinstance(value, bool) or value is None:
        raise ParseError(line, f"field {name!r} is not a number: {value!r}")
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ParseError(line, f"field {name!r} is not a number: {value!r}") from None
    if not math.isfinite(out):
        raise ParseError(line, f"field {name!r} is not finite: {value!r}")
    return out


def _record(row: dict, line: int) -> RawLogRecord:
    missing = [f for f in FIELDS if f not in row or row[f] in (None, "")]
    if missing:
        raise ParseError(line, f"missing field(s) {', '.join(missing)}")
    agent = row["agent_id"]
    if not isinstance(agent, str):
        agent = str(agent)
    agent = agent.strip()
    if not agent:
        raise ParseError(line, "empty agent_id")
    return RawLogRecord(
        t=_number(row["t"], "t", line),
        agent_id=agent,
        x=_number(row["x"], "x", line),
        y=_number(row["y"], "y", line),
        z=_number(row["z"], "z", line),
    )


def _iter_csv(text: str) -> Iterable[tuple[int, dict]]:
    reader = csv.reader(io.StringIO(text))
    header = None
    for row in reader:
        line = reader.line_num
        if not row or all(not c.strip() for c in row):
            continue
        if header is None:
            header = [c.strip() for c in row]
            if sorted(header) != sorted(FIELDS):
                raise ParseError(line, f"header must be {','.join(FIELDS)}, got {','.join(header)}")
            continue
        if len(row) != len(header):
            raise ParseError(line, f"expected {len(header)} columns, got {len(row)}")
        yield line, dict(zip(header, (c.strip() for c in row)))
    if header is None:
        raise ParseError(1, "missing CSV header")


def _iter_jsonl(text: str) -> Iterable[tuple[int, dict]]:
    for line, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(line, f"invalid JSON ({exc.msg})") from None
        if not isinstance(obj, dict):
            raise ParseError(line, "expected a JSON object")
        yield line, obj


def parse_log(data: bytes | str | IO, format: str = "csv") -> list[RawLogRecord]:
    """Parse a trajectory log into records, in input order.

    Raises ParseError on malformed rows, DuplicateTimestamp when an agent
    repeats a time, and NonMonotonicTime when an agent's time goes backwards.
    """
    fmt = format.lower()
    text = _as_text(data)
    if fmt == "csv":
        rows = _iter_csv(text)
    elif fmt in ("jsonl", "jsonlines", "json-lines"):
        rows = _iter_jsonl(text)
    else:
        raise ValueError(f"unknown log format {format!r} (expected csv or jsonl)")

    records = []
    last_t: dict[str, float] = {}
    for line, row in rows:
        rec = _record(row, line)
        prev = last_t.get(rec.agent_id)
        if prev is not None:
            if rec.t == prev:
                raise DuplicateTimestamp(rec.agent_id, rec.t)
            if rec.t < prev:
                raise NonMonotonicTime(rec.agent_id, rec.t)
        last_t[rec.agent_id] = rec.t
        records.append(rec)
    return records


def group_by_agent(records: Iterable[RawLogRecord]) -> "OrderedDict[str, tuple[np.ndarray, np.ndarray]]":
    """Split records into per-agent ``(times, positions)`` arrays."""
    grouped: OrderedDict[str, list[RawLogRecord]] = OrderedDict()
    for rec in records:
        grouped.setdefault(rec.agent_id, []).append(rec)
    out = OrderedDict()
    for agent, recs in grouped.items():
        t = np.array([r.t for r in recs], dtype=np.float64)
        p = np.array([r.pos for r in recs], dtype=np.float64)
        out[agent] = (t, p)
    return out


def infer_dt(per_agent: Sequence[np.ndarray]) -> float:
    """Median sample spacing, pooled over agents.

    When every spacing agrees with the median to 1e-6 relative the log is
    treated as uniform and the average spacing is returned instead, which
    recovers ``dt`` to rounding for logs written as ``t0 + k * dt``.
    """
    diffs = [np.diff(t) for t in per_agent if len(t) >= 2]
    if not diffs:
        raise TooShort("cannot infer dt: every agent has fewer than two samples", needed=2)
    pooled = np.concatenate(diffs)
    median = float(np.median(pooled))
    if np.all(np.abs(pooled - median) <= 1e-6 * median):
        spans = [(t[-1] - t[0]) / (len(t) - 1) for t in per_agent if len(t) >= 2]
        return float(np.median(spans))
    return median


def _interpolate(t: np.ndarray, p: np.ndarray, grid: np.ndarray, dt: float) -> np.ndarray:
    out = np.column_stack([np.interp(grid, t, p[:, i]) for i in range(3)])
    idx = np.clip(np.searchsorted(t, grid), 0, len(t) - 1)
    for cand in (idx, np.clip(idx - 1, 0, len(t) - 1)):
        hit = np.abs(t[cand] - grid) <= SNAP_TOLERANCE * dt
        out[hit] = p[cand[hit]]
    return out


def resample(
    records: Sequence[RawLogRecord],
    opts: IngestOptions | None = None,
    agents: Sequence[str] | None = None,
) -> list[Trajectory]:
    """Linearly resample each agent onto one grid spanning the shared window.

    The grid starts at the latest agent start and stops at or before the
    earliest agent end; nothing is extrapolated. ``agents`` restricts (and
    orders) the output; by default every agent is returned in order of first
    appearance.
    """
    opts = opts or IngestOptions()
    grouped = group_by_agent(records)
    if agents is not None:
        missing = [a for a in agents if a not in grouped]
        if missing:
            raise UnknownAgent(missing)
        grouped = OrderedDict((a, grouped[a]) for a in agents)
    if not grouped:
        raise EmptyOverlap("log contains no records")

    for agent, (t, _) in grouped.items():
        if np.any(np.diff(t) <= 0):
            bad = float(t[1:][np.diff(t) <= 0][0])
            raise NonMonotonicTime(agent, bad)

    if opts.target_dt_s == "infer":
        dt = infer_dt([t for t, _ in grouped.values()])
    else:
        dt = float(opts.target_dt_s)
    max_gap = opts.max_gap_s if opts.max_gap_s is not None else 5.0 * dt

    for agent, (t, _) in grouped.items():
        gaps = np.diff(t)
        if np.any(gaps > max_gap):
            i = int(np.argmax(gaps > max_gap))
            raise GapTooLarge(agent, float(t[i]), float(gaps[i]))

    start = max(float(t[0]) for t, _ in grouped.values())
    end = min(float(t[-1]) for t, _ in grouped.values())
    if not end > start:
        raise EmptyOverlap(f"agents share no time window (latest start {start}, earliest end {end})")

    n = int(math.floor((end - start) / dt + SNAP_TOLERANCE)) + 1
    grid = start + np.arange(n) * dt
    return [
        Trajectory(agent_id=agent, t0=start, dt=dt, samples=_interpolate(t, p, grid, dt))
        for agent, (t, p) in grouped.items()
    ]


def load_encounter(
    data: bytes | str | IO,
    format: str,
    wingman_id: str,
    human_id: str,
    opts: IngestOptions | None = None,
) -> Encounter:
    """Parse, resample and pair one wingman/human log in a single call."""
    records = parse_log(data, format)
    wingman, human = resample(records, opts, agents=[wingman_id, human_id])
    return validate_encounter(wingman, human)


def format_log(trajectories: Sequence[Trajectory], format: str = "csv") -> str:
    """Serialize trajectories in the ingest schema, frame-major.

    Floats are written with ``repr`` so parsing the output reproduces the
    samples bit-for-bit.
    """
    fmt = format.lower()
    rows = []
    if trajectories:
        times = trajectories[0].times
        for k, t in enumerate(times):
            for traj in trajectories:
                x, y, z = (float(c) for c in traj.samples[k])
                rows.append((float(t), traj.agent_id, x, y, z))
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(FIELDS)
        for t, agent, x, y, z in rows:
            writer.writerow((repr(t), agent, repr(x), repr(y), repr(z)))
        return buf.getvalue()
    if fmt in ("jsonl", "jsonlines", "json-lines"):
        return "".join(json.dumps(dict(zip(FIELDS, row))) + "\n" for row in rows)
    raise ValueError(f"unknown log format {format!r} (expected csv or jsonl)")
