"""Command-line front end.

    wingman-metrics compute  --input LOG --wingman ID --human ID [--config CFG]
    wingman-metrics simulate --scenario NAME [--params JSON] --out LOG
    wingman-metrics stream   [--config CFG] < samples.jsonl

Exit codes: 0 success (threshold failures are reported, not fatal), 1 a
threshold failed under ``--strict``, 2 bad input or configuration.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Any, Mapping, Sequence

from . import __version__
from .errors import ConfigError, InvalidSpec, NoClosedForm, WingmanMetricsError
from .ingest import IngestOptions, format_log, load_encounter
from .metrics import evaluate
from .model import MetricConfig, MetricReport, NaturalnessThresholds, Scheme, nm_to_m
from .scenarios import ScenarioSpec, expectation, generate
from .streaming import StreamState

EXIT_OK = 0
EXIT_THRESHOLD = 1
EXIT_INPUT = 2

CONFIG_KEYS = {
    "epsilon_m",
    "epsilon_nm",
    "t_critical_s",
    "derivative_scheme",
    "degenerate_distance_m",
    "ingest",
    "thresholds",
    "profile",
}
INGEST_KEYS = {"target_dt_s", "max_gap_s", "interpolation"}
THRESHOLD_KEYS = {"max_m1", "max_m2", "max_m3"}
FRAMES_HEADER = ("t", "d", "v_close", "ttr", "alert")


class UsageError(Exception):
    """Bad input that maps to exit code 2."""


def _reject_unknown(obj: Mapping, allowed: set[str], where: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")


def config_from_dict(doc: Mapping[str, Any], profile: str | None = None) -> tuple[MetricConfig, IngestOptions]:
    """Build metric and ingest settings from a parsed config document.

    Distances are meters and times seconds; ``epsilon_nm`` may replace
    ``epsilon_m`` and is converted at 1852 m per nautical mile.
    """
    if not isinstance(doc, Mapping):
        raise ConfigError("config must be a JSON object")
    _reject_unknown(doc, CONFIG_KEYS, "config")
    kwargs: dict[str, Any] = {}
    if "epsilon_m" in doc and "epsilon_nm" in doc:
        raise ConfigError("give either epsilon_m or epsilon_nm, not both")
    try:
        if "epsilon_nm" in doc:
            kwargs["epsilon_m"] = nm_to_m(doc["epsilon_nm"])
        for key in ("epsilon_m", "t_critical_s", "degenerate_distance_m"):
            if key in doc:
                kwargs[key] = float(doc[key])
        if "derivative_scheme" in doc:
            kwargs["derivative_scheme"] = Scheme.parse(doc["derivative_scheme"])

        table = doc.get("thresholds") or {}
        if not isinstance(table, Mapping):
            raise ConfigError("thresholds must map profile names to bounds")
        chosen = profile or doc.get("profile")
        if chosen is None and len(table) == 1:
            chosen = next(iter(table))
        if chosen is not None:
            if chosen not in table:
                raise ConfigError(f"threshold profile {chosen!r} not found in config")
            bounds = table[chosen]
            if not isinstance(bounds, Mapping):
                raise ConfigError(f"threshold profile {chosen!r} must be an object")
            _reject_unknown(bounds, THRESHOLD_KEYS, f"thresholds.{chosen}")
            missing = sorted(THRESHOLD_KEYS - set(bounds))
            if missing:
                raise ConfigError(f"threshold profile {chosen!r} is missing {', '.join(missing)}")
            kwargs["thresholds"] = NaturalnessThresholds(
                max_m1=float(bounds["max_m1"]),
                max_m2=float(bounds["max_m2"]),
                max_m3=float(bounds["max_m3"]),
                profile_name=str(chosen),
            )

        ingest = doc.get("ingest") or {}
        if not isinstance(ingest, Mapping):
            raise ConfigError("ingest must be an object")
        _reject_unknown(ingest, INGEST_KEYS, "ingest")
        target = ingest.get("target_dt_s", "infer")
        opts = IngestOptions(
            target_dt_s=target if target == "infer" else float(target),
            interpolation=ingest.get("interpolation", "linear"),
            max_gap_s=None if ingest.get("max_gap_s") is None else float(ingest["max_gap_s"]),
        )
        return MetricConfig(**kwargs), opts
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def load_config(path: str | Path | None, profile: str | None = None) -> tuple[MetricConfig, IngestOptions]:
    if path is None:
        return config_from_dict({}, profile)
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc.msg} (line {exc.lineno})") from None
    return config_from_dict(doc, profile)


def report_json(report: MetricReport) -> str:
    return json.dumps(report.to_dict(), indent=2, allow_nan=False)


def write_frames(report: MetricReport, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(FRAMES_HEADER)
        for f in report.diagnostics:
            writer.writerow(
                (
                    repr(f.t),
                    repr(f.d),
                    repr(f.v_close),
                    "" if f.ttr_s is None else repr(f.ttr_s),
                    "" if f.alert is None else f.alert.value,
                )
            )


def _guess_format(path: str, explicit: str | None) -> str:
    if explicit:
        return explicit
    return "jsonl" if Path(path).suffix.lower() in (".jsonl", ".ndjson") else "csv"


def cmd_compute(args: argparse.Namespace) -> int:
    cfg, opts = load_config(args.config, args.profile)
    try:
        data = Path(args.input).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    enc = load_encounter(data, _guess_format(args.input, args.format), args.wingman, args.human, opts)
    report = evaluate(enc, cfg)

    text = report_json(report)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    if args.frames:
        write_frames(report, args.frames)

    if args.strict and report.threshold_verdicts and "fail" in report.threshold_verdicts.values():
        return EXIT_THRESHOLD
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg, _ = load_config(args.config)
    try:
        params = json.loads(args.params) if args.params else {}
    except json.JSONDecodeError as exc:
        raise UsageError(f"--params is not valid JSON: {exc.msg}") from None
    if not isinstance(params, dict):
        raise UsageError("--params must be a JSON object")
    spec = ScenarioSpec.of(args.scenario, **params)
    enc = generate(spec)
    Path(args.out).write_text(format_log([enc.wingman, enc.human], args.format), encoding="utf-8")
    try:
        record = expectation(spec, cfg)
    except NoClosedForm:
        return EXIT_OK
    print(json.dumps(record.to_dict(), indent=2))
    return EXIT_OK


def _stream_line(raw: str, lineno: int) -> tuple[float, list[float], list[float]]:
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise UsageError(f"line {lineno}: invalid JSON ({exc.msg})") from None
    if not isinstance(obj, dict) or not {"t", "pos_w", "pos_h"} <= set(obj):
        raise UsageError(f"line {lineno}: expected an object with t, pos_w, pos_h")
    try:
        t = float(obj["t"])
        pos_w = [float(c) for c in obj["pos_w"]]
        pos_h = [float(c) for c in obj["pos_h"]]
    except (TypeError, ValueError):
        raise UsageError(f"line {lineno}: t must be a number and positions 3-number arrays") from None
    if len(pos_w) != 3 or len(pos_h) != 3:
        raise UsageError(f"line {lineno}: positions must have 3 components")
    return t, pos_w, pos_h


def cmd_stream(args: argparse.Namespace) -> int:
    cfg, _ = load_config(args.config, args.profile)
    state = StreamState(cfg)
    out = sys.stdout
    for lineno, raw in enumerate(sys.stdin, start=1):
        if not raw.strip():
            continue
        t, pos_w, pos_h = _stream_line(raw, lineno)
        try:
            events = state.push(t, pos_w, pos_h)
        except WingmanMetricsError as exc:
            raise UsageError(f"line {lineno}: {exc}") from None
        for event in events:
            out.write(json.dumps(event.to_dict()) + "\n")
        if events:
            out.flush()
    try:
        report = state.finalize()
    except WingmanMetricsError:
        raise UsageError(f"too short: {state.frame_count} frame(s), need at least 4") from None
    out.write(json.dumps(report.to_dict(), allow_nan=False) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wingman-metrics",
        description="Naturalness and comfort metrics for wingman/human flight encounters.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="evaluate a trajectory log and print the report JSON")
    p.add_argument("--input", required=True, help="trajectory log (CSV or JSON lines)")
    p.add_argument("--format", choices=("csv", "jsonl"), help="log format (default: from extension)")
    p.add_argument("--wingman", required=True, help="agent id of the autonomous wingman")
    p.add_argument("--human", required=True, help="agent id of the human-piloted aircraft")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--profile", help="threshold profile name from the config")
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--frames", help="write per-frame diagnostics CSV here")
    p.add_argument("--strict", action="store_true", help="exit 1 when a threshold verdict fails")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("simulate", help="write a synthetic encounter log and its expected metrics")
    p.add_argument("--scenario", required=True, help="constant-velocity, formation-hold, circular-cap, head-on, crossing-tracks or random")
    p.add_argument("--params", help="JSON object overriding scenario parameters")
    p.add_argument("--out", required=True, help="output log path")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--config", help="JSON config used for the expectation record")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("stream", help="evaluate JSON-lines samples from stdin online")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--profile", help="threshold profile name from the config")
    p.set_defaults(func=cmd_stream)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, WingmanMetricsError, InvalidSpec) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
