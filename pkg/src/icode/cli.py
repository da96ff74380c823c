"""Command-line surface: analyze, timeline, simulate, serve."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .analyzers import run_all
from .config import resolve_config
from .model import OutOfOrderError
from .parser import MalformedLineError, ParseMode, parse_stream
from .runtime import Session, directive_record
from .server import serve
from .simulate import PROFILES, simulate
from .timeline import build_timeline, render_svg, render_text

EXIT_CLEAN = 0
EXIT_KO = 1
EXIT_PARSE_ERROR = 2


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8", newline="") as f:
        return f.read().splitlines()


def cmd_analyze(path: str, config_path: Optional[str], out=None) -> int:
    out = out if out is not None else sys.stdout
    config = resolve_config(config_path)
    try:
        lines = _read_lines(path)
        trace, _ = parse_stream(lines, ParseMode.STRICT)
    except OSError as exc:
        print(f"error: {exc}", file=out)
        return EXIT_PARSE_ERROR
    except (MalformedLineError, OutOfOrderError) as exc:
        print(f"parse error: {exc}", file=out)
        return EXIT_PARSE_ERROR

    report = run_all(trace, config.analyzer)

    # Replay per-prefix snapshots so situations fire as they would live.
    session = Session(config, end_on_exit=False)
    situations = []
    directives = []
    for e in trace.events:
        directives.extend(session.ingest(e))
    for entry in session.blackbox:
        if entry.kind == "SITUATION":
            situations.append((entry.rel, entry.payload))

    span = trace.rel_times[-1] if len(trace) else 0
    print(f"{path}: {len(trace)} events over {span} ms", file=out)
    for d in report.detections:
        metrics = " ".join(f"{k}={v:g}" for k, v in d.metrics.items())
        print(
            f"  {d.verdict.value:>7} {d.detector} span={d.span[0]}:{d.span[1]} {metrics}".rstrip(),
            file=out,
        )
    print(f"ko_count: {report.ko_count}", file=out)
    if situations:
        print("situations (per-prefix replay):", file=out)
        for rel, payload in situations:
            print(f"  at {rel} ms: {payload}", file=out)
    if directives:
        print("directives (per-prefix replay):", file=out)
        for d in directives:
            print(f"  {directive_record(d)}", file=out)

    machine = {
        "trace_len": report.trace_len,
        "ko_count": report.ko_count,
        "detections": [
            {
                "detector": d.detector,
                "verdict": d.verdict.value,
                "span": list(d.span),
                "metrics": d.metrics,
            }
            for d in report.detections
        ],
        "situations": [{"at_ms": rel, "record": payload} for rel, payload in situations],
        "directives": [directive_record(d) for d in directives],
    }
    print("--- report.json ---", file=out)
    print(json.dumps(machine, indent=2), file=out)
    return EXIT_KO if report.ko_count > 0 else EXIT_CLEAN


def cmd_timeline(
    path: str,
    fmt: str,
    out_path: Optional[str],
    config_path: Optional[str],
    width: int = 72,
    ms_per_px: int = 10,
    out=None,
) -> int:
    out = out if out is not None else sys.stdout
    config = resolve_config(config_path)
    try:
        trace, _ = parse_stream(_read_lines(path), ParseMode.STRICT)
    except OSError as exc:
        print(f"error: {exc}", file=out)
        return EXIT_PARSE_ERROR
    except (MalformedLineError, OutOfOrderError) as exc:
        print(f"parse error: {exc}", file=out)
        return EXIT_PARSE_ERROR
    doc = build_timeline(trace, run_all(trace, config.analyzer), fmt)
    rendered = render_text(doc, width) if fmt == "text" else render_svg(doc, ms_per_px)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as f:
            f.write(rendered)
    else:
        out.write(rendered)
    return EXIT_CLEAN


def cmd_simulate(profile_name: str, duration_ms: int, seed: int, out=None) -> int:
    out = out if out is not None else sys.stdout
    profile = PROFILES[profile_name]
    for line in simulate(profile, duration_ms, seed):
        print(line, file=out)
    return EXIT_CLEAN


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="icode",
        description="Interaction-telemetry analyzer and adaptive session engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="batch-analyze an iCode log")
    p_analyze.add_argument("file")
    p_analyze.add_argument("--config")

    p_timeline = sub.add_parser("timeline", help="render an interaction summary")
    p_timeline.add_argument("file")
    p_timeline.add_argument("--format", choices=("text", "svg"), default="text")
    p_timeline.add_argument("--out")
    p_timeline.add_argument("--config")
    p_timeline.add_argument("--width", type=int, default=72)
    p_timeline.add_argument("--ms-per-px", type=int, default=10)

    p_sim = sub.add_parser("simulate", help="generate a synthetic iCode stream")
    p_sim.add_argument("--profile", choices=sorted(PROFILES), required=True)
    p_sim.add_argument("--duration-ms", type=int, default=10_000)
    p_sim.add_argument("--seed", type=int, default=0)

    p_serve = sub.add_parser("serve", help="run the live session endpoint")
    p_serve.add_argument("--port", type=int, required=True)
    p_serve.add_argument("--config")
    p_serve.add_argument("--blackbox-dir", default="blackbox-logs")

    args = parser.parse_args(argv)
    if args.command == "analyze":
        return cmd_analyze(args.file, args.config)
    if args.command == "timeline":
        return cmd_timeline(
            args.file, args.format, args.out, args.config, args.width, args.ms_per_px
        )
    if args.command == "simulate":
        return cmd_simulate(args.profile, args.duration_ms, args.seed)
    serve(args.port, resolve_config(args.config), args.blackbox_dir)
    return EXIT_CLEAN


if __name__ == "__main__":
    sys.exit(main())
