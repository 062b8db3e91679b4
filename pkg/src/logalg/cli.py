"""Command line front end: ``logalg run`` and ``logalg check``."""
from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

from .session import (
    SessionParseError,
    bundled_sessions,
    load_bundled,
    parse_session,
    report_json,
    report_text,
    run_session,
)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_TASK = 2


def _read(path: str) -> str:
    """A file path, or the name of a bundled session such as ``nilpotent_cone``."""
    if os.path.exists(path):
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    name = os.path.basename(path)
    if name in bundled_sessions() or name + ".session" in bundled_sessions():
        return load_bundled(name)
    raise FileNotFoundError(path)


def _parse(path: str):
    try:
        text = _read(path)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"{path}: cannot read: {exc}", file=sys.stderr)
        return None
    try:
        return parse_session(text)
    except SessionParseError as exc:
        for e in exc.errors:
            print(f"{path}:{e}", file=sys.stderr)
        return None


class _Parser(argparse.ArgumentParser):
    # usage errors share the exit code of malformed input; 2 is reserved for task failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="logalg", description="Run logarithmic-geometry sessions.")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="parse and execute a session file")
    run.add_argument("session")
    run.add_argument("--out", help="write the JSON report here (default: stdout)")
    run.add_argument("--jobs", type=int, default=1, help="run independent tasks on N threads")
    run.add_argument("--degree-cap", type=int, default=None,
                     help="upper bound on truncation degrees (overrides LOGALG_DEGREE_CAP)")
    run.add_argument("--timings", action="store_true", help="record wall time per task")
    check = sub.add_parser("check", help="parse and validate only")
    check.add_argument("session")
    sub.add_parser("list", help="list bundled sessions")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "degree_cap", None) is not None and args.degree_cap < 0:
        parser.error("--degree-cap must be nonnegative")
    if args.command == "list":
        for name in bundled_sessions():
            print(name)
        return EXIT_OK
    session = _parse(args.session)
    if session is None:
        return EXIT_PARSE
    if args.command == "check":
        print(f"{args.session}: ok ({len(session.tasks)} tasks)")
        return EXIT_OK
    try:
        report = run_session(session, jobs=max(1, args.jobs), degree_cap=args.degree_cap, timings=args.timings)
    except ValueError as exc:
        print(f"logalg: {exc}", file=sys.stderr)
        return EXIT_PARSE
    payload = report_json(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)
        sys.stdout.write(report_text(report))
    else:
        sys.stdout.write(payload)
    return EXIT_OK if report["summary"]["failed"] == 0 else EXIT_TASK


if __name__ == "__main__":
    sys.exit(main())
