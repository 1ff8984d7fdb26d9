"""Command-line entry points: run, export-front, describe-level.

Exit codes: 0 success, 2 config error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, experiment
from .domain import ParseError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sokoevo",
        description="Evolve playable Sokoban levels with a two-archive MOEA.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a seeded experiment from a config file")
    run.add_argument("config", type=Path, help="YAML experiment config")
    run.add_argument("--seed", type=int, default=None, help="override: run this single seed")
    run.add_argument("--out", type=Path, default=None, help="output directory")

    export = sub.add_parser("export-front", help="export a final front as CSV")
    export.add_argument("seed_dir", type=Path, help="seed directory of a completed run")
    export.add_argument("--which", choices=["ca", "da", "union"], default="da")
    export.add_argument("--out", type=Path, default=None, help="write CSV here (default stdout)")

    describe = sub.add_parser("describe-level", help="report objectives and solvability")
    describe.add_argument(
        "level", nargs="?", default="-", help="level text file, or '-' for stdin"
    )
    return parser


def _cmd_run(args) -> int:
    try:
        config = experiment.ExperimentConfig.from_yaml(args.config.read_text())
        if args.seed is not None:
            config = experiment.ExperimentConfig(
                engine=config.engine,
                spec=config.spec,
                limits=config.limits,
                seeds=(args.seed,),
                out_dir=config.out_dir,
            )
    except OSError as err:
        print(f"error: cannot read config: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except experiment.ConfigError as err:
        print(f"error: invalid config: {err}", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = args.out or (Path(config.out_dir) if config.out_dir else None)
    if out_dir is None:
        print("error: no output directory (set out_dir in the config or pass --out)",
              file=sys.stderr)
        return EXIT_CONFIG
    try:
        manifest = experiment.run_experiment(config, out_dir)
    except OSError as err:
        print(f"error: cannot write artifacts: {err}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as err:  # noqa: BLE001 - surfaced with exit code 3
        print(f"error: run failed: {err}", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"wrote {len(manifest['seed_dirs'])} seed run(s) under {out_dir}")
    return EXIT_OK


def _cmd_export_front(args) -> int:
    try:
        table = experiment.export_front(args.seed_dir, args.which)
    except experiment.MissingArtifacts as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_RUNTIME
    if args.out is not None:
        args.out.write_text(table)
    else:
        sys.stdout.write(table)
    return EXIT_OK


def _cmd_describe_level(args) -> int:
    try:
        if args.level == "-":
            text = sys.stdin.read()
        else:
            text = Path(args.level).read_text()
    except OSError as err:
        print(f"error: cannot read level: {err}", file=sys.stderr)
        return EXIT_RUNTIME
    try:
        report = experiment.describe_level(text.rstrip("\n"))
    except (ParseError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_RUNTIME
    json.dump(report, sys.stdout, indent=2)
    print()
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "export-front": _cmd_export_front,
        "describe-level": _cmd_describe_level,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
