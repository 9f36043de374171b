"""Command-line entry point.

Usage: lrising <command> --config path [--seed u64] [--out dir]

The config file is a flat JSON object validated against the command's key
table; --seed and --out override the config's seed and output_dir.  The env
var TOOL_THREADS caps the numeric thread pools (applied at package import,
before the first numpy import in the process).
"""

from __future__ import annotations

import argparse
import sys

from .config import COMMANDS, ConfigError, parse_config
from .runner import EXIT_CONFIG, EXIT_INTERNAL, run


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lrising",
        description="Long-range Ising boundary-condition experiments.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="path to a flat JSON config")
    parser.add_argument("--seed", type=int, default=None, help="override config seed")
    parser.add_argument("--out", default=None, help="override config output_dir")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.seed is not None and not 0 <= args.seed < 2**64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = parse_config(args.command, args.config, seed=args.seed, out=args.out)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return run(cfg)
    except Exception as e:  # noqa: BLE001 - nothing else may escape the CLI
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
