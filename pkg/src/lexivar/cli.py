"""Command-line entry point."""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .errors import ConfigurationError, LexivarError
from .report import emit_tables
from .workflow import load_config, run_workflow


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexivar",
        description=(
            "Monthly topic-attention series from multilingual post corpora, "
            "analyzed against economic indicators with a VAR pipeline."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    analyze = sub.add_parser(
        "analyze",
        help="run the full pipeline described by a config file",
    )
    analyze.add_argument(
        "--config", required=True, metavar="PATH", help="run configuration file"
    )
    analyze.add_argument(
        "--seed", type=int, default=None, help="override the configured seed"
    )
    analyze.add_argument(
        "--out", default=None, metavar="DIR", help="override the output directory"
    )
    analyze.add_argument(
        "--format",
        choices=("csv", "markdown"),
        default="csv",
        help="table format for the report bundle",
    )
    analyze.add_argument(
        "--indicator",
        default="all",
        metavar="NAME",
        help="restrict the run to one configured indicator (default: all)",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    try:
        config = load_config(args.config)
        if args.seed is not None:
            config = dataclasses.replace(config, seed=args.seed)
        if args.out is not None:
            config = dataclasses.replace(config, out_dir=Path(args.out))
        if args.indicator != "all":
            config.indicator(args.indicator)  # validates the name
        bundle = run_workflow(config, indicator_filter=args.indicator)
        out_dir = emit_tables(bundle, fmt=args.format)
    except (LexivarError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    n_total = len(bundle.results) + len(bundle.failures)
    print(
        f"analyzed {n_total} series pairs: {len(bundle.results)} completed, "
        f"{len(bundle.failures)} failed; report written to {out_dir}"
    )
    for failure in bundle.failures:
        print(
            f"failed [{failure.stage}] {failure.indicator} / {failure.page} / "
            f"{failure.topic}: {failure.message}",
            file=sys.stderr,
        )
    return 0 if bundle.ok else 1
