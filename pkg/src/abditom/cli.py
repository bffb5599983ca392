"""Command line front end: seeded sweeps, single games, rulebase checks."""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from .errors import AbditomError, EmptyData
from .boxplot import box_plot_svg, metric_values
from .harness import SweepConfig, row_for, summarise, summary_lines, sweep_records, write_csv
from .runtime import run_game

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_GAME = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abditom",
        description="Cooperative card play from perspective shifts and "
                    "abduced explanations.")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run a seeded batch of games")
    sweep.add_argument("--sizes", default="2,3,4,5",
                       help="comma-separated team sizes (default 2,3,4,5)")
    sweep.add_argument("--games", type=int, default=100,
                       help="games per team size (default 100)")
    sweep.add_argument("--seed", type=int, default=2026,
                       help="base seed the per-game seeds derive from")
    sweep.add_argument("--policy", choices=("model", "random"),
                       default="model")
    sweep.add_argument("--abduction", choices=("on", "off"), default="on",
                       help="off plays without explanation constraints")
    sweep.add_argument("--counterfactual", action="store_true",
                       help="also measure each turn with constraints masked")
    sweep.add_argument("--jobs", type=int, default=1,
                       help="worker processes (default 1)")
    sweep.add_argument("--timing", choices=("wall", "none"), default="wall",
                       help="none leaves wall_ms empty, making the CSV "
                            "reproducible byte for byte")
    sweep.add_argument("--csv", metavar="PATH", help="write per-game rows")
    sweep.add_argument("--svg-score", metavar="PATH",
                       help="write a score box plot")
    sweep.add_argument("--svg-efficiency", metavar="PATH",
                       help="write an efficiency box plot")

    one = sub.add_parser("play-one", help="play a single game and trace it")
    one.add_argument("--players", type=int, required=True)
    one.add_argument("--seed", type=int, required=True)
    one.add_argument("--policy", choices=("model", "random"), default="model")
    one.add_argument("--abduction", choices=("on", "off"), default="on")

    sub.add_parser("validate", help="check the packaged rule files")
    return parser


def _parse_sizes(raw: str, parser: argparse.ArgumentParser):
    try:
        sizes = tuple(int(s) for s in raw.split(",") if s.strip())
    except ValueError:
        parser.error(f"--sizes must be comma-separated integers, got {raw!r}")
    if not sizes or any(not 2 <= n <= 5 for n in sizes):
        parser.error(f"team sizes must be between 2 and 5, got {raw!r}")
    return sizes


def _cmd_sweep(args, parser) -> int:
    sizes = _parse_sizes(args.sizes, parser)
    if args.games < 1:
        parser.error("--games must be positive")
    if args.jobs < 1:
        parser.error("--jobs must be positive")
    cfg = SweepConfig(sizes=sizes, games=args.games, base_seed=args.seed,
                      policy=args.policy, use_aics=args.abduction == "on",
                      counterfactual=args.counterfactual, jobs=args.jobs)
    rows = [row_for(rec, timing=args.timing) for rec in sweep_records(cfg)]
    if args.csv:
        write_csv(rows, args.csv)
    for metric, path, ref in (("score", args.svg_score, None),
                              ("efficiency", args.svg_efficiency, 0.5)):
        if not path:
            continue
        try:
            groups = metric_values(rows, metric)
        except EmptyData as exc:
            print(f"abditom: no {metric} plot: {exc}", file=sys.stderr)
            continue
        svg = box_plot_svg(groups, title=f"{metric} by team size",
                           y_label=metric, ref_line=ref)
        with open(path, "w") as fh:
            fh.write(svg)
    for line in summary_lines(summarise(rows)):
        print(line)
    return EXIT_OK


def _cmd_play_one(args) -> int:
    record = run_game(args.players, args.seed, policy=args.policy,
                      use_aics=args.abduction == "on", collect_trace=True)
    for line in record.trace:
        print(line)
    for line in record.aic_lines:
        print(line)
    eff = record.efficiency
    print(f"result: score={record.score} turns={record.turns} "
          f"hints={record.hints} "
          f"efficiency={'n/a' if eff is None else f'{eff:.3f}'} "
          f"outcome={record.outcome}")
    return EXIT_OK


def _cmd_validate() -> int:
    from .rulebase import RULE_FILES, load_rulebase, validate

    validate()
    programs = load_rulebase()
    for name in RULE_FILES:
        print(f"{name}: {len(programs[name])} clauses")
    print("rulebase OK")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "sweep":
            return _cmd_sweep(args, parser)
        if args.command == "play-one":
            if not 2 <= args.players <= 5:
                parser.error("--players must be between 2 and 5")
            return _cmd_play_one(args)
        return _cmd_validate()
    except AbditomError as exc:
        if args.command == "validate":
            print(f"abditom: invalid rulebase: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        print(f"abditom: game failed: {exc}", file=sys.stderr)
        return EXIT_GAME


if __name__ == "__main__":
    sys.exit(main())
