"""Main entry point for Clopen Baire."""

import argparse
import logging
import os
import sys
from typing import List, Optional

from pydantic import ValidationError

from .app import ClopenCommandApp
from .config import RunConfig
from .constants import DEFAULT_GAME_ROUNDS, EXIT_USAGE, LOG_LEVEL_ENV
from .suites import SUITES
from .workbench import ClopenWorkbench


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Seed for every random choice (env CLOPEN_BAIRE_SEED)")
    common.add_argument("--fuel", type=int, default=None, help="Longest prefix read when deciding a pair of points")
    common.add_argument("--horizon", type=int, default=None, help="Build steps allowed per witness search")
    common.add_argument("--window", type=int, default=None, help="Notations drawn below a limit ordinal")
    common.add_argument("--out", default=None, help="Write the result to this file instead of stdout")
    common.add_argument("--format", choices=("json", "dot"), default=None, help="Output format")
    common.add_argument("--quick", action="store_true", default=None, help="Scaled-down verification sizes")
    common.add_argument("--log-level", default=None, help="Logging level on stderr (env CLOPEN_BAIRE_LOG_LEVEL)")

    parser = argparse.ArgumentParser(prog="clopen_baire", description="Clopen graphs on Baire space")
    commands = parser.add_subparsers(dest="command")

    decide = commands.add_parser("decide", parents=[common], help="Run the descent procedure on a pair of points")
    decide.add_argument("--alpha", default="w", help="Limit ordinal such as w, w^2, w^3+w")
    decide.add_argument("--x", help="Point of Baire space, e.g. 0,1,(3)*")
    decide.add_argument("--y", help="Gamma point, e.g. (1|in),(0|w+1)*")
    decide.add_argument("--random", action="store_true", help="Draw both points from the seed")

    rank = commands.add_parser("rank", parents=[common], help="Truncated rank of a rectangle")
    rank.add_argument("--graph", default="ealpha", help="'ealpha' or an alpha-tree JSON file")
    rank.add_argument("--alpha", default="w", help="Ordinal for --graph ealpha")
    rank.add_argument("--s", required=True, help="First side, e.g. 0,2,3")
    rank.add_argument("--t", required=True, help="Second side, same length as --s")
    rank.add_argument("--branch", type=int, default=None, help="Entries explored per level")
    rank.add_argument("--depth", type=int, default=None, help="Longest rectangle explored")

    game = commands.add_parser("game", parents=[common], help="Play the rank game against a challenger")
    game.add_argument("--alpha", default="w^2", help="Limit ordinal of the relation")
    game.add_argument("--gamma", required=True, help="Starting pending ordinal, below alpha")
    game.add_argument("--challenger", choices=("greedy", "random"), default="greedy")
    game.add_argument("--rounds", type=int, default=DEFAULT_GAME_ROUNDS)

    universal = commands.add_parser("universal", parents=[common], help="Build the universal alpha-tree")
    universal.add_argument("--alpha", default="w^2")
    universal.add_argument("--steps", type=int, default=0)
    universal.add_argument("--variant", choices=("plain", "true-clopen"), default="plain")
    universal.add_argument("--resume", default=None, help="Continue from a saved snapshot")

    embed = commands.add_parser("embed", parents=[common], help="Embed an alpha-tree into the universal tree")
    embed.add_argument("--tree", required=True, help="Alpha-tree JSON file")
    embed.add_argument("--universal", default="fresh", help="Snapshot file, or 'fresh'")
    embed.add_argument("--alpha", default=None, help="Ordinal of a fresh universal tree (default: the tree's)")
    embed.add_argument("--variant", choices=("plain", "true-clopen"), default="plain")
    embed.add_argument("--steps", type=int, default=0, help="Build steps before embedding")
    embed.add_argument("--save-universal", default=None, help="Write the extended universal tree here")
    embed.add_argument("--check-samples", type=int, default=0, help="Point pairs compared after embedding")

    verify = commands.add_parser("verify", parents=[common], help="Run verification suites")
    verify.add_argument("--suite", choices=sorted(SUITES) + ["all"], default="all")
    return parser


def configure_logging(level: Optional[str]) -> None:
    name = (level or os.environ.get(LOG_LEVEL_ENV) or "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, name, logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(getattr(args, "log_level", None))
    try:
        config = RunConfig.from_sources(
            {
                "seed": getattr(args, "seed", None),
                "fuel": getattr(args, "fuel", None),
                "horizon": getattr(args, "horizon", None),
                "enumeration_window": getattr(args, "window", None),
                "output": getattr(args, "out", None),
                "output_format": getattr(args, "format", None),
                "quick": getattr(args, "quick", None),
            }
        )
    except ValidationError as error:
        sys.stderr.write(f"invalid configuration: {error}\n")
        return EXIT_USAGE
    app = ClopenCommandApp(workbench=ClopenWorkbench(config))
    return app.run(args)


if __name__ == "__main__":
    sys.exit(main())
