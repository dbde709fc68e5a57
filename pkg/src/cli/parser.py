"""
Command-line surface.

Global options may be given before or after the command name.
"""

import argparse
from pathlib import Path

from src.domain.models import TheoremTag

THEOREM_CHOICES = tuple(tag.code for tag in TheoremTag) + tuple(tag.value for tag in TheoremTag)


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {text}")
    return value


def _add_global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--config", type=Path, default=default(None), help="model config (JSON)")
    parser.add_argument("--out", type=Path, default=default(None), help="output folder")
    parser.add_argument("--seed", type=int, default=default(None), help="override the seed")
    parser.add_argument(
        "--tol-exact", type=_positive_float, default=default(None), help="exact tolerance"
    )
    parser.add_argument(
        "--tol-fit", type=_positive_float, default=default(None), help="slope-fit tolerance"
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=default(0),
        help="more logging (repeat for debug)",
    )


def build_parser() -> argparse.ArgumentParser:
    """Parser with one subcommand per workflow."""
    parser = argparse.ArgumentParser(
        prog="zenolimit",
        description="Zeno-limit reduction of boundary-driven Lindblad systems.",
    )
    _add_global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_global_options(common, suppress=True)

    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    commands.add_parser(
        "validate", parents=[common], help="check model invariants and ergodicity"
    )
    commands.add_parser(
        "project", parents=[common], help="write H_P, D_P, D_P sharp and B_P"
    )

    steady = commands.add_parser(
        "steady", parents=[common], help="steady-state expansion and error table"
    )
    steady.add_argument("--order", type=_nonnegative_int, default=1, help="highest order K")

    scan = commands.add_parser("scan", parents=[common], help="scaling scans")
    target = scan.add_mutually_exclusive_group(required=True)
    target.add_argument("--theorem", choices=THEOREM_CHOICES, help="comparison to scan")
    target.add_argument("--mixing", action="store_true", help="mixing-time ratio scan")
    scan.add_argument("--epsilon", type=float, default=0.2, help="mixing threshold")

    for name, help_text in (
        ("verify-example", "run the acceptance suite on the built-in example"),
        ("export-example", "write the built-in example as a config file"),
    ):
        sub = commands.add_parser(name, parents=[common], help=help_text)
        sub.add_argument("--beta", type=float, default=1.0, help="inverse temperature")

    return parser
