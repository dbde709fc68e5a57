"""
Application bootstrap and entry point.

Configures logging, parses the command line and runs the command.
"""

import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

LOG_LEVEL_ENV_VAR = "ZENOLIMIT_LOG_LEVEL"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
VERBOSITY_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


def configure_logging(verbosity: int = 0) -> None:
    """
    Configure the root logger on stderr.

    -v flags win; without them ZENOLIMIT_LOG_LEVEL is honored.
    """
    level = VERBOSITY_LEVELS[min(verbosity, len(VERBOSITY_LEVELS) - 1)]
    if verbosity == 0:
        name = os.environ.get(LOG_LEVEL_ENV_VAR, "").upper()
        level = logging.getLevelName(name) if name else level
        if not isinstance(level, int):
            level = logging.WARNING
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Application entry point.

    Returns:
        Process exit code
    """
    # Ensure we can import from src
    project_root = Path(__file__).parent.parent
    if str(project_root) not in sys.path:
        sys.path.insert(0, str(project_root))

    # Import here to keep start-up cheap for --help
    from src.cli.commands import execute
    from src.cli.parser import build_parser

    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    return execute(args)


if __name__ == "__main__":
    sys.exit(main())
