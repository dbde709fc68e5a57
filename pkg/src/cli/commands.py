"""
Command dispatch and report printing.

Exit codes: 0 success, 1 domain failure or failed check, 2 usage or
config error.
"""

import argparse
import logging
import math
import sys
from typing import Callable, TextIO

from src.domain.errors import ConfigError, DomainError
from src.domain.models import CommandResult, TheoremTag
from src.domain.reduction_service import ReductionService
from src.infra.config_store import ConfigStore
from src.infra.file_system import FileSystem
from src.infra.manifest_store import ManifestStore
from src.infra.platform import get_default_output_folder, get_library_versions

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def build_service(args: argparse.Namespace) -> ReductionService:
    """Wire the service with the real adapters."""
    output_folder = args.out or get_default_output_folder()
    return ReductionService(
        file_system=FileSystem(),
        manifest_store=ManifestStore(output_folder),
        output_folder=output_folder,
        config_store=ConfigStore(args.config) if args.config else None,
        seed=args.seed,
        tolerance_overrides={"exact": args.tol_exact, "fit": args.tol_fit},
        versions=get_library_versions(),
    )


def _scan(service: ReductionService, args: argparse.Namespace) -> CommandResult:
    if args.mixing:
        if not 0.0 < args.epsilon < 0.5:
            raise ConfigError(
                f"epsilon {args.epsilon} outside (0, 0.5)",
                user_message="--epsilon must lie strictly between 0 and 0.5.",
            )
        return service.scan_mixing(args.epsilon)
    return service.scan(TheoremTag.parse(args.theorem))


def _finite_beta(args: argparse.Namespace) -> float:
    if not math.isfinite(args.beta):
        raise ConfigError(f"beta {args.beta} is not finite", user_message="--beta must be finite.")
    return args.beta


HANDLERS: dict[str, Callable[[ReductionService, argparse.Namespace], CommandResult]] = {
    "validate": lambda service, args: service.validate(),
    "project": lambda service, args: service.project(),
    "steady": lambda service, args: service.steady(args.order),
    "scan": _scan,
    "verify-example": lambda service, args: service.verify_example(_finite_beta(args)),
    "export-example": lambda service, args: service.export_example(_finite_beta(args)),
}


def print_report(result: CommandResult, stream: TextIO) -> None:
    """Aligned key: value lines."""
    if not result.report:
        return
    width = max(len(key) for key, _ in result.report) + 1
    for key, value in result.report:
        stream.write(f"{key + ':':<{width}} {value}\n")


def execute(args: argparse.Namespace, service: ReductionService | None = None) -> int:
    """
    Run the parsed command.

    Args:
        args: Parsed arguments
        service: Preconfigured service (built from args when omitted)

    Returns:
        Process exit code
    """
    try:
        service = service or build_service(args)
        result = HANDLERS[args.command](service, args)
    except ConfigError as e:
        logger.debug("Config error: %s", e)
        sys.stderr.write(f"error: {e.user_message}\n")
        return EXIT_USAGE
    except DomainError as e:
        logger.debug("Domain error: %s", e)
        sys.stderr.write(f"error: {e.user_message}\n")
        return EXIT_FAILURE

    print_report(result, sys.stdout)
    return result.exit_code
