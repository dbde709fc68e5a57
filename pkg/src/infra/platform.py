"""
Environment utilities for ZenoLimit.

Resolves the default output folder and reports library versions for run
manifests.
"""

import os
import platform
from pathlib import Path

OUTPUT_ENV_VAR = "ZENOLIMIT_OUT"
DEFAULT_OUTPUT_NAME = "zenolimit-out"


def get_default_output_folder() -> Path:
    """
    Get the folder commands write to when --out is not given.

    Returns:
        $ZENOLIMIT_OUT if set, otherwise ./zenolimit-out
    """
    override = os.environ.get(OUTPUT_ENV_VAR)
    if override:
        return Path(override).expanduser()
    return Path.cwd() / DEFAULT_OUTPUT_NAME


def get_library_versions() -> dict[str, str]:
    """Versions of the numerical stack and of this package."""
    import numpy
    import scipy

    from src import __version__

    return {
        "python": platform.python_version(),
        "numpy": numpy.__version__,
        "scipy": scipy.__version__,
        "zenolimit": __version__,
    }
