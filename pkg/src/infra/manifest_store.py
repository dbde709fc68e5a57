"""
Run manifest persistence.

Every command leaves a manifest.json next to its outputs recording what
ran, with which config and seed, how long each stage took, and what was
written.
"""

import json
import logging
from pathlib import Path
from typing import Optional

from src.domain.models import RunManifest

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


class ManifestStore:
    """JSON storage for the manifest of one output folder."""

    def __init__(self, folder: Path):
        self._path = Path(folder) / MANIFEST_NAME

    @property
    def path(self) -> Path:
        return self._path

    def save(self, manifest: RunManifest) -> Path:
        """Write the manifest atomically."""
        self._path.parent.mkdir(parents=True, exist_ok=True)
        content = json.dumps(manifest.to_dict(), indent=2, sort_keys=True) + "\n"
        temp_path = self._path.with_suffix(".tmp")
        temp_path.write_text(content, encoding="utf-8", newline="\n")
        temp_path.replace(self._path)
        logger.debug("Manifest written to %s", self._path)
        return self._path

    def load(self) -> Optional[RunManifest]:
        """
        Load the manifest if present.

        Returns:
            RunManifest, or None when missing or unreadable
        """
        try:
            data = json.loads(self._path.read_text(encoding="utf-8"))
            return RunManifest.from_dict(data)
        except FileNotFoundError:
            return None
        except (json.JSONDecodeError, KeyError, TypeError, ValueError):
            logger.warning("Ignoring unreadable manifest %s", self._path)
            return None
