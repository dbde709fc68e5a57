"""
Model document persistence using JSON.

One ConfigStore owns one document on disk. Loads are cached, writes are
atomic, and an unreadable document is an error rather than a default.
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Optional

from src.domain.errors import ConfigError
from src.domain.models import ModelConfig

logger = logging.getLogger(__name__)


class ConfigStore:
    """
    Persistent storage for a single model configuration document.
    """

    def __init__(self, config_path: Path):
        """
        Initialize the config store.

        Args:
            config_path: Path of the JSON document
        """
        self._config_path = Path(config_path)
        self._document: Optional[dict] = None

    @property
    def path(self) -> Path:
        return self._config_path

    def load_document(self) -> dict:
        """
        Load the raw JSON document.

        Returns:
            Parsed mapping (cached after the first call)

        Raises:
            ConfigError: If the file is missing or not valid JSON
        """
        if self._document is not None:
            return self._document

        try:
            content = self._config_path.read_text(encoding="utf-8")
            data = json.loads(content)
        except FileNotFoundError as e:
            raise ConfigError(
                f"Config file not found: {self._config_path}",
                user_message=f"Config file not found: {self._config_path}",
            ) from e
        except (OSError, UnicodeDecodeError) as e:
            raise ConfigError(f"Cannot read {self._config_path}: {e}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(
                f"Invalid JSON in {self._config_path}: {e}",
                user_message=f"Config is not valid JSON (line {e.lineno}).",
            ) from e

        if not isinstance(data, dict):
            raise ConfigError(
                "Config root must be an object",
                user_message="Config must be a JSON object.",
            )
        logger.debug("Loaded config %s", self._config_path)
        self._document = data
        return data

    def load(self) -> ModelConfig:
        """
        Load and convert the document.

        Raises:
            ConfigError: If the document cannot be converted to a ModelConfig
        """
        try:
            return ModelConfig.from_dict(self.load_document())
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"Malformed config {self._config_path}: {e!r}") from e

    def save_document(self, data: dict) -> Path:
        """
        Write a document atomically (temp file, then rename).

        Returns:
            Path of the written file
        """
        self._config_path.parent.mkdir(parents=True, exist_ok=True)
        content = json.dumps(data, indent=2, ensure_ascii=False) + "\n"
        temp_path = self._config_path.with_suffix(".tmp")
        temp_path.write_text(content, encoding="utf-8", newline="\n")
        temp_path.replace(self._config_path)
        self._document = data
        return self._config_path

    def save(self, config: ModelConfig) -> Path:
        return self.save_document(config.to_dict())

    def digest(self) -> str:
        """SHA-256 over the canonical re-serialization of the document."""
        return document_digest(self.load_document())


def document_digest(data: dict) -> str:
    """Digest independent of whitespace and key order."""
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
