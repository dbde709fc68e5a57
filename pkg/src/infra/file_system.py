"""
File system operations adapter.

Provides:
- Write permission checks for the output folder
- Atomic JSON and CSV writers (UTF-8, LF line endings)
"""

import csv
import io
import json
import logging
from pathlib import Path
from typing import Iterable, Sequence

logger = logging.getLogger(__name__)


class FileSystem:
    """
    Adapter for file system operations.

    Every write goes to a temp file first and is renamed into place.
    """

    def can_write(self, folder: Path) -> bool:
        """
        Check if we have write permission for a folder.

        Args:
            folder: Path to the folder to check (created when missing)

        Returns:
            True if we can write to the folder, False otherwise
        """
        try:
            folder.mkdir(parents=True, exist_ok=True)
            test_file = folder / ".zenolimit_write_test"
            test_file.touch()
            test_file.unlink()
            return True
        except OSError:
            return False

    def write_json(self, path: Path, data) -> Path:
        """Write a JSON document with sorted keys."""
        content = json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
        return self._atomic_write(path, content)

    def write_csv(self, path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
        """
        Write a CSV table.

        Args:
            path: Target file
            header: Column names
            rows: Row values; floats are written with repr precision
        """
        buffer = io.StringIO(newline="")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
        return self._atomic_write(path, buffer.getvalue())

    def _atomic_write(self, path: Path, content: str) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        temp_path = path.with_name(path.name + ".tmp")
        temp_path.write_text(content, encoding="utf-8", newline="\n")
        temp_path.replace(path)
        logger.debug("Wrote %s", path)
        return path
