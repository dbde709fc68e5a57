"""
Unit tests for the file system and manifest adapters.
"""

import json
from pathlib import Path
from unittest.mock import patch

import pytest

from src.domain.models import RunManifest
from src.infra.file_system import FileSystem
from src.infra.manifest_store import MANIFEST_NAME, ManifestStore
from src.infra.platform import OUTPUT_ENV_VAR, get_default_output_folder, get_library_versions


class TestFileSystem:
    """Tests for the FileSystem class."""

    @pytest.fixture
    def fs(self):
        return FileSystem()

    def test_can_write_creates_folder(self, fs, temp_dir):
        """Missing folders are created and checked for write access."""
        folder = temp_dir / "out" / "nested"
        assert fs.can_write(folder) is True
        assert folder.is_dir()
        assert list(folder.iterdir()) == []

    def test_can_write_false_on_error(self, fs, temp_dir):
        """OSError means not writable."""
        with patch.object(Path, "touch", side_effect=PermissionError("denied")):
            assert fs.can_write(temp_dir) is False

    def test_write_json_sorted(self, fs, temp_dir):
        """Keys are sorted and the file ends with a newline."""
        path = fs.write_json(temp_dir / "a.json", {"b": 1, "a": 2})
        text = path.read_text(encoding="utf-8")
        assert text.index('"a"') < text.index('"b"')
        assert text.endswith("\n")

    def test_write_csv_repr_floats(self, fs, temp_dir):
        """Floats keep full precision; lines end with LF."""
        path = fs.write_csv(temp_dir / "t.csv", ("x", "y"), [(0.1, 1), ("s", 1 / 3)])
        raw = path.read_bytes()
        assert b"\r\n" not in raw
        lines = raw.decode("utf-8").splitlines()
        assert lines == ["x,y", "0.1,1", f"s,{1 / 3!r}"]


class TestManifestStore:
    """Tests for the ManifestStore class."""

    def test_save_and_load(self, temp_dir):
        """A saved manifest loads back equal."""
        store = ManifestStore(temp_dir)
        manifest = RunManifest(command="project", seed=4, outputs=["project.json"])
        path = store.save(manifest)
        assert path.name == MANIFEST_NAME
        assert json.loads(path.read_text(encoding="utf-8"))["command"] == "project"
        assert store.load() == manifest

    def test_missing_manifest(self, temp_dir):
        """No file, no manifest."""
        assert ManifestStore(temp_dir).load() is None

    def test_corrupt_manifest(self, temp_dir):
        """Unreadable manifests are ignored."""
        (temp_dir / MANIFEST_NAME).write_text("{not json", encoding="utf-8")
        assert ManifestStore(temp_dir).load() is None


class TestPlatform:
    """Tests for environment helpers."""

    def test_output_folder_from_env(self, monkeypatch, temp_dir):
        """ZENOLIMIT_OUT overrides the default."""
        monkeypatch.setenv(OUTPUT_ENV_VAR, str(temp_dir))
        assert get_default_output_folder() == temp_dir

    def test_output_folder_default(self, monkeypatch, temp_dir):
        """Without the variable the folder is under the working directory."""
        monkeypatch.delenv(OUTPUT_ENV_VAR, raising=False)
        monkeypatch.chdir(temp_dir)
        assert get_default_output_folder() == Path.cwd() / "zenolimit-out"

    def test_library_versions(self):
        """Versions of the numerical stack are reported."""
        versions = get_library_versions()
        assert {"python", "numpy", "scipy", "zenolimit"} <= set(versions)
