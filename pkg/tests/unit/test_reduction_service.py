"""
Unit tests for ReductionService.
"""

from pathlib import Path
from unittest.mock import Mock

import pytest

from src.domain.errors import ConfigError
from src.domain.example_model import example_config
from src.domain.models import ModelConfig, TheoremTag
from src.domain.reduction_service import ReductionService


class TestReductionService:
    """Tests for the ReductionService class."""

    @pytest.fixture
    def document(self):
        """The example model as a document with a short γ grid."""
        return example_config(1.0, gamma_grid=(10.0, 20.0, 40.0)).to_dict()

    @pytest.fixture
    def mock_config_store(self, document):
        """Create a mock config store serving the example document."""
        store = Mock()
        store.load_document.return_value = document
        store.load.return_value = ModelConfig.from_dict(document)
        store.digest.return_value = "abc123"
        return store

    @pytest.fixture
    def mock_file_system(self):
        """Create a mock file system adapter that echoes target paths."""
        fs = Mock()
        fs.can_write.return_value = True
        fs.write_json.side_effect = lambda path, data: path
        fs.write_csv.side_effect = lambda path, header, rows: path
        return fs

    @pytest.fixture
    def mock_manifest_store(self):
        """Create a mock manifest store."""
        return Mock()

    @pytest.fixture
    def service(self, mock_file_system, mock_manifest_store, mock_config_store):
        """Create a ReductionService with mocked dependencies."""
        return ReductionService(
            file_system=mock_file_system,
            manifest_store=mock_manifest_store,
            output_folder=Path("/out"),
            config_store=mock_config_store,
            versions={"numpy": "x"},
        )

    def saved_manifest(self, mock_manifest_store):
        mock_manifest_store.save.assert_called_once()
        return mock_manifest_store.save.call_args[0][0]

    def test_unwritable_output_folder(self, service, mock_file_system):
        """A folder we cannot write to is a config error."""
        mock_file_system.can_write.return_value = False
        with pytest.raises(ConfigError) as exc_info:
            service.validate()
        assert "/out" in exc_info.value.user_message

    def test_missing_config(self, mock_file_system, mock_manifest_store):
        """Config commands need a config store."""
        service = ReductionService(mock_file_system, mock_manifest_store, Path("/out"))
        with pytest.raises(ConfigError) as exc_info:
            service.project()
        assert "--config" in exc_info.value.user_message
        assert self.saved_manifest(mock_manifest_store).exit_code == 2

    def test_invalid_document(self, service, mock_config_store, mock_manifest_store):
        """Validator failures surface with their code."""
        mock_config_store.load_document.return_value = {"dims": {"d_A": 2, "d_B": 2}}
        with pytest.raises(ConfigError) as exc_info:
            service.validate()
        assert "MISSING_FIELD" in exc_info.value.user_message
        mock_config_store.load.assert_not_called()
        assert self.saved_manifest(mock_manifest_store).exit_code == 2

    def test_validate_example(self, service, mock_manifest_store):
        """The example passes validation and the manifest records the digest."""
        result = service.validate()
        report = dict(result.report)
        assert result.exit_code == 0
        assert report["status"] == "pass"
        assert report["D_P_sharp"] == "ergodic"
        manifest = self.saved_manifest(mock_manifest_store)
        assert manifest.config_digest == "abc123"
        assert manifest.versions == {"numpy": "x"}
        assert "load" in manifest.stage_times

    def test_validate_reports_non_ergodic(self, service, mock_config_store, document):
        """A dissipator without jumps fails with exit code 1."""
        document["dissipator_A"]["jumps"] = []
        mock_config_store.load.return_value = ModelConfig.from_dict(document)
        result = service.validate()
        assert result.exit_code == 1
        assert dict(result.report)["status"] == "fail"

    def test_project_writes_document(self, service, mock_file_system, mock_manifest_store):
        """project.json holds the effective objects and the jump form."""
        result = service.project()
        path, data = mock_file_system.write_json.call_args[0]
        assert path == Path("/out/project.json")
        assert {"H_P", "D_P", "D_P_sharp", "B_P", "D_P_jumps"} <= set(data)
        assert data["extraction_available"] is True
        assert result.outputs == [str(path)]
        assert self.saved_manifest(mock_manifest_store).outputs == [str(path)]

    def test_seed_override(self, mock_file_system, mock_manifest_store, mock_config_store):
        """The --seed value beats the document's seed."""
        service = ReductionService(
            mock_file_system,
            mock_manifest_store,
            Path("/out"),
            config_store=mock_config_store,
            seed=99,
        )
        service.validate()
        assert self.saved_manifest(mock_manifest_store).seed == 99

    def test_steady_writes_error_table(self, service, mock_file_system):
        """One error row per γ and order."""
        service.steady(order=1)
        path, header, rows = mock_file_system.write_csv.call_args[0]
        assert path == Path("/out/error_table.csv")
        assert header[0] == "gamma"
        assert len(rows) == 3 * 2
        errors = {(gamma, k): error for gamma, k, error, _ in rows}
        assert errors[(40.0, 1)] < errors[(40.0, 0)]

    def test_scan_appends_fit_rows(self, service, mock_file_system):
        """The scan table ends with the fitted rate and R²."""
        result = service.scan(TheoremTag.LEAKAGE)
        path, _, rows = mock_file_system.write_csv.call_args[0]
        assert path.name == "scan_leakage.csv"
        assert rows[-2][0] == "fitted_rate"
        assert rows[-1][0] == "r_squared"
        assert dict(result.report)["theorem"] == "leakage"

    def test_export_example(self, mock_file_system, mock_manifest_store):
        """The example needs no config and is written as a document."""
        service = ReductionService(mock_file_system, mock_manifest_store, Path("/out"), seed=5)
        result = service.export_example(0.5)
        path, data = mock_file_system.write_json.call_args[0]
        assert path.name == "example_config.json"
        assert data["seed"] == 5
        assert result.exit_code == 0
        assert self.saved_manifest(mock_manifest_store).command == "export-example"

    def test_failure_still_writes_manifest(self, service, mock_file_system, mock_manifest_store):
        """Unexpected errors are re-raised after the manifest is saved."""
        mock_file_system.write_json.side_effect = OSError("disk full")
        with pytest.raises(OSError):
            service.project()
        assert self.saved_manifest(mock_manifest_store).exit_code == 1
