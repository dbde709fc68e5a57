"""
Integration tests running the command line end to end on temp folders.
"""

import csv
import json

import pytest

from src.app import main


class TestCommandLine:
    """End-to-end runs of main()."""

    @pytest.fixture
    def exported(self, temp_dir):
        """Export the example and return its config path."""
        assert main(["export-example", "--beta", "1.0", "--out", str(temp_dir)]) == 0
        return temp_dir / "example_config.json"

    def test_export_writes_config_and_manifest(self, exported, temp_dir):
        """The exported document is valid JSON and a manifest is left."""
        document = json.loads(exported.read_text(encoding="utf-8"))
        assert document["dims"] == {"d_A": 2, "d_B": 2}
        manifest = json.loads((temp_dir / "manifest.json").read_text(encoding="utf-8"))
        assert manifest["command"] == "export-example"
        assert manifest["exit_code"] == 0

    def test_validate_exported_example(self, exported, temp_dir, capsys):
        """The example validates with exit code 0."""
        code = main(["validate", "--config", str(exported), "--out", str(temp_dir)])
        assert code == 0
        assert "status:" in capsys.readouterr().out

    def test_project_exported_example(self, exported, temp_dir):
        """project.json carries H_P = σ2."""
        assert main(["project", "--config", str(exported), "--out", str(temp_dir)]) == 0
        document = json.loads((temp_dir / "project.json").read_text(encoding="utf-8"))
        assert document["H_P"][0][1] == pytest.approx([0.0, -1.0], abs=1e-9)
        assert document["H_P"][1][0] == pytest.approx([0.0, 1.0], abs=1e-9)

    def test_steady_error_table(self, exported, temp_dir):
        """The error table has one row per γ and order."""
        argv = ["steady", "--order", "1", "--config", str(exported), "--out", str(temp_dir)]
        assert main(argv) == 0
        with open(temp_dir / "error_table.csv", newline="", encoding="utf-8") as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 4 * 2
        assert {row["K"] for row in rows} == {"0", "1"}

    def test_missing_config_is_usage_error(self, temp_dir, capsys):
        """Config commands without --config exit with 2."""
        assert main(["project", "--out", str(temp_dir)]) == 2
        assert "--config" in capsys.readouterr().err

    def test_nonexistent_config(self, temp_dir):
        """A missing file exits with 2."""
        argv = ["validate", "--config", str(temp_dir / "none.json"), "--out", str(temp_dir)]
        assert main(argv) == 2

    def test_invalid_config(self, exported, temp_dir, capsys):
        """Validation failures exit with 2 and name the error code."""
        document = json.loads(exported.read_text(encoding="utf-8"))
        document["gamma"] = -1.0
        exported.write_text(json.dumps(document), encoding="utf-8")
        assert main(["validate", "--config", str(exported), "--out", str(temp_dir)]) == 2
        assert "BAD_GAMMA" in capsys.readouterr().err

    def test_bad_theorem_choice(self, temp_dir):
        """argparse rejects unknown comparisons with exit code 2."""
        with pytest.raises(SystemExit) as exc_info:
            main(["scan", "--theorem", "bogus", "--out", str(temp_dir)])
        assert exc_info.value.code == 2

    @pytest.mark.slow
    def test_mixing_scan(self, exported, temp_dir):
        """The mixing scan writes one row per γ."""
        argv = ["scan", "--mixing", "--config", str(exported), "--out", str(temp_dir)]
        assert main(argv) == 0
        with open(temp_dir / "scan_mixing.csv", newline="", encoding="utf-8") as handle:
            rows = list(csv.DictReader(handle))
        assert [float(row["gamma"]) for row in rows] == [10.0, 30.0, 100.0, 300.0]

    @pytest.mark.slow
    def test_scan_by_code(self, exported, temp_dir):
        """--theorem TZCVS runs the leakage scan."""
        argv = ["scan", "--theorem", "TZCVS", "--config", str(exported), "--out", str(temp_dir)]
        assert main(argv) == 0
        assert (temp_dir / "scan_leakage.csv").exists()
