"""
Acceptance checks of the built-in two-qubit example.
"""

import csv

import pytest

from src.app import main
from src.domain.acceptance_suite import run_acceptance_suite


class TestExampleAcceptance:
    """The example reproduces every closed form."""

    def test_static_checks(self):
        """Everything except the dynamics scans passes."""
        report = run_acceptance_suite(1.0, seed=0, include_dynamics=False)
        assert report.passed, [check.name for check in report.failures]
        names = {check.name for check in report.checks}
        assert {"h_p", "pi_a", "r_bar", "boundary_counter_model"} <= names

    @pytest.mark.parametrize("beta", [0.0, 0.5, 2.0])
    def test_static_checks_other_temperatures(self, beta):
        """The closed forms hold away from β = 1."""
        report = run_acceptance_suite(beta, seed=0, include_dynamics=False)
        assert report.passed, [check.name for check in report.failures]

    def test_infinite_temperature_is_exact(self):
        """At β = 0 the steady state is I/4 and every truncation is exact."""
        report = run_acceptance_suite(0.0, seed=0, include_dynamics=False)
        rows = {check.name: check for check in report.checks}
        for name in ("slope_leading", "slope_truncation_K0", "slope_truncation_K1"):
            assert rows[name].passed
            assert rows[name].value <= 1e-9
        assert rows["second_order_not_lindblad_gamma_100"].passed

    @pytest.mark.slow
    def test_full_suite(self):
        """Including the scaling scans."""
        report = run_acceptance_suite(1.0, seed=0)
        assert report.passed, [check.name for check in report.failures]

    @pytest.mark.slow
    def test_verify_example_command(self, temp_dir):
        """verify-example exits 0 and writes the acceptance table."""
        assert main(["verify-example", "--out", str(temp_dir)]) == 0
        with open(temp_dir / "acceptance.csv", newline="", encoding="utf-8") as handle:
            rows = list(csv.DictReader(handle))
        assert rows
        assert all(row["passed"] == "pass" for row in rows)
