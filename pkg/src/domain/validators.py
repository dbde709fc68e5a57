"""
Model document validation for ZenoLimit.

Checks a raw config mapping in phases:
1. Structure: required fields and dimensions
2. Matrices: shapes, finite entries, self-adjointness
3. Rates: gamma and the gamma grid
4. Tolerances: positive finite overrides

Numerical invariants (ergodicity, gap) are left to the domain constructors.
"""

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from src.domain.matrix_codec import decode_matrix
from src.domain.models import Tolerances


@dataclass
class ValidationResult:
    """Result of model validation."""

    is_valid: bool
    error_message: str = ""
    error_code: str = ""  # "MISSING_FIELD", "BAD_DIMS", "BAD_MATRIX", "NON_HERMITIAN", ...


class ModelValidator:
    """
    Validates model documents before they are turned into a CompositeModel.

    Returns the first failure found, phase by phase.
    """

    REQUIRED_FIELDS = ("dims", "H_A", "H_AB", "H_B", "dissipator_A")
    HERMITIAN_TOL = 1e-10

    def validate(self, data: Any) -> ValidationResult:
        """
        Validate a config mapping.

        Args:
            data: Parsed JSON document

        Returns:
            ValidationResult with is_valid, error_message, and error_code
        """
        if not isinstance(data, dict):
            return self._fail("Config document must be a JSON object.", "MISSING_FIELD")

        for phase in (self._check_structure, self._check_matrices, self._check_rates):
            result = phase(data)
            if not result.is_valid:
                return result
        return self._check_tolerances(data)

    def _fail(self, message: str, code: str) -> ValidationResult:
        return ValidationResult(is_valid=False, error_message=message, error_code=code)

    def _check_structure(self, data: dict) -> ValidationResult:
        for name in self.REQUIRED_FIELDS:
            if name not in data:
                return self._fail(f"Missing field '{name}'.", "MISSING_FIELD")
        dims = data["dims"]
        if not isinstance(dims, dict) or "d_A" not in dims or "d_B" not in dims:
            return self._fail("'dims' must contain d_A and d_B.", "MISSING_FIELD")
        for key in ("d_A", "d_B"):
            value = dims[key]
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                return self._fail(f"{key} must be a positive integer, got {value!r}.", "BAD_DIMS")
        if not isinstance(data["dissipator_A"], dict):
            return self._fail("'dissipator_A' must be an object.", "MISSING_FIELD")
        if "gamma" not in data and "gamma_grid" not in data:
            return self._fail("Provide 'gamma' or 'gamma_grid'.", "MISSING_FIELD")
        return ValidationResult(is_valid=True)

    def _decode(self, name: str, value: Any, dim: int):
        try:
            matrix = decode_matrix(value)
        except ValueError as e:
            return None, self._fail(f"{name}: {e}", "BAD_MATRIX")
        if matrix.shape != (dim, dim):
            return None, self._fail(
                f"{name} has shape {matrix.shape}, expected ({dim}, {dim}).", "BAD_MATRIX"
            )
        if not np.all(np.isfinite(matrix)):
            return None, self._fail(f"{name} has non-finite entries.", "BAD_MATRIX")
        return matrix, None

    def _check_matrices(self, data: dict) -> ValidationResult:
        d_a = data["dims"]["d_A"]
        d_b = data["dims"]["d_B"]
        hamiltonians = {
            "H_A": (data["H_A"], d_a),
            "H_AB": (data["H_AB"], d_a * d_b),
            "H_B": (data["H_B"], d_b),
        }
        dissipator = data["dissipator_A"]
        if dissipator.get("hamiltonian_part") is not None:
            hamiltonians["hamiltonian_part"] = (dissipator["hamiltonian_part"], d_a)

        for name, (value, dim) in hamiltonians.items():
            matrix, failure = self._decode(name, value, dim)
            if failure:
                return failure
            defect = float(np.max(np.abs(matrix - matrix.conj().T), initial=0.0))
            if defect > self.HERMITIAN_TOL * max(1.0, float(np.max(np.abs(matrix)))):
                return self._fail(
                    f"{name} is not self-adjoint (defect {defect:.2e}).", "NON_HERMITIAN"
                )

        jumps = dissipator.get("jumps", [])
        if not isinstance(jumps, list):
            return self._fail("'jumps' must be a list of matrices.", "BAD_MATRIX")
        for index, jump in enumerate(jumps):
            _, failure = self._decode(f"jump {index}", jump, d_a)
            if failure:
                return failure
        return ValidationResult(is_valid=True)

    def _check_rates(self, data: dict) -> ValidationResult:
        if "gamma" in data:
            gamma = data["gamma"]
            if not self._is_positive(gamma):
                return self._fail(f"gamma must be positive and finite, got {gamma!r}.", "BAD_GAMMA")

        grid = data.get("gamma_grid", [])
        if not isinstance(grid, list) or not all(self._is_positive(g) for g in grid):
            return self._fail("gamma_grid must be a list of positive numbers.", "BAD_GAMMA_GRID")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            return self._fail("gamma_grid must be strictly increasing.", "BAD_GAMMA_GRID")
        return ValidationResult(is_valid=True)

    def _check_tolerances(self, data: dict) -> ValidationResult:
        overrides = data.get("tolerances") or {}
        if not isinstance(overrides, dict):
            return self._fail("'tolerances' must be an object.", "BAD_TOLERANCE")
        known = Tolerances().to_dict()
        for key, value in overrides.items():
            if key not in known:
                return self._fail(f"Unknown tolerance '{key}'.", "BAD_TOLERANCE")
            if not self._is_positive(value):
                return self._fail(
                    f"Tolerance '{key}' must be positive, got {value!r}.", "BAD_TOLERANCE"
                )
        return ValidationResult(is_valid=True)

    @staticmethod
    def _is_positive(value: Any) -> bool:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return False
        return math.isfinite(value) and value > 0
