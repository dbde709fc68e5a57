"""
Unit tests for model document validation.
"""

import copy

import pytest

from src.domain.example_model import example_config
from src.domain.validators import ModelValidator, ValidationResult


@pytest.fixture
def document():
    """A valid example document."""
    return example_config(gamma_grid=(10.0, 30.0, 100.0)).to_dict()


class TestModelValidator:
    """Tests for the ModelValidator class."""

    @pytest.fixture
    def validator(self):
        """Create a ModelValidator instance."""
        return ModelValidator()

    def test_valid_document_passes(self, validator, document):
        """The exported example validates."""
        result = validator.validate(document)
        assert result.is_valid is True
        assert result.error_message == ""

    def test_non_object_fails(self, validator):
        """A JSON list is not a config."""
        result = validator.validate([1, 2])
        assert result.error_code == "MISSING_FIELD"

    @pytest.mark.parametrize("field", ["dims", "H_A", "H_AB", "H_B", "dissipator_A"])
    def test_missing_field(self, validator, document, field):
        """Every required field is checked."""
        del document[field]
        result = validator.validate(document)
        assert result.is_valid is False
        assert result.error_code == "MISSING_FIELD"
        assert field in result.error_message

    def test_missing_rates(self, validator, document):
        """Either gamma or gamma_grid is needed."""
        del document["gamma"]
        del document["gamma_grid"]
        assert validator.validate(document).error_code == "MISSING_FIELD"

    @pytest.mark.parametrize("value", [0, -1, 2.5, True, "2"])
    def test_bad_dims(self, validator, document, value):
        """Dimensions are positive integers."""
        document["dims"]["d_A"] = value
        assert validator.validate(document).error_code == "BAD_DIMS"

    def test_wrong_matrix_shape(self, validator, document):
        """H_AB must be (d_A d_B)×(d_A d_B)."""
        document["H_AB"] = document["H_A"]
        result = validator.validate(document)
        assert result.error_code == "BAD_MATRIX"
        assert "H_AB" in result.error_message

    def test_non_finite_entry(self, validator, document):
        """NaN entries are rejected."""
        document["H_B"][0][0] = [float("nan"), 0.0]
        assert validator.validate(document).error_code == "BAD_MATRIX"

    def test_non_hermitian(self, validator, document):
        """Hamiltonians must be self-adjoint."""
        document["H_A"][0][1] = [1.0, 0.0]
        assert validator.validate(document).error_code == "NON_HERMITIAN"

    def test_bad_jump_shape(self, validator, document):
        """Jumps act on A."""
        document["dissipator_A"]["jumps"].append(document["H_AB"])
        result = validator.validate(document)
        assert result.error_code == "BAD_MATRIX"
        assert "jump 2" in result.error_message

    @pytest.mark.parametrize("gamma", [0, -3.0, float("inf"), "10"])
    def test_bad_gamma(self, validator, document, gamma):
        """γ is positive and finite."""
        document["gamma"] = gamma
        assert validator.validate(document).error_code == "BAD_GAMMA"

    @pytest.mark.parametrize("grid", [[10.0, 10.0, 30.0], [30.0, 10.0], [10.0, -1.0], "10"])
    def test_bad_gamma_grid(self, validator, document, grid):
        """The grid is positive and strictly increasing."""
        document["gamma_grid"] = grid
        assert validator.validate(document).error_code == "BAD_GAMMA_GRID"

    def test_unknown_tolerance(self, validator, document):
        """Only known tolerance keys may be overridden."""
        document["tolerances"] = {"exactness": 1e-9}
        assert validator.validate(document).error_code == "BAD_TOLERANCE"

    def test_nonpositive_tolerance(self, validator, document):
        """Tolerances are positive."""
        document["tolerances"] = {"exact": 0.0}
        assert validator.validate(document).error_code == "BAD_TOLERANCE"

    def test_validation_does_not_mutate(self, validator, document):
        """The input document is left untouched."""
        before = copy.deepcopy(document)
        validator.validate(document)
        assert document == before


class TestValidationResult:
    """Tests for the ValidationResult dataclass."""

    def test_defaults(self):
        """A valid result has empty message and code."""
        result = ValidationResult(is_valid=True)
        assert result.error_message == ""
        assert result.error_code == ""
