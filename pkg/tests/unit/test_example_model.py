"""
Unit tests for the built-in two-qubit model.
"""

import math

import numpy as np
import pytest

from src.domain.example_model import (
    IDENTITY,
    SIGMA_1,
    SIGMA_2,
    SIGMA_3,
    build_counter_model,
    build_example_model,
    example_config,
    example_parameter,
    exact_denominator,
    expected_pi_a,
    expected_projected_eigenvalues,
    expected_sharp_mixing_time,
    jump_weights,
    ladder_operator,
    model_from_config,
    pauli_sum,
)
from src.domain.lindblad import analyze_spectrum
from src.domain.tensor_algebra import partial_trace_a, partial_trace_b
from src.domain.zeno_reduction import build_composite, effective_generator


class TestParameters:
    """Tests for t and the jump weights."""

    def test_parameter_is_tanh(self):
        """t = tanh(β/2)."""
        assert example_parameter(2.0) == pytest.approx(math.tanh(1.0))

    def test_infinite_beta_rejected(self):
        """β must be finite."""
        with pytest.raises(ValueError):
            example_parameter(float("inf"))

    @pytest.mark.parametrize("beta", [0.0, 0.5, 3.0])
    def test_weights_sum_to_one(self, beta):
        """s² + c² = 1 and s² − c² = t."""
        s_sq, c_sq = jump_weights(beta)
        assert s_sq + c_sq == pytest.approx(1.0)
        assert s_sq - c_sq == pytest.approx(example_parameter(beta))


class TestPauliHelpers:
    """Tests for the Pauli helpers."""

    def test_pauli_sum(self):
        """σ1 ⊗ σ2 with coefficient 2."""
        assert np.allclose(pauli_sum([(2.0, 1, 2)]), 2 * np.kron(SIGMA_1, SIGMA_2))

    def test_ladder_operator_lowers_sigma2(self):
        """[σ2, a] = −2a."""
        a = ladder_operator()
        assert np.allclose(SIGMA_2 @ a - a @ SIGMA_2, -2 * a)


class TestExampleConfig:
    """Tests for the example config document."""

    def test_sigma2_variant(self, t_param):
        """H_B = σ2 + tI without trace normalization."""
        config = example_config(1.0)
        assert np.allclose(config.h_b, SIGMA_2 + t_param * IDENTITY)
        assert config.normalize_trace is False

    def test_unknown_variant_rejected(self):
        """Only sigma2 and sigma3 exist."""
        with pytest.raises(ValueError):
            example_config(h_b_variant="sigma1")

    def test_model_from_config(self):
        """The lifted dissipator keeps every π_A ⊗ R fixed."""
        model = model_from_config(example_config(1.0))
        summary = analyze_spectrum(build_composite(model).d)
        assert model.dim_a == 2 and model.dim_b == 2
        assert summary.zero_multiplicity == 4
        assert not summary.is_ergodic

    def test_counter_model_changes_only_h_a(self, example_model):
        """H_A = σ3 + σ1, everything else as in the example."""
        counter = build_counter_model()
        assert np.allclose(counter.h_a.entries, SIGMA_3 + SIGMA_1)
        assert np.allclose(counter.h_ab.entries, example_model.h_ab.entries)
        assert np.allclose(counter.h_b.entries, example_model.h_b.entries)


class TestClosedForms:
    """Checks of the closed forms against direct numerics."""

    @pytest.mark.parametrize("gamma", [0.5, 2.0, 10.0])
    def test_projected_spectrum(self, example_zeno, gamma):
        """K_P + γ⁻¹D_P has eigenvalues 0, −1/γ and −(3 ± i√(16γ²−1))/(2γ)."""
        computed = np.linalg.eigvals(effective_generator(example_zeno, gamma, 1).matrix)
        for value in expected_projected_eigenvalues(gamma):
            assert np.min(np.abs(computed - value)) < 1e-9

    def test_exact_state_denominator(self):
        """Pauli coefficients of the exact state times 2γ⁴ + 23γ² + 64 are quartics in γ."""
        gammas = np.arange(1.0, 8.0)
        scaled = []
        for gamma in gammas:
            state = analyze_spectrum(build_composite(build_example_model(1.0, gamma)).l_gamma)
            rho = state.steady_state.entries
            scaled.append(
                [
                    np.trace(pauli_sum([(1.0, i, j)]) @ rho).real * exact_denominator(gamma)
                    for i in range(4)
                    for j in range(4)
                ]
            )
        scaled = np.array(scaled)
        for column in scaled.T:
            fit = np.polynomial.Polynomial.fit(gammas, column, 4)
            assert np.max(np.abs(fit(gammas) - column)) < 1e-6 * max(1.0, np.max(np.abs(column)))

    def test_sigma3_variant_has_product_steady_state(self, t_param):
        """With H_B = σ3 the exact steady state is π ⊗ π."""
        model = build_example_model(1.0, 5.0, h_b_variant="sigma3")
        state = analyze_spectrum(build_composite(model).l_gamma).steady_state
        pi = expected_pi_a(t_param)
        assert np.allclose(partial_trace_b(state).entries, pi, atol=1e-9)
        assert np.allclose(partial_trace_a(state).entries, pi, atol=1e-9)
        assert np.allclose(state.entries, np.kron(pi, pi), atol=1e-9)

    def test_sharp_mixing_time(self):
        """ln(1/ε)."""
        assert expected_sharp_mixing_time(0.2) == pytest.approx(math.log(5.0))
