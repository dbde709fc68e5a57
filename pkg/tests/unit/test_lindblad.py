"""
Unit tests for Lindblad generators.
"""

import numpy as np
import pytest

from src.domain.errors import InvalidGeneratorError, NotErgodicError
from src.domain.example_model import SIGMA_2, SIGMA_MINUS, expected_pi_a
from src.domain.lindblad import (
    analyze_spectrum,
    build_dissipator,
    cptp_check,
    gks_conditional_cp_test,
    hamiltonian_generator,
    is_gns_detailed_balance,
    lindblad_generator,
    steady_state,
)
from src.domain.models import LindbladSpec, Operator, SpaceTag
from src.domain.tensor_algebra import expm

QUBIT = SpaceTag.on_a(2)


def random_operator(rng, d=2):
    return Operator(QUBIT, rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))


@pytest.fixture
def damping_spec():
    """Amplitude damping with jump σ₋."""
    return LindbladSpec.from_jumps(QUBIT, [Operator(QUBIT, SIGMA_MINUS)])


class TestGenerators:
    """Tests for generator construction."""

    def test_hamiltonian_generator_is_commutator(self, rng):
        """K(X) = −i[H, X]."""
        h = Operator(QUBIT, SIGMA_2)
        x = random_operator(rng)
        expected = (h @ x - x @ h) * -1j
        assert hamiltonian_generator(h)(x).allclose(expected)

    def test_dissipator_matches_formula(self, rng, damping_spec):
        """D(X) = 2LXL† − L†LX − XL†L."""
        l_op = damping_spec.jumps[0]
        x = random_operator(rng)
        ldl = l_op.dag() @ l_op
        expected = l_op @ x @ l_op.dag() * 2 - ldl @ x - x @ ldl
        assert build_dissipator(damping_spec)(x).allclose(expected)

    def test_dissipator_annihilates_trace(self, rng, damping_spec):
        """Tr D(X) = 0."""
        x = random_operator(rng)
        assert build_dissipator(damping_spec)(x).trace() == pytest.approx(0.0, abs=1e-12)

    def test_non_hermitian_hamiltonian_part_rejected(self):
        """K_L must be self-adjoint."""
        with pytest.raises(InvalidGeneratorError):
            LindbladSpec.from_jumps(QUBIT, [], Operator(QUBIT, SIGMA_MINUS))

    def test_lindblad_generator_sums_parts(self, rng, damping_spec):
        """L = K + D."""
        h = Operator(QUBIT, SIGMA_2)
        x = random_operator(rng)
        expected = hamiltonian_generator(h)(x) + build_dissipator(damping_spec)(x)
        assert lindblad_generator(h, damping_spec)(x).allclose(expected)


class TestStructuralTests:
    """Tests for the GKS and CPTP checks."""

    def test_dissipator_passes_gks(self, damping_spec):
        """A Lindblad form passes the conditional positivity test."""
        report = gks_conditional_cp_test(build_dissipator(damping_spec))
        assert report.is_lindblad
        assert report.is_trace_annihilating
        assert report.is_hermiticity_preserving

    def test_negated_dissipator_fails_gks(self, damping_spec):
        """−D is not a Lindblad generator."""
        report = gks_conditional_cp_test(-build_dissipator(damping_spec))
        assert not report.is_lindblad
        assert report.min_projected_choi_eigenvalue < 0

    def test_semigroup_is_cptp(self, damping_spec):
        """e^{tD} is a channel."""
        report = cptp_check(expm(build_dissipator(damping_spec), 0.3))
        assert report.is_cp and report.is_tp

    @pytest.mark.slow
    def test_random_specs_pass_gks(self):
        """A hundred random jump sets on C^2 and C^3 all give Lindblad generators."""
        for seed in range(100):
            rng = np.random.default_rng(seed)
            space = SpaceTag.on_b(2 + seed % 2)
            d = space.dim
            jumps = [
                Operator(space, rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
                for _ in range(1 + seed % 3)
            ]
            g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            spec = LindbladSpec.from_jumps(space, jumps, Operator(space, 0.5 * (g + g.conj().T)))
            report = gks_conditional_cp_test(build_dissipator(spec))
            assert report.is_lindblad, seed
            assert report.min_projected_choi_eigenvalue >= -1e-9, seed


class TestSpectrum:
    """Tests for spectral analysis and steady states."""

    def test_example_dissipator_spectrum(self, example_model, t_param):
        """D_A of the example has gap 1 and steady state π_A."""
        summary = analyze_spectrum(build_dissipator(example_model.dissipator_a))
        assert summary.is_ergodic
        assert summary.gap == pytest.approx(1.0)
        assert summary.zero_multiplicity == 1
        assert np.allclose(summary.steady_state.entries, expected_pi_a(t_param), atol=1e-10)

    def test_hamiltonian_alone_is_not_ergodic(self):
        """A pure commutator has a degenerate zero eigenvalue."""
        generator = hamiltonian_generator(Operator(QUBIT, SIGMA_2))
        summary = analyze_spectrum(generator)
        assert not summary.is_ergodic
        assert summary.notes
        with pytest.raises(NotErgodicError):
            steady_state(generator)

    def test_steady_state_is_a_state(self, damping_spec):
        """The steady state of amplitude damping is the ground state."""
        rho = steady_state(build_dissipator(damping_spec))
        assert rho.trace() == pytest.approx(1.0)
        assert np.allclose(rho.entries, np.diag([0.0, 1.0]), atol=1e-10)

    def test_thermal_damping_is_gns_symmetric(self, example_model, t_param):
        """The example dissipator satisfies detailed balance for π_A."""
        generator = build_dissipator(example_model.dissipator_a)
        pi_a = Operator(QUBIT, expected_pi_a(t_param))
        assert is_gns_detailed_balance(generator, pi_a)
