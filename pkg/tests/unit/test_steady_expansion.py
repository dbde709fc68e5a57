"""
Unit tests for the steady-state expansion.
"""

import math

import numpy as np
import pytest

from src.domain.davies import davies_generator
from src.domain.errors import NonTracelessError, ParameterRangeError
from src.domain.example_model import (
    IDENTITY,
    build_counter_model,
    expected_hierarchy_coefficients,
    expected_n0,
    expected_n1,
)
from src.domain.models import Operator, SpaceTag
from src.domain.steady_expansion import (
    boundary_reduced_state_test,
    build_subspaces,
    decompose,
    estimate_convergence_radius,
    exact_steady_state,
    solve_hierarchy,
    truncation_positivity,
)
from src.domain.tensor_algebra import trace_norm
from src.domain.zeno_reduction import build_composite, build_zeno_objects


@pytest.fixture(scope="module")
def example_expansion(example_zeno):
    """Order-1 expansion of the example."""
    _, d_p_sharp = davies_generator(example_zeno)
    return solve_hierarchy(example_zeno, d_p_sharp, order=1)


class TestDecomposition:
    """Tests for the ran(K_P) ⊕ ker(K_P) splitting."""

    def test_reconstructs_traceless_operators(self, rng, example_zeno):
        """x = K_P V + D_P W for random traceless x."""
        basis = build_subspaces(example_zeno.k_p, example_zeno.d_p)
        space = example_zeno.h_p.space
        g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        x = Operator(space, g - np.trace(g) / 2 * IDENTITY)
        v, w = decompose(x, basis)
        rebuilt = example_zeno.k_p(v) + example_zeno.d_p(w)
        assert rebuilt.allclose(x, tol=1e-10)
        assert example_zeno.k_p(w).allclose(Operator.zeros(space), tol=1e-10)

    def test_subspace_dimensions(self, example_zeno):
        """For H_P = σ2: ran(K_P) has dimension 2, ker ∩ traceless has 1."""
        basis = build_subspaces(example_zeno.k_p, example_zeno.d_p)
        assert len(basis.v_basis) == 2
        assert len(basis.w_basis) == 1
        assert basis.c_v > 0 and basis.c_w > 0

    def test_traceful_input_rejected(self, example_zeno):
        """Only traceless operators can be decomposed."""
        basis = build_subspaces(example_zeno.k_p, example_zeno.d_p)
        with pytest.raises(NonTracelessError):
            decompose(Operator.identity(example_zeno.h_p.space), basis)


class TestHierarchy:
    """Closed forms of the example hierarchy."""

    def test_r_bar_is_maximally_mixed(self, example_expansion):
        """R̄ = ½I."""
        assert np.allclose(example_expansion.r_bar.entries, 0.5 * IDENTITY, atol=1e-10)

    def test_first_two_orders(self, example_expansion, t_param):
        """n̄_0 and n̄_1 match their Pauli expansions."""
        assert np.allclose(example_expansion.n_bar[0].entries, expected_n0(t_param), atol=1e-9)
        assert np.allclose(example_expansion.n_bar[1].entries, expected_n1(t_param), atol=1e-9)

    def test_coefficients(self, example_expansion, t_param):
        """V_0, W_0, V_1 and W_1."""
        expected = expected_hierarchy_coefficients(t_param)
        assert np.allclose(example_expansion.v_coefficients[0].entries, expected["V0"], atol=1e-9)
        assert np.allclose(example_expansion.w_coefficients[0].entries, expected["W0"], atol=1e-9)
        assert np.allclose(example_expansion.v_coefficients[1].entries, expected["V1"], atol=1e-9)
        assert np.allclose(example_expansion.w_coefficients[1].entries, expected["W1"], atol=1e-9)

    def test_orders_are_traceless(self, example_expansion):
        """Every correction n̄_k has zero trace."""
        for n_k in example_expansion.n_bar:
            assert n_k.trace() == pytest.approx(0.0, abs=1e-12)

    def test_truncated_state_has_unit_trace(self, example_expansion):
        """Truncations stay normalized."""
        state = example_expansion.truncated_state(10.0)
        assert state.trace() == pytest.approx(1.0)

    def test_truncation_beyond_computed_order_rejected(self, example_expansion):
        """Asking for n̄_2 from an order-1 expansion fails."""
        with pytest.raises(ValueError):
            example_expansion.truncated_state(10.0, order=2)

    def test_negative_order_rejected(self, example_zeno):
        """order must be nonnegative."""
        _, d_p_sharp = davies_generator(example_zeno)
        with pytest.raises(ParameterRangeError):
            solve_hierarchy(example_zeno, d_p_sharp, order=-1)

    def test_truncation_error_scaling(self, example_model, example_expansion):
        """The order-1 truncation error falls like γ⁻³."""
        errors = []
        for gamma in (10.0, 100.0):
            l_gamma = build_composite(example_model.with_gamma(gamma)).l_gamma
            exact = exact_steady_state(l_gamma)
            errors.append(trace_norm(example_expansion.truncated_state(gamma) - exact))
        assert errors[1] < errors[0] / 200

    def test_truncation_positive_at_large_gamma(self, example_expansion):
        """The truncated state is a state once γ is large."""
        assert truncation_positivity(example_expansion, 100.0) > 0

    def test_convergence_ratio(self, example_zeno, example_expansion):
        """The ratio test needs at least two orders."""
        _, d_p_sharp = davies_generator(example_zeno)
        order_zero = solve_hierarchy(example_zeno, d_p_sharp, order=0)
        assert math.isnan(estimate_convergence_radius(order_zero))
        assert estimate_convergence_radius(example_expansion) > 0


class TestBoundaryState:
    """Tests for the Tr_B n̄_0 criterion."""

    def test_example_commutes(self, example_model, example_expansion):
        """[π_A, K_A] = 0 and Tr_B n̄_0 = 0 for the example."""
        report = boundary_reduced_state_test(example_model, example_expansion)
        assert report.commutator_norm < 1e-9
        assert report.trb_n0_norm < 1e-9
        assert report.consistent

    def test_counter_model_both_nonzero(self):
        """With H_A = σ3 + σ1 both quantities are nonzero."""
        zeno = build_zeno_objects(build_counter_model())
        _, d_p_sharp = davies_generator(zeno)
        expansion = solve_hierarchy(zeno, d_p_sharp, order=0)
        report = boundary_reduced_state_test(zeno.model, expansion)
        assert report.commutator_norm > 1e-6
        assert report.trb_n0_norm > 1e-6
        assert report.consistent


class TestRandomHierarchy:
    """Residual checks on random models."""

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_residuals_small(self, random_model_factory, seed):
        """D n̄_k + K n̄_{k−1} vanishes at every order."""
        zeno = build_zeno_objects(random_model_factory(seed))
        _, d_p_sharp = davies_generator(zeno)
        expansion = solve_hierarchy(zeno, d_p_sharp, order=2)
        assert max(expansion.per_order_residuals) < 1e-7
        assert SpaceTag.composite(2, 2).matches(expansion.n_bar[2].space)

    @pytest.mark.parametrize("seed", [0, 3])
    def test_independent_of_subspace_basis(self, random_model_factory, seed):
        """Re-orthonormalizing the subspace bases leaves every n̄_k unchanged."""
        zeno = build_zeno_objects(random_model_factory(seed))
        _, d_p_sharp = davies_generator(zeno)
        reference = solve_hierarchy(zeno, d_p_sharp, order=2)
        for basis_seed in (11, 12):
            remixed = solve_hierarchy(zeno, d_p_sharp, order=2, basis_seed=basis_seed)
            for ours, theirs in zip(reference.n_bar, remixed.n_bar):
                assert ours.allclose(theirs, tol=1e-8)
