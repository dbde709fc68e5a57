"""
Unit tests for time evolution, gap scans and mixing times.
"""

import math

import numpy as np
import pytest

from src.domain.davies import davies_generator
from src.domain.dynamics import (
    fit_slope,
    geometric_decay_check,
    lipschitz_ratio,
    mixing_time,
    propagate,
    sample_states,
    stationary_distance,
    stationary_mixing_time,
    sup_total_variation,
    theorem_gap_scan,
    total_variation,
    tv_monotonicity_check,
    validate_gamma_grid,
)
from src.domain.errors import EpsilonRangeError, ParameterRangeError, ScanGridError
from src.domain.example_model import SIGMA_MINUS, expected_sharp_mixing_time
from src.domain.lindblad import build_dissipator
from src.domain.models import LindbladSpec, Operator, SpaceTag, TheoremTag
from src.domain.tensor_algebra import pure_density

QUBIT = SpaceTag.on_b(2)


@pytest.fixture(scope="module")
def d_p_sharp(example_zeno):
    """D_P♯ of the example."""
    return davies_generator(example_zeno)[1]


class TestGridAndFit:
    """Tests for rate grids and slope fits."""

    @pytest.mark.parametrize(
        "grid",
        [[10.0, 30.0], [10.0, 5.0, 30.0], [1.0, 10.0, 100.0], [[10.0, 30.0, 100.0]]],
    )
    def test_invalid_grids_rejected(self, grid):
        """Too short, unsorted, too small or not 1-D."""
        with pytest.raises(ScanGridError):
            validate_gamma_grid(grid)

    def test_valid_grid(self):
        """A sorted grid above 1 passes through."""
        assert np.allclose(validate_gamma_grid([2, 4, 8]), [2.0, 4.0, 8.0])

    def test_fit_slope_exact_power_law(self):
        """values = 3γ⁻² gives slope −2 with R² = 1."""
        gammas = np.array([10.0, 30.0, 100.0, 300.0])
        slope, r_squared = fit_slope(gammas, 3.0 * gammas**-2)
        assert slope == pytest.approx(-2.0)
        assert r_squared == pytest.approx(1.0)

    def test_fit_slope_needs_two_points(self):
        """Nonpositive values are dropped; fewer than two give NaN."""
        slope, _ = fit_slope([1.0, 2.0], [1.0, 0.0])
        assert math.isnan(slope)


class TestEvolution:
    """Tests for propagation and distances."""

    def test_orthogonal_states_are_distinguishable(self):
        """d_TV of orthogonal pure states is 1."""
        rho0 = pure_density([1, 0], QUBIT)
        rho1 = pure_density([0, 1], QUBIT)
        assert total_variation(rho0, rho1) == pytest.approx(1.0)

    def test_propagate_preserves_trace(self, d_p_sharp):
        """Evolved states keep unit trace."""
        rho0 = pure_density([1, 0], d_p_sharp.domain)
        for state in propagate(d_p_sharp, rho0, [0.0, 0.5, 2.0]):
            assert state.trace() == pytest.approx(1.0)

    def test_propagate_rejects_decreasing_times(self, d_p_sharp):
        """Time grids must not go backwards."""
        rho0 = pure_density([1, 0], d_p_sharp.domain)
        with pytest.raises(ParameterRangeError):
            propagate(d_p_sharp, rho0, [1.0, 0.5])

    def test_sample_states(self, rng):
        """count pure states plus the maximally mixed state."""
        states = sample_states(3, 5, rng)
        assert states.shape == (6, 3, 3)
        assert np.allclose(np.trace(states, axis1=1, axis2=2), 1.0)
        assert np.allclose(states[-1], np.eye(3) / 3)

    def test_tv_is_monotone(self, d_p_sharp):
        """Distances never grow under a Lindblad semigroup."""
        times = np.linspace(0.0, 3.0, 13)
        assert tv_monotonicity_check(d_p_sharp, times, pairs=4) <= 1e-10

    def test_reduced_state_is_lipschitz(self, example_model):
        """‖R(t) − R(s)‖₁ stays below 2‖H‖(t − s)."""
        rho0 = pure_density(np.eye(4)[0], example_model.dims)
        assert lipschitz_ratio(example_model, rho0, np.linspace(0.0, 1.0, 11)) <= 1.0 + 1e-9


class TestMixingTimes:
    """Tests for mixing-time estimates."""

    @pytest.mark.parametrize("epsilon", [0.0, 0.5, 0.7])
    def test_epsilon_range(self, d_p_sharp, epsilon):
        """ε must lie in (0, ½)."""
        with pytest.raises(EpsilonRangeError):
            mixing_time(d_p_sharp, epsilon)

    def test_sharp_mixing_time_closed_form(self, d_p_sharp):
        """t_mix(D_P♯, ε) = ln(1/ε)."""
        report = mixing_time(d_p_sharp, 0.2, restarts=6)
        assert report.is_finite
        assert report.t_mix == pytest.approx(expected_sharp_mixing_time(0.2), rel=1e-2)
        assert report.sup_at_t_mix <= 0.2 + 1e-9

    def test_stationary_time_bounds_mixing_time(self, d_p_sharp):
        """t_mix(ε) ≤ t_stat(ε)."""
        t_mix = mixing_time(d_p_sharp, 0.2, restarts=6).t_mix
        t_stat = stationary_mixing_time(d_p_sharp, 0.2, restarts=6).t_mix
        assert t_mix <= t_stat * (1 + 1e-2)

    def test_stationary_distance_of_pure_steady_state(self):
        """At t = 0 an orthogonal pure state sits at distance 2 from a pure steady state."""
        damping = build_dissipator(LindbladSpec.from_jumps(QUBIT, [Operator(QUBIT, SIGMA_MINUS)]))
        assert stationary_distance(damping, 0.0, restarts=4) == pytest.approx(2.0, abs=1e-8)
        assert stationary_distance(damping, 40.0, restarts=4) < 1e-6

    def test_stationary_distance_is_monotone(self, d_p_sharp):
        """sup ‖P_tρ − π‖₁ does not grow with t."""
        values = [stationary_distance(d_p_sharp, t, restarts=4) for t in (0.0, 0.5, 1.0, 2.0)]
        assert all(later <= earlier + 1e-7 for earlier, later in zip(values, values[1:]))
        assert values[0] <= 2.0 + 1e-12

    def test_stationary_distance_dominates_total_variation(self, d_p_sharp):
        """sup d_TV(P_tρ0, P_tρ1) ≤ sup ‖P_tρ − π‖₁."""
        tv = sup_total_variation(d_p_sharp, 0.7, 6, 0)[0]
        assert tv <= stationary_distance(d_p_sharp, 0.7, restarts=6) + 1e-7

    def test_infinite_when_horizon_too_short(self, d_p_sharp):
        """The flag is raised when t_max is reached."""
        report = mixing_time(d_p_sharp, 0.2, restarts=2, t_max=0.1)
        assert not report.is_finite
        assert math.isinf(report.t_mix)

    def test_geometric_decay(self, example_model):
        """sup d_TV at k·t_mix stays below 2(2ε)^k."""
        generator = build_dissipator(example_model.dissipator_a)
        report = mixing_time(generator, 0.25, restarts=6)
        rows = geometric_decay_check(generator, report, k_max=3)
        assert [row.k for row in rows] == [1, 2, 3]
        assert all(row.holds for row in rows)


class TestGapScans:
    """Tests for trajectory gap scans."""

    def test_leakage_scan_shape(self, example_zeno):
        """Series are recorded for every rate and the fit is reported."""
        report = theorem_gap_scan(
            example_zeno, TheoremTag.LEAKAGE, [10.0, 30.0, 100.0], points=8, samples=4
        )
        assert report.theorem_tag is TheoremTag.LEAKAGE
        assert len(report.series[report.primary]) == 3
        assert report.suprema().shape == (3,)
        assert math.isfinite(report.fitted_rate)
        rows = list(report.rows())
        assert all(len(row) == 4 for row in rows)

    def test_relaxation_uses_log_abscissa(self, example_zeno):
        """Relaxation is fitted against log(1+γ)/γ."""
        report = theorem_gap_scan(
            example_zeno, TheoremTag.RELAXATION, [10.0, 30.0, 100.0], points=8, samples=4
        )
        assert report.fit_abscissa == "log(1+gamma)/gamma"

    @pytest.mark.slow
    def test_leakage_slope(self, example_zeno):
        """The leakage gap falls like 1/γ."""
        report = theorem_gap_scan(
            example_zeno, TheoremTag.LEAKAGE, [10.0, 30.0, 100.0, 300.0], points=24, samples=8
        )
        assert report.fitted_rate == pytest.approx(-1.0, abs=0.2)

    def test_scan_rejects_short_grid(self, example_zeno):
        """Two rates cannot be fitted."""
        with pytest.raises(ScanGridError):
            theorem_gap_scan(example_zeno, TheoremTag.LEAKAGE, [10.0, 30.0])


class TestPureDensity:
    """Helper used throughout the mixing tests."""

    def test_pure_density_is_projector(self):
        """|ψ⟩⟨ψ| squares to itself."""
        rho = pure_density(np.array([1, 1j]) / math.sqrt(2), QUBIT)
        assert (rho @ rho).allclose(rho)
        assert isinstance(rho, Operator)
