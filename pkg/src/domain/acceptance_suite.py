"""
Acceptance suite for the built-in two-qubit model.

Each check compares a computed quantity with its closed form or expected
scaling and yields one AcceptanceCheck row. The suite is t-parametric, so
it runs for any finite β.
"""

import logging
import math
from typing import Callable, Iterator, Optional

import numpy as np

from src.domain.davies import davies_generator, sharp_lindblad_form
from src.domain.dynamics import (
    fit_slope,
    geometric_decay_check,
    mixing_ratio_scan,
    mixing_time,
    theorem_gap_scan,
)
from src.domain.example_model import (
    IDENTITY,
    PAULIS,
    SHARP_EIGENVALUES,
    SIGMA_2,
    SIGMA_3,
    SIGMA_MINUS,
    SIGMA_PLUS,
    build_counter_model,
    build_example_model,
    example_parameter,
    exact_denominator,
    expected_dp_identity,
    expected_hierarchy_coefficients,
    expected_n0,
    expected_n1,
    expected_pi_a,
    expected_projected_eigenvalues,
    expected_projected_state,
    expected_sharp_mixing_time,
    expected_trace_a,
    expected_trace_b,
    jump_weights,
    ladder_operator,
)
from src.domain.lindblad import analyze_spectrum, build_dissipator, gks_conditional_cp_test
from src.domain.models import (
    AcceptanceCheck,
    AcceptanceReport,
    Operator,
    SpaceKind,
    TheoremTag,
    Tolerances,
)
from src.domain.steady_expansion import (
    boundary_reduced_state_test,
    exact_steady_state,
    solve_hierarchy,
)
from src.domain.tensor_algebra import partial_trace_a, partial_trace_b, trace_norm
from src.domain.zeno_reduction import (
    build_composite,
    build_projectors,
    build_zeno_objects,
    effective_generator,
)

logger = logging.getLogger(__name__)

FIXTURE_TOL = 1e-9
SLOPE_GRID = (10.0, 30.0, 100.0, 300.0)
MIXING_GRID = (10.0, 30.0, 100.0)
MIXING_EPSILON = 0.2
NEGATIVE_RESULT_GAMMAS = (1.0, 10.0, 100.0)
# Below this |t| the example is trivial: ρ̄_γ = I/4 and every n̄_k vanishes.
TRIVIAL_T = 1e-6

EXPECTED_SLOPES = {
    TheoremTag.LEAKAGE: -1.0,
    TheoremTag.COHERENT: -2.0,
    TheoremTag.PROJECTED_TRACKING: -1.0,
    TheoremTag.ZENO_TRACKING: -1.0,
    TheoremTag.INTERACTION_REDUCED: -1.0,
    TheoremTag.INTERACTION_FULL: -1.0,
}


def _gram(jumps) -> np.ndarray:
    """Σ vec(V)vec(V)†, invariant under unitary remixing of the jumps."""
    columns = [np.asarray(j).T.reshape(-1) for j in jumps]
    if not columns:
        return np.zeros((4, 4), dtype=np.complex128)
    stacked = np.column_stack(columns)
    return stacked @ stacked.conj().T


def _spectrum_distance(computed: np.ndarray, expected: np.ndarray) -> float:
    """Largest distance from an expected eigenvalue to the computed spectrum."""
    return float(max(np.min(np.abs(computed - value)) for value in expected))


class ExampleAcceptanceSuite:
    """
    Runs every closed-form and scaling check on the two-qubit model.

    Dynamics checks (scans and mixing times) dominate the run time and can
    be switched off.
    """

    def __init__(
        self,
        beta: float = 1.0,
        seed: int = 0,
        tolerances: Optional[Tolerances] = None,
        include_dynamics: bool = True,
    ):
        self._t = example_parameter(beta)
        self._beta = beta
        self._seed = seed
        self._tolerances = tolerances or Tolerances()
        self._include_dynamics = include_dynamics
        self._trivial = abs(self._t) < TRIVIAL_T

        self._model = build_example_model(beta, gamma=10.0)
        self._zeno = build_zeno_objects(self._model, self._tolerances)
        self._bohr, self._d_p_sharp = davies_generator(self._zeno, self._tolerances.cluster)
        self._expansion = solve_hierarchy(
            self._zeno, self._d_p_sharp, order=1, tolerances=self._tolerances, seed=seed
        )

    def run(self) -> AcceptanceReport:
        """Run all check groups and collect their rows."""
        groups: list[Callable[[], Iterator[AcceptanceCheck]]] = [
            self._projection_checks,
            self._jump_checks,
            self._hierarchy_checks,
            self._exact_state_checks,
            self._convergence_checks,
            self._negative_result_checks,
        ]
        if self._include_dynamics:
            groups += [self._scan_checks, self._mixing_checks]

        checks = []
        for group in groups:
            for check in group():
                level = logging.INFO if check.passed else logging.WARNING
                logger.log(level, "check %s: %s (%.3e)", check.name, check.passed, check.value)
                checks.append(check)
        return AcceptanceReport(beta=self._beta, checks=tuple(checks))

    def _within(
        self, name: str, value: float, tolerance: float, detail: str = ""
    ) -> AcceptanceCheck:
        value = float(value)
        passed = math.isfinite(value) and value <= tolerance
        return AcceptanceCheck(name, passed, value, tolerance, detail)

    def _close(self, name: str, actual, expected, tolerance: float = FIXTURE_TOL):
        deviation = float(np.max(np.abs(np.asarray(actual) - np.asarray(expected))))
        return self._within(name, deviation, tolerance, "max entry deviation")

    def _projection_checks(self) -> Iterator[AcceptanceCheck]:
        t = self._t
        zeno = self._zeno
        space_b = self._model.dims.factor(SpaceKind.B)

        yield self._close("h_p", zeno.h_p.entries, SIGMA_2)
        yield self._close("pi_a", zeno.pi_a.entries, expected_pi_a(t))
        yield self._within("gap_d_a", abs(zeno.projectors.gap_a - 1.0), FIXTURE_TOL)

        actions = [
            (IDENTITY, expected_dp_identity(t)),
            (SIGMA_MINUS, -SIGMA_MINUS),
            (SIGMA_PLUS, -SIGMA_PLUS),
            (SIGMA_3, -2 * SIGMA_3),
        ]
        deviation = max(
            float(np.max(np.abs(zeno.d_p(Operator(space_b, x)).entries - y)))
            for x, y in actions
        )
        yield self._within("d_p_actions", deviation, FIXTURE_TOL)

        deviation = max(
            float(
                np.max(
                    np.abs(
                        self._d_p_sharp(Operator(space_b, PAULIS[i])).entries
                        - value * PAULIS[i]
                    )
                )
            )
            for i, value in SHARP_EIGENVALUES.items()
        )
        yield self._within("d_p_sharp_actions", deviation, FIXTURE_TOL)
        yield self._close("r_bar", self._expansion.r_bar.entries, 0.5 * IDENTITY)

        for gamma in (2.0, 10.0):
            projected = effective_generator(zeno, gamma, 1)
            summary = analyze_spectrum(projected, self._tolerances.cluster)
            yield self._close(
                f"projected_state_gamma_{gamma:g}",
                summary.steady_state.entries,
                expected_projected_state(t, gamma),
            )
            yield self._within(
                f"projected_spectrum_gamma_{gamma:g}",
                _spectrum_distance(summary.eigenvalues, expected_projected_eigenvalues(gamma)),
                FIXTURE_TOL,
            )

    def _jump_checks(self) -> Iterator[AcceptanceCheck]:
        spec = self._zeno.dp_lindblad
        if spec is None:
            yield AcceptanceCheck("d_p_jumps", False, math.nan, FIXTURE_TOL, "extraction missing")
            return
        s_sq, c_sq = jump_weights(self._beta)
        s, c = math.sqrt(s_sq), math.sqrt(c_sq)
        a = ladder_operator()

        expected = _gram([s * SIGMA_MINUS, c * SIGMA_PLUS])
        yield self._close("d_p_jumps", _gram([j.entries for j in spec.jumps]), expected)

        sharp = sharp_lindblad_form(spec, self._bohr)
        sharp_expected = _gram(
            [
                0.5 * c * a,
                0.5 * c * a.conj().T,
                0.5j * c * SIGMA_2,
                0.5 * s * a,
                0.5 * s * a.conj().T,
                -0.5j * s * SIGMA_2,
            ]
        )
        sharp_gram = _gram([j.entries for j in sharp.jumps])
        yield self._close("d_p_sharp_jumps", sharp_gram, sharp_expected)
        rebuild = build_dissipator(sharp).distance(self._d_p_sharp)
        yield self._within("d_p_sharp_rebuild", rebuild, 1e-8)

    def _hierarchy_checks(self) -> Iterator[AcceptanceCheck]:
        t = self._t
        expansion = self._expansion
        yield self._close("n0", expansion.n_bar[0].entries, expected_n0(t), self._tolerances.exact)
        yield self._close("n1", expansion.n_bar[1].entries, expected_n1(t))

        coefficients = expected_hierarchy_coefficients(t)
        computed = {
            "V0": expansion.v_coefficients[0],
            "W0": expansion.w_coefficients[0],
            "V1": expansion.v_coefficients[1],
            "W1": expansion.w_coefficients[1],
        }
        for name, op in computed.items():
            yield self._close(f"coefficient_{name}", op.entries, coefficients[name])

        gamma = 10.0
        truncated = expansion.truncated_state(gamma, 1)
        yield self._close(
            "truncation_trace_a", partial_trace_a(truncated).entries, expected_trace_a(t, gamma)
        )
        yield self._close(
            "truncation_trace_b", partial_trace_b(truncated).entries, expected_trace_b(t, gamma)
        )

        report = boundary_reduced_state_test(self._model, expansion, FIXTURE_TOL)
        yield AcceptanceCheck(
            "boundary_example",
            report.consistent and report.commutator_norm <= FIXTURE_TOL,
            report.commutator_norm,
            FIXTURE_TOL,
            f"‖Tr_B n0‖={report.trb_n0_norm:.3e}",
        )

        counter = build_counter_model(self._beta)
        counter_zeno = build_zeno_objects(counter, self._tolerances)
        _, counter_sharp = davies_generator(counter_zeno, self._tolerances.cluster)
        counter_expansion = solve_hierarchy(
            counter_zeno, counter_sharp, order=0, tolerances=self._tolerances, seed=self._seed
        )
        report = boundary_reduced_state_test(counter, counter_expansion, FIXTURE_TOL)
        detached = self._trivial or report.commutator_norm > FIXTURE_TOL
        yield AcceptanceCheck(
            "boundary_counter_model",
            report.consistent and detached,
            report.commutator_norm,
            FIXTURE_TOL,
            f"‖Tr_B n0‖={report.trb_n0_norm:.3e}",
        )

    def _exact_state(self, gamma: float, model=None) -> Operator:
        model = (model or self._model).with_gamma(gamma)
        return exact_steady_state(build_composite(model, self._tolerances).l_gamma)

    def _exact_state_checks(self) -> Iterator[AcceptanceCheck]:
        gammas = np.arange(1.0, 8.0)
        scaled = []
        for gamma in gammas:
            state = self._exact_state(gamma).entries
            coefficients = [
                np.trace(np.kron(PAULIS[i], PAULIS[j]) @ state).real / 4
                for i in range(4)
                for j in range(4)
            ]
            scaled.append(np.array(coefficients) * exact_denominator(gamma))
        scaled = np.array(scaled)
        worst = 0.0
        for column in scaled.T:
            fit = np.polynomial.polynomial.Polynomial.fit(gammas, column, 4)
            residual = float(np.max(np.abs(fit(gammas) - column)))
            worst = max(worst, residual / max(1.0, float(np.max(np.abs(column)))))
        yield self._within("exact_denominator", worst, 1e-8, "degree-4 numerators")

        product = build_example_model(self._beta, h_b_variant="sigma3")
        pi_a = expected_pi_a(self._t)
        yield self._close(
            "product_steady_state",
            self._exact_state(10.0, product).entries,
            np.kron(pi_a, pi_a),
        )

    def _convergence_checks(self) -> Iterator[AcceptanceCheck]:
        gammas = np.array(SLOPE_GRID)
        exact = [self._exact_state(g) for g in gammas]
        fit_tol = self._tolerances.fit

        leading = [trace_norm(e - self._expansion.leading_state) for e in exact]
        if self._trivial:
            yield self._within("slope_leading", max(leading), FIXTURE_TOL, "t = 0: exact")
        else:
            slope, _ = fit_slope(gammas, leading)
            yield self._within(
                "slope_leading", abs(slope + 1.0), fit_tol, f"slope {slope:.3f}"
            )

        for order in (0, 1):
            errors = [
                trace_norm(self._expansion.truncated_state(g, order) - e)
                for g, e in zip(gammas, exact)
            ]
            if self._trivial:
                yield self._within(
                    f"slope_truncation_K{order}", max(errors), FIXTURE_TOL, "t = 0: exact"
                )
                continue
            slope, _ = fit_slope(gammas, errors)
            yield self._within(
                f"slope_truncation_K{order}",
                abs(slope + order + 2),
                0.25,
                f"slope {slope:.3f}",
            )

    def _negative_result_checks(self) -> Iterator[AcceptanceCheck]:
        for gamma in NEGATIVE_RESULT_GAMMAS:
            report = gks_conditional_cp_test(
                effective_generator(self._zeno, gamma, 2), self._tolerances.gks
            )
            value = report.min_projected_choi_eigenvalue
            yield AcceptanceCheck(
                f"second_order_not_lindblad_gamma_{gamma:g}",
                self._trivial or value < -1e-6,
                value,
                -1e-6,
                "t = 0: not asserted" if self._trivial else "min projected Choi eigenvalue",
            )

    def _scan_checks(self) -> Iterator[AcceptanceCheck]:
        fit_tol = self._tolerances.fit
        for tag, expected in EXPECTED_SLOPES.items():
            report = theorem_gap_scan(
                self._zeno, tag, SLOPE_GRID, d_p_sharp=self._d_p_sharp, seed=self._seed
            )
            tolerance = 0.25 if tag is TheoremTag.COHERENT else fit_tol
            yield self._within(
                f"scan_{tag.value}",
                abs(report.fitted_rate - expected),
                tolerance,
                f"slope {report.fitted_rate:.3f}",
            )

        report = theorem_gap_scan(self._zeno, TheoremTag.RELAXATION, SLOPE_GRID, seed=self._seed)
        yield AcceptanceCheck(
            "scan_relaxation_fit",
            report.r_squared >= 0.95,
            report.r_squared,
            0.95,
            f"slope {report.fitted_rate:.3f} against log(1+gamma)/gamma",
        )

    def _mixing_checks(self) -> Iterator[AcceptanceCheck]:
        scan = mixing_ratio_scan(
            self._zeno, MIXING_EPSILON, MIXING_GRID, d_p_sharp=self._d_p_sharp, seed=self._seed
        )
        expected = expected_sharp_mixing_time(MIXING_EPSILON)
        yield self._within(
            "mixing_reference",
            abs(scan.reference - expected) / expected,
            1e-2,
            f"t_mix(D_P sharp)={scan.reference:.4f}",
        )

        last = scan.rows[-1]
        yield self._within(
            "mixing_ratio_full", last.full_deviation, 0.10, f"gamma={last.gamma:g}"
        )
        yield self._within(
            "mixing_ratio_projected", last.projected_deviation, 0.10, f"gamma={last.gamma:g}"
        )
        growth = max(
            max(b.full_deviation - a.full_deviation, b.projected_deviation - a.projected_deviation)
            for a, b in zip(scan.rows, scan.rows[1:])
        )
        yield self._within("mixing_ratio_monotone", growth, 1e-3, "largest deviation increase")

        d_a = build_projectors(self._model, self._tolerances).d_a
        report = mixing_time(d_a, 0.25, seed=self._seed)
        rows = geometric_decay_check(d_a, report, k_max=3, seed=self._seed)
        slack = max(row.distance - row.bound for row in rows)
        yield AcceptanceCheck(
            "geometric_decay",
            report.is_finite and all(row.holds for row in rows),
            slack,
            1e-8,
            "max d_TV(P_kt) − 2(2ε)^k over k ≤ 3",
        )


def run_acceptance_suite(
    beta: float = 1.0,
    seed: int = 0,
    tolerances: Optional[Tolerances] = None,
    include_dynamics: bool = True,
) -> AcceptanceReport:
    return ExampleAcceptanceSuite(beta, seed, tolerances, include_dynamics).run()
