"""
Time evolution, trajectory-gap scans and mixing times.

Gap scans compare the full evolution e^{tL_γ} with its reductions over a
γ grid and fit the decay of the worst-case gap in γ. Suprema over states
are taken over a fixed sample of random pure states plus the maximally
mixed state. Mixing times use a monotone alternating ascent over pairs of
pure states and bisection in t.
"""

import logging
import math
from typing import Callable, Optional

import numpy as np
import scipy.linalg
import scipy.stats

from src.domain.davies import davies_generator
from src.domain.errors import (
    EpsilonRangeError,
    NotErgodicError,
    ParameterRangeError,
    ScanGridError,
)
from src.domain.lindblad import analyze_spectrum, steady_state
from src.domain.models import (
    CompositeModel,
    DecayCheckRow,
    GapSeries,
    MixingRatioRow,
    MixingRatioScan,
    MixingReport,
    Operator,
    SpaceTag,
    SuperOperator,
    TheoremTag,
    TrajectoryGapReport,
    ZenoObjects,
)
from src.domain.tensor_algebra import (
    expm,
    operator_norm,
    partial_trace_a,
    pure_density,
    random_pure_state,
    trace_norm,
)
from src.domain.zeno_reduction import build_composite, effective_generator

logger = logging.getLogger(__name__)

SCAN_POINTS = 64
SAMPLE_STATES = 32
COHERENT_HORIZON = 5.0
TRACKING_HORIZON = 1.0
ZENO_HORIZON = 5.0
INTERACTION_HORIZON = 2.0
MIXING_RESTARTS = 12
ASCENT_ITERATIONS = 200

PRIMARY_SERIES = {
    TheoremTag.LEAKAGE: "projected",
    TheoremTag.RELAXATION: "relaxation",
    TheoremTag.COHERENT: "coherent",
    TheoremTag.PROJECTED_TRACKING: "tracking",
    TheoremTag.ZENO_TRACKING: "zeno",
    TheoremTag.INTERACTION_REDUCED: "interaction",
    TheoremTag.INTERACTION_FULL: "interaction",
}


# Batched helpers: a stack of m operators is an (m, d, d) array; a stack of
# vectorized operators is an (d², m) array of columns.


def _vec_batch(ops: np.ndarray) -> np.ndarray:
    m = ops.shape[0]
    return ops.transpose(0, 2, 1).reshape(m, -1).T


def _unvec_batch(columns: np.ndarray, d: int) -> np.ndarray:
    m = columns.shape[1]
    return columns.T.reshape(m, d, d).transpose(0, 2, 1)


def _trace_norms(ops: np.ndarray) -> np.ndarray:
    return np.linalg.svd(ops, compute_uv=False).sum(axis=-1)


def _trace_a_batch(ops: np.ndarray, d_a: int, d_b: int) -> np.ndarray:
    return np.einsum("kaiaj->kij", ops.reshape(-1, d_a, d_b, d_a, d_b))


def _embed_batch(pi_a: np.ndarray, ops: np.ndarray) -> np.ndarray:
    d_a, d_b = pi_a.shape[0], ops.shape[1]
    return np.einsum("ab,kij->kaibj", pi_a, ops).reshape(-1, d_a * d_b, d_a * d_b)


def sample_states(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """count random pure states followed by the maximally mixed state."""
    vectors = [random_pure_state(dim, rng) for _ in range(count)]
    pure = [np.outer(psi, psi.conj()) for psi in vectors]
    return np.array(pure + [np.eye(dim) / dim], dtype=np.complex128)


def propagate(generator: SuperOperator, rho0: Operator, times) -> list[Operator]:
    """States e^{tL}ρ0 on an increasing time grid, stepping by increments."""
    states = []
    current, previous = rho0, 0.0
    for t in np.asarray(times, dtype=float):
        if t < previous:
            raise ParameterRangeError("time grid", list(times), "nondecreasing from t >= 0")
        if t > previous:
            current = expm(generator, t - previous)(current)
        states.append(current)
        previous = t
    return states


def total_variation(rho0: Operator, rho1: Operator) -> float:
    """½‖ρ0 − ρ1‖₁."""
    return 0.5 * trace_norm(rho0 - rho1)


def lipschitz_ratio(model: CompositeModel, rho0: Operator, times) -> float:
    """
    Largest ‖R(t) − R(s)‖₁ / (2‖H‖_∞ (t − s)) over consecutive grid times.

    R(t) = Tr_A e^{tL_γ}ρ0; the ratio stays below one.
    """
    times = np.asarray(times, dtype=float)
    generator = build_composite(model).l_gamma
    reduced = [partial_trace_a(state) for state in propagate(generator, rho0, times)]
    bound = 2.0 * operator_norm(model.hamiltonian)
    ratios = [
        trace_norm(b - a) / (bound * (t1 - t0))
        for a, b, t0, t1 in zip(reduced[:-1], reduced[1:], times[:-1], times[1:])
        if t1 > t0
    ]
    return float(max(ratios, default=0.0))


def validate_gamma_grid(gammas) -> np.ndarray:
    """
    Raises:
        ScanGridError: Unless the grid has at least three increasing rates above 1
    """
    grid = np.asarray(gammas, dtype=float)
    if grid.ndim != 1 or grid.size < 3:
        raise ScanGridError(f"Need at least three gamma values, got {grid.size}")
    if not np.all(np.diff(grid) > 0):
        raise ScanGridError("gamma grid must be strictly increasing")
    if grid[0] <= 1.0:
        raise ScanGridError("gamma values must exceed 1 so that t_gamma > 0")
    return grid


def fit_slope(abscissa, values) -> tuple[float, float]:
    """Least-squares slope and R² of log(values) against log(abscissa)."""
    x = np.asarray(abscissa, dtype=float)
    y = np.asarray(values, dtype=float)
    keep = (x > 0) & (y > 0)
    if np.count_nonzero(keep) < 2:
        return float("nan"), float("nan")
    fit = scipy.stats.linregress(np.log(x[keep]), np.log(y[keep]))
    return float(fit.slope), float(fit.rvalue**2)


def _window(tag: TheoremTag, gamma: float, gap: float) -> tuple[float, float]:
    t_gamma = 2.0 * math.log(gamma) / (gap * gamma)
    windows = {
        TheoremTag.LEAKAGE: (t_gamma / 4, 10.0 / gap),
        TheoremTag.RELAXATION: (t_gamma, 10.0 / gap),
        TheoremTag.COHERENT: (t_gamma / 4, COHERENT_HORIZON),
        TheoremTag.PROJECTED_TRACKING: (t_gamma, gamma * TRACKING_HORIZON),
        TheoremTag.ZENO_TRACKING: (t_gamma, ZENO_HORIZON),
        TheoremTag.INTERACTION_REDUCED: (0.01 * INTERACTION_HORIZON, INTERACTION_HORIZON),
        TheoremTag.INTERACTION_FULL: (0.01 * INTERACTION_HORIZON, INTERACTION_HORIZON),
    }
    return windows[tag]


def theorem_gap_scan(
    zeno: ZenoObjects,
    tag: TheoremTag,
    gamma_grid,
    d_p_sharp: Optional[SuperOperator] = None,
    points: int = SCAN_POINTS,
    samples: int = SAMPLE_STATES,
    seed: int = 0,
) -> TrajectoryGapReport:
    """
    Worst-case trace-norm gaps for one comparison over a γ grid.

    Args:
        zeno: Reduction objects of the model
        tag: Which comparison to evaluate
        gamma_grid: At least three increasing rates above 1
        d_p_sharp: Davies average of D_P (computed when needed and omitted)
        points: Geometric time-grid size per γ
        samples: Number of random pure initial states
        seed: Seed for the initial states

    Returns:
        TrajectoryGapReport with a log-log fit of the primary suprema
    """
    gammas = validate_gamma_grid(gamma_grid)
    if d_p_sharp is None and tag in (TheoremTag.INTERACTION_REDUCED, TheoremTag.INTERACTION_FULL):
        _, d_p_sharp = davies_generator(zeno)

    model = zeno.model
    d_a, d_b = model.dim_a, model.dim_b
    gap = zeno.projectors.gap_a
    pi_a = zeno.pi_a.entries
    rng = np.random.default_rng(seed)
    states_b = sample_states(d_b, samples, rng)
    states_ab = sample_states(d_a * d_b, samples, rng)

    series: dict[str, list[GapSeries]] = {}
    for gamma in gammas:
        low, high = _window(tag, gamma, gap)
        times = np.geomspace(low, high, points)
        context = _ScanContext(zeno, gamma, d_p_sharp, pi_a, states_b, states_ab)
        for name, values in context.evaluate(tag, times).items():
            series.setdefault(name, []).append(GapSeries(name, float(gamma), times, values))
        logger.info("Scan %s: gamma=%g done", tag.value, gamma)

    primary = PRIMARY_SERIES[tag]
    suprema = np.array([s.supremum for s in series[primary]])
    if tag is TheoremTag.RELAXATION:
        abscissa, label = np.log1p(gammas) / gammas, "log(1+gamma)/gamma"
    else:
        abscissa, label = gammas, "gamma"
    slope, r_squared = fit_slope(abscissa, suprema)
    logger.info("Scan %s: slope %.4f (R^2 %.4f)", tag.value, slope, r_squared)
    return TrajectoryGapReport(
        theorem_tag=tag,
        gammas=gammas,
        series={name: tuple(curves) for name, curves in series.items()},
        primary=primary,
        fitted_rate=slope,
        r_squared=r_squared,
        fit_abscissa=label,
    )


class _ScanContext:
    """Generators and sampled states at one γ."""

    def __init__(self, zeno, gamma, d_p_sharp, pi_a, states_b, states_ab):
        self.gamma = gamma
        self.d_a = zeno.model.dim_a
        self.d_b = zeno.model.dim_b
        self.full = build_composite(zeno.model.with_gamma(gamma)).l_gamma.matrix
        self.reduced = effective_generator(zeno, gamma, 1).matrix
        self.k_p = zeno.k_p.matrix
        self.q = zeno.q.matrix
        self.sharp = d_p_sharp.matrix if d_p_sharp is not None else None
        self.pi_a = pi_a
        self.states_b = states_b
        self.states_ab = states_ab
        self.cols_b = _vec_batch(states_b)
        self.cols_ab = _vec_batch(states_ab)
        self.cols_embedded = _vec_batch(_embed_batch(pi_a, states_b))
        self.r0_of_ab = _trace_a_batch(states_ab, self.d_a, self.d_b)

    def _sup(self, columns: np.ndarray, d: int) -> float:
        return float(np.max(_trace_norms(_unvec_batch(columns, d))))

    def evaluate(self, tag: TheoremTag, times: np.ndarray) -> dict[str, np.ndarray]:
        handler: Callable[[float], dict[str, float]] = {
            TheoremTag.LEAKAGE: self._leakage,
            TheoremTag.RELAXATION: self._relaxation,
            TheoremTag.COHERENT: self._coherent,
            TheoremTag.PROJECTED_TRACKING: self._projected_tracking,
            TheoremTag.ZENO_TRACKING: self._zeno_tracking,
            TheoremTag.INTERACTION_REDUCED: self._interaction_reduced,
            TheoremTag.INTERACTION_FULL: self._interaction_full,
        }[tag]
        rows = [handler(float(t)) for t in times]
        return {name: np.array([row[name] for row in rows]) for name in rows[0]}

    def _leakage(self, t: float) -> dict[str, float]:
        propagator = self.q @ scipy.linalg.expm(t * self.full)
        d = self.d_a * self.d_b
        return {
            "projected": self._sup(propagator @ self.cols_embedded, d),
            "unprojected": self._sup(propagator @ self.cols_ab, d),
        }

    def _relaxation(self, t: float) -> dict[str, float]:
        propagator = scipy.linalg.expm(t * self.full) @ self.q
        return {"relaxation": self._sup(propagator @ self.cols_ab, self.d_a * self.d_b)}

    def _coherent(self, t: float) -> dict[str, float]:
        d = self.d_a * self.d_b
        full = _unvec_batch(scipy.linalg.expm(t * self.full) @ self.cols_embedded, d)
        reduced = _unvec_batch(scipy.linalg.expm(t * self.reduced) @ self.cols_b, self.d_b)
        gap = _trace_a_batch(full, self.d_a, self.d_b) - reduced
        return {"coherent": float(np.max(_trace_norms(gap)))}

    def _tracking(self, t: float, generator: np.ndarray) -> float:
        full = _unvec_batch(scipy.linalg.expm(t * self.full) @ self.cols_ab, self.d_a * self.d_b)
        reduced = _unvec_batch(
            scipy.linalg.expm(t * generator) @ _vec_batch(self.r0_of_ab), self.d_b
        )
        return float(np.max(_trace_norms(full - _embed_batch(self.pi_a, reduced))))

    def _projected_tracking(self, t: float) -> dict[str, float]:
        return {"tracking": self._tracking(t, self.reduced)}

    def _zeno_tracking(self, t: float) -> dict[str, float]:
        return {"zeno": self._tracking(t, self.k_p)}

    def _interaction_reduced(self, tau: float) -> dict[str, float]:
        scaled = self.gamma * tau
        rotate = scipy.linalg.expm(-scaled * self.k_p)
        left = rotate @ scipy.linalg.expm(scaled * self.reduced) @ self.cols_b
        right = scipy.linalg.expm(tau * self.sharp) @ self.cols_b
        return {"interaction": self._sup(left - right, self.d_b)}

    def _interaction_full(self, tau: float) -> dict[str, float]:
        scaled = self.gamma * tau
        evolved = _unvec_batch(
            scipy.linalg.expm(scaled * self.full) @ self.cols_embedded, self.d_a * self.d_b
        )
        reduced = _vec_batch(_trace_a_batch(evolved, self.d_a, self.d_b))
        left = scipy.linalg.expm(-scaled * self.k_p) @ reduced
        right = scipy.linalg.expm(tau * self.sharp) @ self.cols_b
        return {"interaction": self._sup(left - right, self.d_b)}


# Mixing times


def _hermitian_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def _sign_operator(delta: np.ndarray) -> np.ndarray:
    values, vectors = scipy.linalg.eigh(_hermitian_part(delta))
    return (vectors * np.sign(values)) @ vectors.conj().T


class _PairAscent:
    """Alternating ascent for sup ½‖P_t(ρ0 − ρ1)‖₁ over pure ρ0, ρ1."""

    def __init__(self, propagator: np.ndarray, dim: int):
        self.propagator = propagator
        self.adjoint = propagator.conj().T
        self.dim = dim

    def _evolve(self, rho: np.ndarray) -> np.ndarray:
        return (self.propagator @ rho.T.reshape(-1)).reshape(self.dim, self.dim).T

    def _pullback(self, g: np.ndarray) -> np.ndarray:
        return (self.adjoint @ g.T.reshape(-1)).reshape(self.dim, self.dim).T

    def value(self, psi: np.ndarray, phi: np.ndarray) -> float:
        delta = self._evolve(np.outer(psi, psi.conj()) - np.outer(phi, phi.conj()))
        return 0.5 * float(np.sum(scipy.linalg.svdvals(_hermitian_part(delta))))

    def run(self, psi: np.ndarray, phi: np.ndarray, tol: float = 1e-12):
        value = self.value(psi, phi)
        for _ in range(ASCENT_ITERATIONS):
            delta = self._evolve(np.outer(psi, psi.conj()) - np.outer(phi, phi.conj()))
            pulled = _hermitian_part(self._pullback(_sign_operator(delta)))
            _, vectors = scipy.linalg.eigh(pulled)
            psi, phi = vectors[:, -1], vectors[:, 0]
            new_value = self.value(psi, phi)
            if new_value - value <= tol:
                value = max(value, new_value)
                break
            value = new_value
        return value, psi, phi


class _StationaryAscent(_PairAscent):
    """Alternating ascent for sup ‖P_tρ − π‖₁ over pure ρ."""

    def __init__(self, propagator: np.ndarray, dim: int, steady: np.ndarray):
        super().__init__(propagator, dim)
        self.steady = steady

    def value(self, psi: np.ndarray, phi: Optional[np.ndarray] = None) -> float:
        delta = self._evolve(np.outer(psi, psi.conj())) - self.steady
        return float(np.sum(scipy.linalg.svdvals(_hermitian_part(delta))))

    def run(self, psi: np.ndarray, phi: Optional[np.ndarray] = None, tol: float = 1e-12):
        value = self.value(psi)
        for _ in range(ASCENT_ITERATIONS):
            delta = self._evolve(np.outer(psi, psi.conj())) - self.steady
            pulled = _hermitian_part(self._pullback(_sign_operator(delta)))
            _, vectors = scipy.linalg.eigh(pulled)
            psi = vectors[:, -1]
            new_value = self.value(psi)
            if new_value - value <= tol:
                value = max(value, new_value)
                break
            value = new_value
        return value, psi, psi


def _best_of_restarts(ascent: _PairAscent, dim: int, restarts: int, seed: int, warm=None):
    rng = np.random.default_rng(seed)
    starts = [warm] if warm is not None else []
    starts += [
        (random_pure_state(dim, rng), random_pure_state(dim, rng)) for _ in range(restarts)
    ]
    best = (-1.0, None, None)
    for psi, phi in starts:
        result = ascent.run(psi, phi)
        if result[0] > best[0]:
            best = result
    return best


def sup_total_variation(
    generator: SuperOperator,
    t: float,
    restarts: int = MIXING_RESTARTS,
    seed: int = 0,
    warm=None,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Estimate sup over state pairs of d_TV(P_tρ0, P_tρ1) and the maximizing pure pair."""
    dim = generator.domain.dim
    ascent = _PairAscent(scipy.linalg.expm(t * generator.matrix), dim)
    return _best_of_restarts(ascent, dim, restarts, seed, warm)


def stationary_distance(
    generator: SuperOperator,
    t: float,
    steady: Optional[Operator] = None,
    restarts: int = MIXING_RESTARTS,
    seed: int = 0,
) -> float:
    """Estimate sup_ρ ‖P_tρ − π‖₁ for the steady state π."""
    if steady is None:
        steady = steady_state(generator)
    dim = generator.domain.dim
    ascent = _StationaryAscent(scipy.linalg.expm(t * generator.matrix), dim, steady.entries)
    return _best_of_restarts(ascent, dim, restarts, seed)[0]


def _locate(
    evaluate: Callable[[float], tuple],
    epsilon: float,
    t_start: float,
    t_max: float,
    rel_tol: float,
):
    """Bisection for the first t with evaluate(t)[0] <= epsilon on a monotone curve."""
    high = min(t_start, t_max)
    result = evaluate(high)
    low = 0.0
    while result[0] > epsilon:
        if high >= t_max:
            return math.inf, result
        low, high = high, min(2.0 * high, t_max)
        result = evaluate(high)
    best = result
    while high - low > rel_tol * high:
        middle = 0.5 * (low + high)
        candidate = evaluate(middle)
        if candidate[0] > epsilon:
            low = middle
        else:
            high, best = middle, candidate
    return high, best


def _horizon(generator: SuperOperator, t_max: Optional[float]) -> tuple[float, float]:
    gap = analyze_spectrum(generator).gap
    if t_max is None:
        t_max = 1e4 / gap if gap > 1e-12 else 1e4
    start = 1.0 / gap if gap > 1e-12 else 1.0
    return start, t_max


def mixing_time(
    generator: SuperOperator,
    epsilon: float,
    restarts: int = MIXING_RESTARTS,
    seed: int = 0,
    t_max: Optional[float] = None,
    rel_tol: float = 1e-3,
) -> MixingReport:
    """
    t_mix(L, ε) = inf{t : sup d_TV(P_tρ0, P_tρ1) ≤ ε}.

    The sup is non-increasing in t, so the time is found by doubling and
    bisection to relative precision rel_tol. When the sup still exceeds ε at
    t_max (default 10⁴/gap), the time is reported as infinite.

    Raises:
        EpsilonRangeError: If ε is outside (0, ½)
    """
    if not 0.0 < epsilon < 0.5:
        raise EpsilonRangeError(epsilon)
    start, t_max = _horizon(generator, t_max)
    space = generator.domain
    warm = None

    def evaluate(t: float):
        nonlocal warm
        value, psi, phi = sup_total_variation(generator, t, restarts, seed, warm)
        warm = (psi, phi)
        return value, psi, phi

    t_mix, (value, psi, phi) = _locate(evaluate, epsilon, start, t_max, rel_tol)
    if math.isinf(t_mix):
        logger.warning("Mixing time exceeds t_max=%.3g (sup d_TV=%.4f)", t_max, value)
    return MixingReport(
        epsilon=epsilon,
        t_mix=t_mix,
        is_finite=not math.isinf(t_mix),
        witness_pair=(pure_density(psi, space), pure_density(phi, space)),
        sup_at_t_mix=value,
        t_max=t_max,
    )


def stationary_mixing_time(
    generator: SuperOperator,
    epsilon: float,
    restarts: int = MIXING_RESTARTS,
    seed: int = 0,
    t_max: Optional[float] = None,
    rel_tol: float = 1e-3,
) -> MixingReport:
    """
    inf{t : sup_ρ ‖P_tρ − π‖₁ ≤ ε}.

    Satisfies t_mix(ε) ≤ t_stat(ε) and t_stat(2ε) ≤ t_mix(ε).

    Raises:
        EpsilonRangeError: If ε is outside (0, 1)
    """
    if not 0.0 < epsilon < 1.0:
        raise EpsilonRangeError(epsilon, upper=1.0)
    steady = steady_state(generator)
    start, t_max = _horizon(generator, t_max)
    space = generator.domain
    dim = space.dim

    def evaluate(t: float):
        ascent = _StationaryAscent(scipy.linalg.expm(t * generator.matrix), dim, steady.entries)
        return _best_of_restarts(ascent, dim, restarts, seed)

    t_stat, (value, psi, _) = _locate(evaluate, epsilon, start, t_max, rel_tol)
    return MixingReport(
        epsilon=epsilon,
        t_mix=t_stat,
        is_finite=not math.isinf(t_stat),
        witness_pair=(pure_density(psi, space), steady),
        sup_at_t_mix=value,
        t_max=t_max,
    )


def mixing_ratio_scan(
    zeno: ZenoObjects,
    epsilon: float,
    gamma_grid,
    d_p_sharp: Optional[SuperOperator] = None,
    seed: int = 0,
    continuity_step: float = 0.01,
) -> MixingRatioScan:
    """
    t_mix(L_γ, ε)/γ and t_mix(L_{P,γ}, ε)/γ against t_mix(D_P♯, ε).

    Also records the relative change of t_mix(D_P♯) when ε moves by
    ±continuity_step.

    Raises:
        NotErgodicError: If any of the mixing times is infinite
    """
    if d_p_sharp is None:
        _, d_p_sharp = davies_generator(zeno)
    reference_report = mixing_time(d_p_sharp, epsilon, seed=seed)
    if not reference_report.is_finite:
        raise NotErgodicError("D_P sharp", 0.0, "mixing time is infinite")
    reference = reference_report.t_mix

    rows = []
    for gamma in np.asarray(gamma_grid, dtype=float):
        generators = {
            "L_gamma": build_composite(zeno.model.with_gamma(gamma)).l_gamma,
            "L_P,gamma": effective_generator(zeno, gamma, 1),
        }
        ratios = {}
        for name, generator in generators.items():
            report = mixing_time(generator, epsilon, seed=seed)
            if not report.is_finite:
                raise NotErgodicError(f"{name} at gamma={gamma:g}", 0.0, "mixing time is infinite")
            ratios[name] = report.t_mix / gamma
        full, projected = ratios["L_gamma"], ratios["L_P,gamma"]
        rows.append(
            MixingRatioRow(
                gamma=float(gamma),
                full_ratio=full,
                projected_ratio=projected,
                full_deviation=abs(full - reference) / reference,
                projected_deviation=abs(projected - reference) / reference,
            )
        )
        logger.info("Mixing ratios at gamma=%g: %.4f, %.4f", gamma, full, projected)

    continuity = {}
    shifts = (("minus", epsilon - continuity_step), ("plus", epsilon + continuity_step))
    for label, shifted in shifts:
        if 0.0 < shifted < 0.5:
            t_shift = mixing_time(d_p_sharp, shifted, seed=seed).t_mix
            continuity[label] = abs(t_shift - reference) / reference
    return MixingRatioScan(
        epsilon=epsilon, reference=reference, rows=tuple(rows), continuity=continuity
    )


def geometric_decay_check(
    generator: SuperOperator,
    report: MixingReport,
    k_max: int = 3,
    seed: int = 0,
) -> list[DecayCheckRow]:
    """sup d_TV at k·t_mix against 2(2ε)^k for k = 1..k_max."""
    rows = []
    for k in range(1, k_max + 1):
        time = k * report.t_mix
        distance, _, _ = sup_total_variation(generator, time, seed=seed)
        bound = 2 * (2 * report.epsilon) ** k
        rows.append(DecayCheckRow(k=k, time=time, distance=distance, bound=bound))
    return rows


def tv_monotonicity_check(
    generator: SuperOperator, times, pairs: int = 8, seed: int = 0
) -> float:
    """
    Largest increase of d_TV(P_tρ0, P_tρ1) between consecutive grid times.

    Evaluated for random pure pairs; nonpositive up to rounding for a
    Lindblad generator.
    """
    rng = np.random.default_rng(seed)
    space: SpaceTag = generator.domain
    worst = -math.inf
    for _ in range(pairs):
        rho0 = pure_density(random_pure_state(space.dim, rng), space)
        rho1 = pure_density(random_pure_state(space.dim, rng), space)
        distances = [
            total_variation(a, b)
            for a, b in zip(propagate(generator, rho0, times), propagate(generator, rho1, times))
        ]
        worst = max(worst, float(np.max(np.diff(distances), initial=-math.inf)))
    return worst
