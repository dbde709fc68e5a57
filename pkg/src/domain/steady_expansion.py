"""
Hilbert expansion of the steady state in powers of 1/γ.

The expansion is ρ̄_γ = π_A ⊗ R̄ + Σ_k γ^{−(k+1)} n̄_k with R̄ the steady
state of D_P♯. Each order solves D n̄_k = −K n̄_{k−1}; the free part on the
steady manifold is fixed by splitting traceless operators on B as
K_P V + D_P W with V ∈ ran(K_P) and W ∈ ker(K_P).
"""

import logging
import math
from typing import Optional

import numpy as np
import scipy.linalg

from src.domain.errors import (
    HierarchyResidualError,
    NonTracelessError,
    NotErgodicError,
    NumericalBreakdownError,
    ParameterRangeError,
)
from src.domain.lindblad import analyze_spectrum, hamiltonian_generator, steady_state
from src.domain.models import (
    BoundaryStateReport,
    CompositeModel,
    ExpansionResult,
    Operator,
    SpaceKind,
    SubspaceBasis,
    SuperOperator,
    Tolerances,
    ZenoObjects,
)
from src.domain.tensor_algebra import (
    commutator,
    norm_witness,
    partial_trace_a,
    partial_trace_b,
    tensor,
    trace_norm,
    unvec,
    vec,
)

logger = logging.getLogger(__name__)

RANK_TOL = 1e-10


def _columns(basis) -> np.ndarray:
    if not basis:
        return np.zeros((0, 0), dtype=np.complex128)
    return np.column_stack([vec(op)[:, 0] for op in basis])


def _remix(columns: np.ndarray, rng: Optional[np.random.Generator]) -> np.ndarray:
    """Same span, different orthonormal basis."""
    size = columns.shape[1]
    if rng is None or size < 2:
        return columns
    unitary, _ = np.linalg.qr(
        rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
    )
    return columns @ unitary


def build_subspaces(
    k_p: SuperOperator,
    d_p: SuperOperator,
    basis_rng: Optional[np.random.Generator] = None,
) -> SubspaceBasis:
    """
    Orthonormal bases of ran(K_P) and ker(K_P) ∩ traceless, and a solver
    for X = K_P V + D_P W on traceless X.

    basis_rng re-orthonormalizes every basis with a random unitary; the
    decomposition does not depend on it.

    Raises:
        NumericalBreakdownError: If the subspace dimensions do not add up
        NotErgodicError: If the decomposition map is singular
    """
    space = k_p.domain
    d = space.dim
    n = d * d
    identity = vec(Operator.identity(space))
    traceless = _remix(scipy.linalg.null_space(identity.conj().T), basis_rng)

    u, sigma, vh = scipy.linalg.svd(k_p.matrix)
    rank = int(np.count_nonzero(sigma > RANK_TOL * sigma[0])) if sigma[0] > 0 else 0
    range_cols = _remix(u[:, :rank], basis_rng)
    kernel = vh[rank:].conj().T
    kernel_traceless = _remix(
        kernel @ scipy.linalg.null_space(identity.conj().T @ kernel), basis_rng
    )

    dim_v, dim_w = range_cols.shape[1], kernel_traceless.shape[1]
    if dim_v + dim_w + 1 != n:
        raise NumericalBreakdownError(
            f"dim ran(K_P) + dim ker(K_P) + 1 = {dim_v + dim_w + 1}, expected {n}"
        )

    image = np.hstack([k_p.matrix @ range_cols, d_p.matrix @ kernel_traceless])
    system = traceless.conj().T @ image
    condition = float(np.linalg.cond(system)) if system.size else 1.0
    if not np.isfinite(condition) or condition > 1e12:
        raise NotErgodicError("D_P sharp", 0.0, "decomposition map is singular")

    inverse = np.linalg.inv(system) if system.size else system
    scale = math.sqrt(d)
    c_v = scale * float(np.linalg.norm(inverse[:dim_v], 2)) if dim_v else 0.0
    c_w = scale * float(np.linalg.norm(inverse[dim_v:], 2)) if dim_w else 0.0
    logger.debug(
        "subspaces: dim V=%d, dim W=%d, cond=%.3e, C_V=%.4g, C_W=%.4g",
        dim_v,
        dim_w,
        condition,
        c_v,
        c_w,
    )
    return SubspaceBasis(
        v_basis=tuple(unvec(c, space) for c in range_cols.T),
        w_basis=tuple(unvec(c, space) for c in kernel_traceless.T),
        traceless_basis=tuple(unvec(c, space) for c in traceless.T),
        lu_factors=scipy.linalg.lu_factor(system) if system.size else (system, np.zeros(0)),
        c_v=c_v,
        c_w=c_w,
        k_p=k_p,
        d_p=d_p,
    )


def decompose(x: Operator, basis: SubspaceBasis) -> tuple[Operator, Operator]:
    """
    Unique (V, W) with x = K_P V + D_P W.

    Raises:
        NonTracelessError: If x has nonzero trace
    """
    trace = x.trace()
    if abs(trace) > 1e-10 * max(1.0, trace_norm(x)):
        raise NonTracelessError(trace)
    space = x.space
    v = Operator.zeros(space)
    w = Operator.zeros(space)
    if not basis.traceless_basis:
        return v, w

    coords = _columns(basis.traceless_basis).conj().T @ vec(x)[:, 0]
    solution = scipy.linalg.lu_solve(basis.lu_factors, coords)
    dim_v = len(basis.v_basis)
    for coefficient, op in zip(solution[:dim_v], basis.v_basis):
        v = v + op * complex(coefficient)
    for coefficient, op in zip(solution[dim_v:], basis.w_basis):
        w = w + op * complex(coefficient)
    return v, w


def solve_hierarchy(
    zeno: ZenoObjects,
    d_p_sharp: SuperOperator,
    order: int = 1,
    tolerances: Optional[Tolerances] = None,
    seed: int = 0,
    basis_seed: Optional[int] = None,
) -> ExpansionResult:
    """
    Solve the expansion hierarchy up to n̄_order.

    m̃_0 = −SK(π_A ⊗ R̄) + π_A ⊗ V_0 with K_P V_0 = −D_P R̄; then for each
    k, F_k = Tr_A[K S K m̃_k] = D_P W_k + K_P V_{k+1},
    n̄_k = m̃_k + π_A ⊗ W_k and
    m̃_{k+1} = −SK m̃_k − SK(π_A ⊗ W_k) + π_A ⊗ V_{k+1}.

    Args:
        zeno: Reduction objects of the model
        d_p_sharp: Davies average of D_P
        order: Highest order K to compute
        tolerances: Tolerance set
        seed: Seed for the ‖SK‖ witness
        basis_seed: When set, the subspace bases are randomly re-orthonormalized

    Returns:
        ExpansionResult with per-order residuals ‖D n̄_k + K n̄_{k−1}‖₁

    Raises:
        NotErgodicError: If D_P♯ is not ergodic and gapped
        HierarchyResidualError: If an order fails its residual check
    """
    if order < 0:
        raise ParameterRangeError("order", order, "nonnegative")
    tolerances = tolerances or Tolerances()
    summary = analyze_spectrum(d_p_sharp, tolerances.cluster)
    if not summary.is_ergodic or not summary.is_gapped(tolerances.gap_threshold):
        raise NotErgodicError("D_P sharp", summary.gap, "; ".join(summary.notes))
    r_bar = summary.steady_state

    model = zeno.model
    pi_a = zeno.pi_a
    k = hamiltonian_generator(model.hamiltonian)
    d = zeno.projectors.d
    sk = zeno.s @ k
    basis_rng = None if basis_seed is None else np.random.default_rng(basis_seed)
    basis = build_subspaces(zeno.k_p, zeno.d_p, basis_rng)

    def lift(r: Operator) -> Operator:
        return tensor(pi_a, r)

    v_0, stray = decompose(-zeno.d_p(r_bar), basis)
    logger.debug("solvability remainder ‖W‖ = %.3e", trace_norm(stray))

    m_tilde = [-sk(lift(r_bar)) + lift(v_0)]
    v_coefficients = [v_0]
    w_coefficients: list[Operator] = []
    n_bar: list[Operator] = []
    residuals: list[float] = []
    previous = lift(r_bar)

    for step in range(order + 1):
        forcing = partial_trace_a(k(sk(m_tilde[step])))
        w_k, v_next = decompose(forcing, basis)
        n_k = m_tilde[step] + lift(w_k)

        driven = k(previous)
        residual = trace_norm(d(n_k) + driven)
        limit = 1e-8 * max(1.0, trace_norm(driven))
        logger.debug("order %d residual %.3e", step, residual)
        if residual > limit:
            raise HierarchyResidualError(step, residual, limit)

        n_bar.append(n_k)
        w_coefficients.append(w_k)
        v_coefficients.append(v_next)
        residuals.append(residual)
        if step < order:
            m_tilde.append(-sk(m_tilde[step]) - sk(lift(w_k)) + lift(v_next))
        previous = n_k
        logger.info("Hierarchy order %d solved", step)

    sk_bound = norm_witness(sk, restarts=8, seed=seed).value
    logger.debug("‖SK‖ witness %.6g", sk_bound)
    return ExpansionResult(
        r_bar=r_bar,
        pi_a=pi_a,
        n_bar=tuple(n_bar),
        m_tilde=tuple(m_tilde),
        v_coefficients=tuple(v_coefficients),
        w_coefficients=tuple(w_coefficients),
        per_order_residuals=tuple(residuals),
        sk_norm_bound=sk_bound,
    )


def exact_steady_state(l_gamma: SuperOperator, tol: float = 1e-8) -> Operator:
    """Null-space steady state of L_γ (Hermitized, clipped, unit trace)."""
    return steady_state(l_gamma, name="L_gamma", tol=tol)


def boundary_reduced_state_test(
    model: CompositeModel, expansion: ExpansionResult, tol: float = 1e-9
) -> BoundaryStateReport:
    """
    Compare ‖[π_A, K_A]‖₁ with ‖Tr_B n̄_0‖₁, K_A = H_A + Tr_B[(I ⊗ R̄) H_AB].

    The two vanish together; `consistent` records whether they do.
    """
    space_a = model.dims.factor(SpaceKind.A)
    weighted = tensor(Operator.identity(space_a), expansion.r_bar).entries @ model.h_ab.entries
    k_a = model.h_a + partial_trace_b(Operator(model.dims, weighted))
    commutator_norm = trace_norm(commutator(expansion.pi_a, k_a))
    trb_norm = trace_norm(partial_trace_b(expansion.n_bar[0]))
    consistent = (commutator_norm <= tol) == (trb_norm <= tol)
    if not consistent:
        logger.warning(
            "Boundary test mismatch: ‖[π_A, K_A]‖=%.3e, ‖Tr_B n0‖=%.3e",
            commutator_norm,
            trb_norm,
        )
    return BoundaryStateReport(
        k_a=k_a,
        commutator_norm=commutator_norm,
        trb_n0_norm=trb_norm,
        consistent=consistent,
    )


def estimate_convergence_radius(expansion: ExpansionResult) -> float:
    """
    Ratio-test estimate ‖n̄_{k+1}‖₁ / ‖n̄_k‖₁ at the highest computed order.

    The series converges for γ above the returned value; NaN when fewer than
    two orders are available.
    """
    norms = [trace_norm(n) for n in expansion.n_bar]
    if len(norms) < 2:
        return float("nan")
    if norms[-2] <= 1e-14:
        return 0.0
    return norms[-1] / norms[-2]


def truncation_positivity(
    expansion: ExpansionResult, gamma: float, order: Optional[int] = None
) -> float:
    """Smallest eigenvalue of the truncated state; negative values are logged."""
    state = expansion.truncated_state(gamma, order).hermitian_part()
    smallest = float(scipy.linalg.eigvalsh(state.entries)[0])
    if smallest < 0:
        logger.warning("Truncated state at gamma=%g is not positive (%.3e)", gamma, smallest)
    return smallest
