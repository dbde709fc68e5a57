"""
Zeno reduction of a boundary-driven model.

Builds L_γ = K + γD on H_A ⊗ H_B and the objects attached to the steady
manifold of D: the projectors P = V Tr_A and Q, the generalized inverse S,
the projected Hamiltonian H_P, the projected dissipator
D_P = −Tr_A K S K V with its explicit jump form, and the second-order
corrector B_P.
"""

import logging
from typing import Optional

import numpy as np
import scipy.integrate
import scipy.linalg

from src.domain.errors import (
    ExtractionUnavailableError,
    ModelInvariantError,
    NotErgodicError,
    NumericalBreakdownError,
    ParameterRangeError,
)
from src.domain.lindblad import (
    analyze_spectrum,
    build_dissipator,
    gks_conditional_cp_test,
    gns_inner,
    hamiltonian_generator,
    steady_state,
)
from src.domain.models import (
    CompositeGenerators,
    CompositeModel,
    DpLindbladForm,
    EnvelopeFit,
    LindbladSpec,
    Operator,
    Projectors,
    SpaceKind,
    SpaceTag,
    SuperOperator,
    Tolerances,
    ZenoObjects,
)
from src.domain.tensor_algebra import (
    embed_superop,
    expm,
    lift_a,
    norm_witness,
    partial_trace_a,
    partial_trace_b,
    tensor,
    trace_a_superop,
    unvec,
    vec,
)

logger = logging.getLogger(__name__)


def make_composite_model(
    h_a: Operator,
    h_ab: Operator,
    h_b: Operator,
    dissipator_a: LindbladSpec,
    gamma: float = 1.0,
    normalize_trace: bool = True,
    tolerances: Optional[Tolerances] = None,
) -> CompositeModel:
    """
    Build a composite model and check its invariants.

    With normalize_trace the full Hamiltonian is shifted to Tr H = 0 and
    re-split so that H_A, H_B are traceless and H_AB has vanishing partial
    traces. Every change is recorded on the model and logged.

    Args:
        h_a: Hamiltonian on A
        h_ab: Interaction on AB
        h_b: Hamiltonian on B
        dissipator_a: Lindblad data of D_A
        gamma: Dissipation strength
        normalize_trace: Re-center and re-split H
        tolerances: Tolerance set (defaults when omitted)

    Returns:
        Checked CompositeModel

    Raises:
        ModelInvariantError: If a Hamiltonian part is not self-adjoint, or
            H_AB has nonvanishing partial traces without normalization
        NotErgodicError: If D_A is not ergodic and gapped
    """
    tolerances = tolerances or Tolerances()
    dims = SpaceTag.composite(h_a.dim, h_b.dim)
    h_a = Operator(dims.factor(SpaceKind.A), h_a.entries)
    h_b = Operator(dims.factor(SpaceKind.B), h_b.entries)
    h_ab = Operator(dims, h_ab.entries)
    dissipator_a = LindbladSpec(
        dims.factor(SpaceKind.A),
        tuple(Operator(dims.factor(SpaceKind.A), j.entries) for j in dissipator_a.jumps),
        Operator(dims.factor(SpaceKind.A), dissipator_a.hamiltonian_part.entries),
    )

    for name, op in (("H_A", h_a), ("H_AB", h_ab), ("H_B", h_b)):
        defect = op.hermiticity_defect()
        if defect > tolerances.exact:
            raise ModelInvariantError(f"{name} self-adjoint", defect, tolerances.exact)

    adjustments: list[str] = []
    if normalize_trace:
        h_a, h_ab, h_b, adjustments = _recenter(h_a, h_ab, h_b, tolerances.exact)
        for note in adjustments:
            logger.warning("Hamiltonian adjusted: %s", note)

    model = CompositeModel(
        dims=dims,
        h_a=h_a,
        h_ab=h_ab,
        h_b=h_b,
        dissipator_a=dissipator_a,
        gamma=float(gamma),
        trace_normalized=normalize_trace,
        adjustments=tuple(adjustments),
    )
    check_model_invariants(model, tolerances)

    summary = analyze_spectrum(build_dissipator(dissipator_a), tolerances.cluster)
    if not summary.is_ergodic or not summary.is_gapped(tolerances.gap_threshold):
        raise NotErgodicError("D_A", summary.gap, "; ".join(summary.notes))
    logger.info("Model built: d_A=%d, d_B=%d, gamma=%g", dims.dim_a, dims.dim_b, gamma)
    return model


def _recenter(h_a: Operator, h_ab: Operator, h_b: Operator, tol: float):
    dims = h_ab.space
    d_a, d_b = dims.dim_a, dims.dim_b
    full = (
        tensor(h_a, Operator.identity(dims.factor(SpaceKind.B)))
        + h_ab
        + tensor(Operator.identity(dims.factor(SpaceKind.A)), h_b)
    )
    shift = full.trace().real / dims.dim
    centered = full - Operator.identity(dims) * shift
    new_a = partial_trace_b(centered) / d_b
    new_b = partial_trace_a(centered) / d_a
    new_ab = (
        centered
        - tensor(new_a, Operator.identity(dims.factor(SpaceKind.B)))
        - tensor(Operator.identity(dims.factor(SpaceKind.A)), new_b)
    )

    notes = []
    if abs(shift) > tol:
        notes.append(f"removed scalar {shift:.6g} from H")
    if new_a.distance(h_a) > tol:
        notes.append(f"H_A changed by {new_a.distance(h_a):.3e}")
    if new_b.distance(h_b) > tol:
        notes.append(f"H_B changed by {new_b.distance(h_b):.3e}")
    if new_ab.distance(h_ab) > tol:
        notes.append(f"H_AB changed by {new_ab.distance(h_ab):.3e}")
    return new_a, new_ab, new_b, notes


def check_model_invariants(model: CompositeModel, tolerances: Optional[Tolerances] = None) -> None:
    """
    Raise ModelInvariantError naming the first failing quantity.

    Tr H = 0 is only enforced for trace-normalized models; the partial
    traces of H_AB must always vanish.
    """
    tol = (tolerances or Tolerances()).exact
    if model.trace_normalized:
        trace = abs(model.hamiltonian.trace())
        if trace > tol * model.dims.dim:
            raise ModelInvariantError("Tr H = 0", trace, tol)
    trace_b = float(np.max(np.abs(partial_trace_b(model.h_ab).entries)))
    if trace_b > tol:
        raise ModelInvariantError("Tr_B H_AB = 0", trace_b, tol)
    trace_a = float(np.max(np.abs(partial_trace_a(model.h_ab).entries)))
    if trace_a > tol:
        raise ModelInvariantError("Tr_A H_AB = 0", trace_a, tol)


def build_composite(
    model: CompositeModel, tolerances: Optional[Tolerances] = None
) -> CompositeGenerators:
    """K = −i[H, ·], D = D_A ⊗ id_B and L_γ = K + γD."""
    check_model_invariants(model, tolerances)
    k = hamiltonian_generator(model.hamiltonian)
    d = lift_a(build_dissipator(model.dissipator_a), model.dims)
    return CompositeGenerators(k=k, d=d, l_gamma=k + d * model.gamma)


def build_projectors(
    model: CompositeModel, tolerances: Optional[Tolerances] = None
) -> Projectors:
    """
    π_A, P, Q and S for the model's dissipator.

    S_A = (D_A − P_A)⁻¹ Q_A is solved on A; since D − P = (D_A − P_A) ⊗ id_B,
    lifting gives S = (D − P)⁻¹ Q on AB.

    Raises:
        NotErgodicError: If D_A is not ergodic and gapped
    """
    tolerances = tolerances or Tolerances()
    space_a = model.dims.factor(SpaceKind.A)
    d_a = build_dissipator(model.dissipator_a)
    summary = analyze_spectrum(d_a, tolerances.cluster)
    if not summary.is_ergodic or not summary.is_gapped(tolerances.gap_threshold):
        raise NotErgodicError("D_A", summary.gap, "; ".join(summary.notes))
    pi_a = summary.steady_state

    p_a = SuperOperator(space_a, space_a, vec(pi_a) @ vec(Operator.identity(space_a)).conj().T)
    q_a = SuperOperator.identity(space_a) - p_a
    s_a = SuperOperator(space_a, space_a, scipy.linalg.solve((d_a - p_a).matrix, q_a.matrix))

    embed = embed_superop(pi_a, model.dims)
    trace_a = trace_a_superop(model.dims)
    p = embed @ trace_a
    q = SuperOperator.identity(model.dims) - p
    d = lift_a(d_a, model.dims)
    s = lift_a(s_a, model.dims)

    residual = max((s @ d).distance(q), (d @ s).distance(q))
    logger.debug("generalized inverse residual %.3e", residual)
    logger.info("Projectors built: gap(D_A)=%.6g", summary.gap)
    return Projectors(
        pi_a=pi_a,
        p=p,
        q=q,
        s=s,
        embed=embed,
        trace_a=trace_a,
        d=d,
        d_a=d_a,
        s_a=s_a,
        q_a=q_a,
        gap_a=summary.gap,
    )


def projected_hamiltonian(
    model: CompositeModel, projectors: Projectors, tolerances: Optional[Tolerances] = None
) -> tuple[Operator, SuperOperator]:
    """
    H_P = Tr_A[(π_A ⊗ I) H] and K_P = −i[H_P, ·].

    Raises:
        ModelInvariantError: If H_P is not self-adjoint
    """
    tol = (tolerances or Tolerances()).exact
    weighted = tensor(projectors.pi_a, Operator.identity(model.dims.factor(SpaceKind.B)))
    h_p = partial_trace_a(Operator(model.dims, weighted.entries @ model.hamiltonian.entries))
    defect = h_p.hermiticity_defect()
    if defect > tol:
        raise ModelInvariantError("H_P self-adjoint", defect, tol)
    h_p = h_p.hermitian_part()
    return h_p, hamiltonian_generator(h_p)


def projected_dissipator(
    model: CompositeModel, projectors: Projectors, tolerances: Optional[Tolerances] = None
) -> SuperOperator:
    """
    D_P = −Tr_A K S K V.

    Raises:
        NumericalBreakdownError: If D_P fails the Lindblad-form test
    """
    tolerances = tolerances or Tolerances()
    k = hamiltonian_generator(model.hamiltonian)
    d_p = -(projectors.trace_a @ k @ projectors.s @ k @ projectors.embed)
    report = gks_conditional_cp_test(d_p, tolerances.gks)
    if not report.is_lindblad:
        raise NumericalBreakdownError(
            f"D_P fails the GKS test: min projected Choi eigenvalue "
            f"{report.min_projected_choi_eigenvalue:.3e}"
        )
    return d_p


def second_order_corrector(model: CompositeModel, projectors: Projectors) -> SuperOperator:
    """B_P(R) = Tr_A[K(SKSK − S²KPK)(π_A ⊗ R)]."""
    k = hamiltonian_generator(model.hamiltonian)
    s, p = projectors.s, projectors.p
    inner = s @ k @ s @ k - s @ s @ k @ p @ k
    return projectors.trace_a @ k @ inner @ projectors.embed


def extract_dp_lindblad_form(
    model: CompositeModel,
    projectors: Projectors,
    d_p: SuperOperator,
    tolerances: Optional[Tolerances] = None,
    basis_rng: Optional[np.random.Generator] = None,
) -> DpLindbladForm:
    """
    Explicit jump operators and Hamiltonian part of D_P.

    Expands H = Σ_j X_j ⊗ G_j over the dual of an eigenbasis {Y_j} of D_A
    with Y_0 = π_A, forms M_jk = −Tr[X_k† S_A(X_j π_A)] and splits it into
    A = (M + M†)/2 and B = (M − M†)/2i. Jumps are √μ_ℓ Σ_j v_j G_j over the
    eigenpairs of A, shifted to be traceless; H_L = Σ_jk B_jk G_k†G_j plus
    the shift corrections.

    basis_rng rescales the eigenvectors Y_j, j ≥ 1, by random complex factors.
    A changes by congruence; the rebuilt dissipator does not.

    Raises:
        ExtractionUnavailableError: If the eigenbasis of D_A is ill-conditioned
        NumericalBreakdownError: If A has a negative eigenvalue or the rebuild fails
    """
    tolerances = tolerances or Tolerances()
    space_a = model.dims.factor(SpaceKind.A)
    space_b = model.dims.factor(SpaceKind.B)
    pi_a = projectors.pi_a

    eigenvalues, vectors = scipy.linalg.eig(projectors.d_a.matrix)
    zero = int(np.argmin(np.abs(eigenvalues)))
    order = [zero] + [i for i in range(len(eigenvalues)) if i != zero]
    eigenvalues = eigenvalues[order]
    y_matrix = vectors[:, order].copy()
    y_matrix[:, 0] = vec(pi_a)[:, 0]
    if basis_rng is not None:
        size = y_matrix.shape[1] - 1
        factors = basis_rng.uniform(0.5, 2.0, size) * np.exp(2j * np.pi * basis_rng.random(size))
        y_matrix[:, 1:] *= factors

    condition = float(np.linalg.cond(y_matrix))
    logger.debug("D_A eigenbasis condition number %.3e", condition)
    if not np.isfinite(condition) or condition > tolerances.condition_limit:
        raise ExtractionUnavailableError(
            f"D_A eigenvector matrix condition number {condition:.3e} exceeds "
            f"{tolerances.condition_limit:.1e}"
        )

    inverse = np.linalg.inv(y_matrix)
    y_basis = tuple(unvec(y_matrix[:, j], space_a) for j in range(y_matrix.shape[1]))
    x_basis = tuple(unvec(inverse[j].conj(), space_a) for j in range(inverse.shape[0]))

    h = model.hamiltonian
    eye_b = Operator.identity(space_b)
    g = tuple(
        partial_trace_a(Operator(model.dims, tensor(y.dag(), eye_b).entries @ h.entries))
        for y in y_basis
    )

    n = len(y_basis) - 1
    m = np.zeros((n, n), dtype=np.complex128)
    for j in range(1, n + 1):
        image = projectors.s_a(x_basis[j] @ pi_a)
        for k in range(1, n + 1):
            m[j - 1, k - 1] = -np.vdot(x_basis[k].entries, image.entries)
    a_mat = 0.5 * (m + m.conj().T)
    b_mat = (m - m.conj().T) / 2j

    mu, v = scipy.linalg.eigh(a_mat)
    if mu.size and mu[0] < -1e-8:
        raise NumericalBreakdownError(f"A has negative eigenvalue {mu[0]:.3e}")
    mu = np.clip(mu, 0.0, None)

    h_l = np.zeros((space_b.dim, space_b.dim), dtype=np.complex128)
    for j in range(n):
        for k in range(n):
            h_l += b_mat[j, k] * (g[k + 1].dag() @ g[j + 1]).entries

    jumps = []
    jump_floor = 1e-12 * max(1.0, float(np.max(np.abs(h.entries))))
    for ell in range(n):
        jump = sum(
            (g[j + 1].entries * v[j, ell] for j in range(n)),
            np.zeros_like(h_l),
        ) * np.sqrt(mu[ell])
        shift = np.trace(jump) / space_b.dim
        jump = jump - shift * np.eye(space_b.dim)
        h_l += 1j * (np.conj(shift) * jump - shift * jump.conj().T)
        if np.linalg.norm(jump) > jump_floor:
            jumps.append(Operator(space_b, jump))

    spec = LindbladSpec(space_b, tuple(jumps), Operator(space_b, h_l).hermitian_part())
    rebuild_error = build_dissipator(spec).distance(d_p)
    logger.debug("D_P rebuild error %.3e with %d jumps", rebuild_error, len(jumps))
    if rebuild_error > 1e-8 * max(1.0, float(np.max(np.abs(d_p.matrix)))):
        raise NumericalBreakdownError(f"Jump form rebuilds D_P with error {rebuild_error:.3e}")

    return DpLindbladForm(
        y_basis=y_basis,
        x_basis=x_basis,
        eigenvalues=eigenvalues[1:],
        g_coefficients=g,
        m=m,
        a_mat=a_mat,
        b_mat=b_mat,
        spec=spec,
        rebuild_error=rebuild_error,
        condition_number=condition,
    )


def build_zeno_objects(
    model: CompositeModel, tolerances: Optional[Tolerances] = None
) -> ZenoObjects:
    """
    Run the whole reduction for a model.

    The explicit jump form is attached when D_A is diagonalizable; otherwise
    a warning is logged and only the superoperator D_P is available.
    """
    tolerances = tolerances or Tolerances()
    projectors = build_projectors(model, tolerances)
    h_p, k_p = projected_hamiltonian(model, projectors, tolerances)
    d_p = projected_dissipator(model, projectors, tolerances)
    b_p = second_order_corrector(model, projectors)
    try:
        extraction = extract_dp_lindblad_form(model, projectors, d_p, tolerances)
    except ExtractionUnavailableError as e:
        logger.warning("Jump extraction skipped: %s", e)
        extraction = None
    logger.info("Zeno objects built")
    return ZenoObjects(
        model=model,
        projectors=projectors,
        h_p=h_p,
        k_p=k_p,
        d_p=d_p,
        b_p=b_p,
        extraction=extraction,
    )


def effective_generator(zeno: ZenoObjects, gamma: float, order: int = 1) -> SuperOperator:
    """
    Reduced generator on B.

    order 0: K_P; order 1: K_P + γ⁻¹D_P; order 2: adds γ⁻²B_P.
    """
    if order not in (0, 1, 2):
        raise ParameterRangeError("order", order, "0, 1 or 2")
    generator = zeno.k_p
    if order >= 1:
        generator = generator + zeno.d_p / gamma
    if order == 2:
        generator = generator + zeno.b_p / gamma**2
    return generator


def projected_steady_state(zeno: ZenoObjects, gamma: float) -> Operator:
    """Steady state R̄_γ of K_P + γ⁻¹D_P."""
    return steady_state(effective_generator(zeno, gamma, 1), name="L_P,gamma")


def generalized_inverse_quadrature(
    d: SuperOperator, q: SuperOperator, horizon: float
) -> SuperOperator:
    """−∫₀^T e^{tD} Q dt by adaptive quadrature."""
    shape = d.matrix.shape

    def integrand(t: float) -> np.ndarray:
        value = scipy.linalg.expm(t * d.matrix) @ q.matrix
        return np.concatenate([value.real.ravel(), value.imag.ravel()])

    result, _ = scipy.integrate.quad_vec(integrand, 0.0, horizon, epsabs=1e-13, epsrel=1e-11)
    half = result.size // 2
    integral = (result[:half] + 1j * result[half:]).reshape(shape)
    return SuperOperator(d.domain, d.codomain, -integral)


def gns_dissipativity(projectors: Projectors, z: Operator) -> float:
    """⟨S_A†Z, Q_A†Z⟩_π + ⟨Q_A†Z, S_A†Z⟩_π; nonpositive for every Z."""
    s_z = projectors.s_a.adjoint()(z)
    q_z = projectors.q_a.adjoint()(z)
    pi = projectors.pi_a
    return float((gns_inner(s_z, q_z, pi) + gns_inner(q_z, s_z, pi)).real)


def decay_envelope(
    projectors: Projectors, times, restarts: int = 16, seed: int = 0
) -> EnvelopeFit:
    """
    Fit C in ‖e^{tD}Q‖ ≤ C e^{−ta/2} from Hermitian-restricted witnesses.

    a is the gap of D_A; C is the smallest constant covering every sample.
    """
    times = np.asarray(times, dtype=float)
    rate = 0.5 * projectors.gap_a
    norms = np.array(
        [
            norm_witness(
                expm(projectors.d, t) @ projectors.q,
                hermitian_restricted=True,
                restarts=restarts,
                seed=seed,
            ).value
            for t in times
        ]
    )
    constant = float(np.max(norms * np.exp(rate * times)))
    logger.debug("decay envelope C=%.4g at rate %.4g", constant, rate)
    return EnvelopeFit(constant=constant, rate=rate, times=times, norms=norms)
