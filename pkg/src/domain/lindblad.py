"""
Lindblad generators: construction, structural tests and spectral analysis.
"""

import logging

import numpy as np
import scipy.linalg

from src.domain.errors import NotErgodicError, SpaceMismatchError
from src.domain.models import (
    CptpReport,
    GksReport,
    LindbladSpec,
    Operator,
    SpectralSummary,
    SuperOperator,
)
from src.domain.tensor_algebra import choi_matrix, unvec

logger = logging.getLogger(__name__)

# Clipping window for steady-state eigenvalues
PSD_CLIP = 1e-10


def hamiltonian_generator(h: Operator) -> SuperOperator:
    """K = −i[H, ·]."""
    eye = np.eye(h.dim)
    matrix = -1j * (np.kron(eye, h.entries) - np.kron(h.entries.T, eye))
    return SuperOperator(h.space, h.space, matrix)


def build_dissipator(spec: LindbladSpec) -> SuperOperator:
    """
    Superoperator of Σ_j (2 L_j X L_j† − L_j†L_j X − X L_j†L_j) − i[K_L, X].

    Args:
        spec: Jumps and Hamiltonian part on a single space

    Returns:
        Trace-annihilating, Hermiticity-preserving generator
    """
    d = spec.space.dim
    eye = np.eye(d)
    matrix = hamiltonian_generator(spec.hamiltonian_part).matrix.copy()
    for jump in spec.jumps:
        l_op = jump.entries
        ldl = l_op.conj().T @ l_op
        matrix += 2.0 * np.kron(l_op.conj(), l_op) - np.kron(eye, ldl) - np.kron(ldl.T, eye)
    return SuperOperator(spec.space, spec.space, matrix)


def lindblad_generator(hamiltonian: Operator, spec: LindbladSpec) -> SuperOperator:
    """−i[H, ·] + D for a dissipator spec on the same space."""
    if not hamiltonian.space.matches(spec.space):
        raise SpaceMismatchError(f"H on {hamiltonian.space}, dissipator on {spec.space}")
    return hamiltonian_generator(hamiltonian) + build_dissipator(spec)


def _require_square(t: SuperOperator) -> None:
    if not t.is_square:
        raise SpaceMismatchError(f"Expected a square superoperator, got {t!r}")


def _trace_row(d_out: int) -> np.ndarray:
    # Tr X = vec(I)† vec(X)
    return np.eye(d_out).reshape(-1, order="F")


def gks_conditional_cp_test(generator: SuperOperator, tol: float = 1e-9) -> GksReport:
    """
    Test whether a superoperator generates a CPTP semigroup.

    The Choi matrix must be Hermitian, the map trace-annihilating, and the
    Choi matrix positive on the complement of the maximally entangled vector.
    """
    _require_square(generator)
    d = generator.domain.dim
    choi = choi_matrix(generator)
    scale = max(1.0, float(np.max(np.abs(choi))))

    hermiticity = float(np.max(np.abs(choi - choi.conj().T)))
    trace_defect = float(np.max(np.abs(_trace_row(d) @ generator.matrix)))

    omega = np.eye(d).reshape(-1, 1)
    complement = scipy.linalg.null_space(omega.conj().T)
    projected = complement.conj().T @ (0.5 * (choi + choi.conj().T)) @ complement
    min_eig = float(scipy.linalg.eigvalsh(projected)[0])

    is_hp = hermiticity <= tol * scale
    is_ta = trace_defect <= tol * scale
    logger.debug(
        "GKS: hermiticity %.2e, trace %.2e, min projected Choi %.3e",
        hermiticity,
        trace_defect,
        min_eig,
    )
    return GksReport(
        is_hermiticity_preserving=is_hp,
        is_trace_annihilating=is_ta,
        min_projected_choi_eigenvalue=min_eig,
        is_lindblad=is_hp and is_ta and min_eig >= -tol * scale,
    )


def cptp_check(channel: SuperOperator, tol: float = 1e-9) -> CptpReport:
    """Choi positivity and trace preservation of a map (rectangular maps allowed)."""
    choi = choi_matrix(channel)
    hermitian = 0.5 * (choi + choi.conj().T)
    min_eig = float(scipy.linalg.eigvalsh(hermitian)[0])
    hermiticity = float(np.max(np.abs(choi - choi.conj().T)))
    trace_out = _trace_row(channel.codomain.dim) @ channel.matrix
    trace_defect = float(np.max(np.abs(trace_out - _trace_row(channel.domain.dim))))
    return CptpReport(
        is_cp=min_eig >= -tol and hermiticity <= tol,
        is_tp=trace_defect <= tol,
        min_choi_eigenvalue=min_eig,
    )


def analyze_spectrum(generator: SuperOperator, tol: float = 1e-8) -> SpectralSummary:
    """
    Dense spectral analysis of a generator.

    Eigenvalues within tol·max(1, ‖L‖) of zero form the zero cluster. The
    steady state is taken from the null vector, Hermitized, clipped on
    [−1e-10, 0) and normalized to unit trace.

    Args:
        generator: Square superoperator
        tol: Relative clustering tolerance

    Returns:
        SpectralSummary; steady_state is set only when the generator is ergodic
    """
    _require_square(generator)
    matrix = generator.matrix
    threshold = tol * max(1.0, float(np.linalg.norm(matrix, 2)))
    eigenvalues = scipy.linalg.eigvals(matrix)
    eigenvalues = eigenvalues[np.argsort(-eigenvalues.real, kind="stable")]

    is_zero = np.abs(eigenvalues) < threshold
    nonzero = eigenvalues[~is_zero]
    zero_multiplicity = int(np.count_nonzero(is_zero))
    has_imaginary = bool(np.any(np.abs(nonzero.real) < threshold))
    gap = float(max(0.0, -np.max(nonzero.real))) if nonzero.size else 0.0
    is_ergodic = zero_multiplicity == 1 and not has_imaginary

    notes = []
    steady = None
    if is_ergodic:
        steady, note = _extract_steady_state(generator)
        if note:
            notes.append(note)
            is_ergodic = False
    else:
        if zero_multiplicity != 1:
            notes.append(f"zero eigenvalue has multiplicity {zero_multiplicity}")
        if has_imaginary:
            notes.append("purely imaginary eigenvalues present")

    logger.debug(
        "spectrum: gap %.6g, zero multiplicity %d, ergodic %s", gap, zero_multiplicity, is_ergodic
    )
    return SpectralSummary(
        eigenvalues=eigenvalues,
        gap=gap,
        zero_multiplicity=zero_multiplicity,
        is_ergodic=is_ergodic,
        has_imaginary_eigenvalues=has_imaginary,
        steady_state=steady,
        notes=tuple(notes),
    )


def _extract_steady_state(generator: SuperOperator):
    _, _, vh = scipy.linalg.svd(generator.matrix)
    candidate = unvec(vh[-1].conj(), generator.domain)
    trace = candidate.trace()
    if abs(trace) < 1e-12:
        return None, "null vector has zero trace"

    rho = (candidate / trace).hermitian_part().entries
    values, vectors = scipy.linalg.eigh(rho)
    if values[0] < -PSD_CLIP:
        return None, f"steady-state candidate not PSD (min eigenvalue {values[0]:.3e})"
    if values[0] < -1e-12:
        logger.warning("Clipping steady-state eigenvalue %.3e to zero", values[0])
    values = np.clip(values, 0.0, None)
    rho = (vectors * values) @ vectors.conj().T
    return Operator(generator.domain, rho / np.trace(rho).real), ""


def steady_state(generator: SuperOperator, name: str = "generator", tol: float = 1e-8) -> Operator:
    """
    Unique steady state of an ergodic generator.

    Raises:
        NotErgodicError: If the generator has no unique steady state
    """
    summary = analyze_spectrum(generator, tol)
    if not summary.is_ergodic:
        raise NotErgodicError(name, summary.gap, "; ".join(summary.notes))
    return summary.steady_state


def gns_inner(x: Operator, y: Operator, sigma: Operator) -> complex:
    """⟨X, Y⟩_σ = Tr[X† Y σ]."""
    return complex(np.trace(x.entries.conj().T @ y.entries @ sigma.entries))


def is_gns_detailed_balance(
    generator: SuperOperator, sigma: Operator, tol: float = 1e-10
) -> bool:
    """Whether the Heisenberg-picture generator is self-adjoint for ⟨·,·⟩_σ."""
    _require_square(generator)
    d = sigma.dim
    # ⟨X, Y⟩_σ = vec(X)† (σᵀ ⊗ I) vec(Y)
    gram = np.kron(sigma.entries.T, np.eye(d))
    heisenberg = generator.matrix.conj().T
    defect = np.max(np.abs(gram @ heisenberg - heisenberg.conj().T @ gram))
    scale = max(1.0, float(np.max(np.abs(heisenberg))))
    return bool(defect <= tol * scale)
