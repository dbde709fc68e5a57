"""
Dense operator and superoperator arithmetic.

Conventions:
- vec stacks columns: vec(X)[i + j·d] = X[i, j]
- X ↦ AXB has superoperator matrix Bᵀ ⊗ A
- Kronecker products put the A index outside the B index
"""

import logging
from functools import reduce
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from src.domain.errors import SpaceMismatchError
from src.domain.models import (
    NormWitness,
    Operator,
    SpaceKind,
    SpaceTag,
    SuperOperator,
)

logger = logging.getLogger(__name__)


def vec(x: Operator) -> np.ndarray:
    """Column-stacked (d², 1) vector of an operator."""
    return x.entries.T.reshape((-1, 1))


def unvec(vector: np.ndarray, space: SpaceTag) -> Operator:
    """
    Inverse of vec.

    Raises:
        SpaceMismatchError: If the vector length is not dim(space)²
    """
    vector = np.asarray(vector)
    d = space.dim
    if vector.size != d * d:
        raise SpaceMismatchError(f"Vector of size {vector.size} cannot be unvec'ed on {space}")
    return Operator(space, vector.reshape(d, d).T)


def tensor(x: Operator, y: Operator) -> Operator:
    """
    Kronecker product x ⊗ y.

    Raises:
        SpaceMismatchError: If x is not on A or y is not on B
    """
    if x.space.which is not SpaceKind.A or y.space.which is not SpaceKind.B:
        raise SpaceMismatchError(f"tensor expects (A, B) factors, got ({x.space}, {y.space})")
    return Operator(SpaceTag.composite(x.dim, y.dim), np.kron(x.entries, y.entries))


def _split(z: Operator) -> np.ndarray:
    if z.space.which is not SpaceKind.AB:
        raise SpaceMismatchError(f"Partial trace needs an operator on AB, got {z.space}")
    d_a, d_b = z.space.dim_a, z.space.dim_b
    return z.entries.reshape(d_a, d_b, d_a, d_b)


def partial_trace_a(z: Operator) -> Operator:
    """Tr_A Z as an operator on B."""
    return Operator(z.space.factor(SpaceKind.B), np.einsum("aiaj->ij", _split(z)))


def partial_trace_b(z: Operator) -> Operator:
    """Tr_B Z as an operator on A."""
    return Operator(z.space.factor(SpaceKind.A), np.einsum("aibi->ab", _split(z)))


def trace_norm(x: Operator) -> float:
    """Sum of singular values."""
    return float(np.sum(scipy.linalg.svdvals(x.entries)))


def operator_norm(x: Operator) -> float:
    """Largest singular value."""
    return float(scipy.linalg.svdvals(x.entries)[0])


def hs_inner(x: Operator, y: Operator) -> complex:
    """Hilbert–Schmidt inner product Tr[X†Y]."""
    if not x.space.matches(y.space):
        raise SpaceMismatchError(f"Inner product between {x.space} and {y.space}")
    return complex(np.vdot(x.entries, y.entries))


def commutator(x: Operator, y: Operator) -> Operator:
    return x @ y - y @ x


def superop_from_sandwich(
    left: np.ndarray, right: np.ndarray, domain: SpaceTag, codomain: SpaceTag
) -> SuperOperator:
    """Superoperator of X ↦ left · X · right (rectangular factors allowed)."""
    return SuperOperator(domain, codomain, np.kron(np.asarray(right).T, np.asarray(left)))


def sandwich(left: Operator, right: Operator) -> SuperOperator:
    """Superoperator of X ↦ left · X · right on a single space."""
    return superop_from_sandwich(left.entries, right.entries, left.space, left.space)


def superop_from_map(
    fn: Callable[[Operator], Operator], domain: SpaceTag, codomain: SpaceTag
) -> SuperOperator:
    """Tabulate a linear map on the matrix-unit basis."""
    d = domain.dim
    columns = []
    for k in range(d * d):
        unit = np.zeros(d * d, dtype=np.complex128)
        unit[k] = 1.0
        image = fn(unvec(unit, domain))
        if not image.space.matches(codomain):
            raise SpaceMismatchError(f"Map returned {image.space}, expected {codomain}")
        columns.append(vec(image)[:, 0])
    return SuperOperator(domain, codomain, np.column_stack(columns))


def compose(*superops: SuperOperator) -> SuperOperator:
    """compose(T1, T2, T3) = T1 ∘ T2 ∘ T3."""
    return reduce(lambda left, right: left @ right, superops)


def trace_a_superop(space: SpaceTag) -> SuperOperator:
    """Tr_A as a superoperator from AB to B."""
    composite = space.factor(SpaceKind.AB)
    return superop_from_map(partial_trace_a, composite, composite.factor(SpaceKind.B))


def embed_superop(pi_a: Operator, space: SpaceTag) -> SuperOperator:
    """V: R ↦ π_A ⊗ R from B to AB."""
    composite = space.factor(SpaceKind.AB)
    target_b = composite.factor(SpaceKind.B)

    def _embed(r: Operator) -> Operator:
        return Operator(composite, np.kron(pi_a.entries, r.entries))

    return superop_from_map(_embed, target_b, composite)


def lift_a(t_a: SuperOperator, space: SpaceTag) -> SuperOperator:
    """T_A ⊗ id_B on AB for a superoperator T_A on A."""
    composite = space.factor(SpaceKind.AB)
    d_a, d_b = composite.dim_a, composite.dim_b
    t4 = t_a.matrix.reshape(d_a, d_a, d_a, d_a)
    eye_b = np.eye(d_b)
    # row and column of the AB matrix split as (col_a, col_b, row_a, row_b)
    full = np.einsum("qpji,sr,tu->qtpsjuir", t4, eye_b, eye_b)
    return SuperOperator(composite, composite, full.reshape(d_a**2 * d_b**2, d_a**2 * d_b**2))


def expm(t: SuperOperator, s: float) -> SuperOperator:
    """
    e^{s·T} by scaling and squaring with a Padé approximant.

    Raises:
        SpaceMismatchError: If T is not square
    """
    if not t.is_square:
        raise SpaceMismatchError("expm needs a superoperator with domain = codomain")
    return SuperOperator(t.domain, t.codomain, scipy.linalg.expm(s * t.matrix))


def choi_matrix(t: SuperOperator) -> np.ndarray:
    """J(T) = Σ_ij E_ij ⊗ T(E_ij)."""
    d_in, d_out = t.domain.dim, t.codomain.dim
    blocks = t.matrix.reshape(d_out, d_out, d_in, d_in).transpose(3, 1, 2, 0)
    return blocks.reshape(d_in * d_out, d_in * d_out)


def random_pure_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector."""
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def pure_density(psi: np.ndarray, space: SpaceTag) -> Operator:
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    return Operator(space, np.outer(psi, psi.conj()))


def random_density_matrix(
    space: SpaceTag, rng: np.random.Generator, rank: Optional[int] = None
) -> Operator:
    """Random density matrix of the given rank (full rank by default)."""
    d = space.dim
    rank = rank or d
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = g @ g.conj().T
    return Operator(space, rho / np.trace(rho).real)


def norm_witness(
    t: SuperOperator,
    hermitian_restricted: bool = False,
    restarts: int = 64,
    seed: int = 0,
    tol: float = 1e-9,
    max_iterations: int = 500,
) -> NormWitness:
    """
    Multistart lower bound on ‖T‖₁→₁ over rank-one inputs.

    Each restart runs an alternating ascent: for the current pair, take
    the unitary polar factor G of T(|ψ⟩⟨φ|); then move (ψ, φ) to the top
    singular pair of T†(G) (or ψ to the top eigenvector of its Hermitian
    part in the restricted search). Each step does not decrease the
    objective.

    Args:
        t: Superoperator to bound
        hermitian_restricted: Restrict to inputs |ψ⟩⟨ψ|
        restarts: Number of random starts
        seed: Seed for the starts
        tol: Stopping tolerance on the per-step improvement
        max_iterations: Cap per restart

    Returns:
        NormWitness with the best value and the maximizing vectors
    """
    rng = np.random.default_rng(seed)
    d_in = t.domain.dim
    adjoint = t.adjoint()
    best_value, best_psi, best_phi = -1.0, None, None
    values = []

    def objective(psi, phi):
        image = t(Operator(t.domain, np.outer(psi, phi.conj())))
        return image, float(np.sum(scipy.linalg.svdvals(image.entries)))

    for _ in range(max(1, restarts)):
        psi = random_pure_state(d_in, rng)
        phi = psi if hermitian_restricted else random_pure_state(d_in, rng)
        image, value = objective(psi, phi)
        for _ in range(max_iterations):
            w, _, vh = np.linalg.svd(image.entries)
            lifted = adjoint(Operator(t.codomain, w @ vh)).entries
            if hermitian_restricted:
                _, vectors = np.linalg.eigh(0.5 * (lifted + lifted.conj().T))
                psi = phi = vectors[:, -1]
            else:
                u, _, vh_in = np.linalg.svd(lifted)
                psi, phi = u[:, 0], vh_in[0].conj()
            image, new_value = objective(psi, phi)
            improved = new_value - value
            value = max(value, new_value)
            if improved <= tol * max(1.0, value):
                break
        values.append(value)
        if value > best_value:
            best_value, best_psi, best_phi = value, psi, phi

    converged = sum(1 for v in values if v >= best_value - 1e-6 * max(1.0, best_value))
    logger.debug(
        "norm witness %.12g (%d/%d restarts within 1e-6)", best_value, converged, len(values)
    )
    return NormWitness(
        value=best_value, psi=best_psi, phi=best_phi, converged_restarts=converged
    )


def superop_norm_1to1(
    t: SuperOperator,
    hermitian_restricted: bool = False,
    restarts: int = 64,
    seed: int = 0,
    tol: float = 1e-9,
) -> float:
    """
    Witness of the induced trace norm ‖T‖₁→₁.

    The returned value is attained, so it is a certified lower bound; it is
    the exact norm when the restarts agree.
    """
    return norm_witness(t, hermitian_restricted, restarts, seed, tol).value
