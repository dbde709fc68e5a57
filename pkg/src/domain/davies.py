"""
Bohr-frequency analysis of H_P and the Davies ♯ average.

X♯ is the pinching Σ_μ P_μ X P_μ. For superoperators,
T♯ = Σ_ω F_ω T F_ω with F_ω = Σ_{μ−ν=ω} Q_μν and Q_μν(X) = P_μ X P_ν.
"""

import logging
import math
from typing import Optional

import numpy as np
import scipy.linalg

from src.domain.models import (
    BohrDecomposition,
    LindbladSpec,
    Operator,
    SuperOperator,
    ZenoObjects,
)
from src.domain.tensor_algebra import superop_from_sandwich

logger = logging.getLogger(__name__)

GAUSS_NODES = 8


def _cluster(values: np.ndarray, tol: float) -> list[list[int]]:
    """Group sorted-value indices whose consecutive gaps are within tol."""
    order = np.argsort(values, kind="stable")
    groups: list[list[int]] = []
    for index in order:
        if groups and values[index] - values[groups[-1][-1]] <= tol:
            groups[-1].append(int(index))
        else:
            groups.append([int(index)])
    return groups


def _near_pairs(values: np.ndarray, tol: float) -> list[tuple[float, float]]:
    ordered = np.sort(values)
    return [
        (float(a), float(b))
        for a, b in zip(ordered[:-1], ordered[1:])
        if tol < b - a < 10 * tol
    ]


def bohr_decompose(h_p: Operator, cluster_tol: float = 1e-8) -> BohrDecomposition:
    """
    Spectral projections of H_P and its Bohr frequencies.

    Eigenvalues and frequencies closer than cluster_tol·max(1, ‖H_P‖) are
    merged. Pairs that fall just outside the merge window are recorded as
    near resonances and logged.

    Args:
        h_p: Self-adjoint operator on B
        cluster_tol: Relative merging tolerance

    Returns:
        BohrDecomposition; b is None when H_P is a multiple of the identity
    """
    values, vectors = scipy.linalg.eigh(h_p.hermitian_part().entries)
    tol = cluster_tol * max(1.0, float(np.max(np.abs(values), initial=0.0)))

    eigenvalues, projections = [], []
    for group in _cluster(values, tol):
        basis = vectors[:, group]
        eigenvalues.append(float(np.mean(values[group])))
        projections.append(Operator(h_p.space, basis @ basis.conj().T))
    eigenvalues = np.array(eigenvalues)

    differences = np.subtract.outer(eigenvalues, eigenvalues).ravel()
    frequencies = np.array(
        [float(np.mean(differences[g])) for g in _cluster(differences, tol)]
    )

    b: Optional[float] = None
    if len(frequencies) > 1:
        b = float(np.min(np.diff(frequencies)))
    else:
        logger.warning("H_P is a multiple of the identity; the average is trivial")

    near = _near_pairs(values, tol) + _near_pairs(differences, tol)
    for pair in near:
        logger.warning("Near-resonant values %.12g and %.12g were kept apart", *pair)

    return BohrDecomposition(
        eigenvalues=eigenvalues,
        projections=tuple(projections),
        frequencies=frequencies,
        b=b,
        cluster_tol=tol,
        near_resonances=tuple(near),
    )


def _frequency_index(bohr: BohrDecomposition, omega: float) -> int:
    return int(np.argmin(np.abs(bohr.frequencies - omega)))


def sharp_operator(x: Operator, bohr: BohrDecomposition) -> Operator:
    """Pinching Σ_μ P_μ X P_μ."""
    pinched = sum((p.entries @ x.entries @ p.entries for p in bohr.projections), 0)
    return Operator(x.space, pinched)


def _frequency_blocks(bohr: BohrDecomposition, space) -> list[np.ndarray]:
    """F_ω matrices, one per frequency."""
    d = space.dim
    blocks = [np.zeros((d * d, d * d), dtype=np.complex128) for _ in bohr.frequencies]
    for mu, p_mu in zip(bohr.eigenvalues, bohr.projections):
        for nu, p_nu in zip(bohr.eigenvalues, bohr.projections):
            q = superop_from_sandwich(p_mu.entries, p_nu.entries, space, space).matrix
            blocks[_frequency_index(bohr, mu - nu)] += q
    return blocks


def sharp_superop(t: SuperOperator, bohr: BohrDecomposition) -> SuperOperator:
    """Davies average of a superoperator on B."""
    blocks = _frequency_blocks(bohr, t.domain)
    matrix = sum((f @ t.matrix @ f for f in blocks), np.zeros_like(t.matrix))
    return SuperOperator(t.domain, t.codomain, matrix)


def sharp_lindblad_form(spec: LindbladSpec, bohr: BohrDecomposition) -> LindbladSpec:
    """
    Jump form of the averaged dissipator.

    Each jump V splits into V_ω = Σ_{μ−μ'=ω} P_μ' V P_μ; the Hamiltonian
    part is pinched.
    """
    largest = max((float(np.max(np.abs(j.entries))) for j in spec.jumps), default=1.0)
    floor = 1e-13 * max(1.0, largest)
    jumps = []
    for jump in spec.jumps:
        components = [np.zeros_like(jump.entries) for _ in bohr.frequencies]
        for mu, p_mu in zip(bohr.eigenvalues, bohr.projections):
            for mu_prime, p_prime in zip(bohr.eigenvalues, bohr.projections):
                index = _frequency_index(bohr, mu - mu_prime)
                components[index] += p_prime.entries @ jump.entries @ p_mu.entries
        jumps.extend(
            Operator(spec.space, c) for c in components if np.linalg.norm(c) > floor
        )
    hamiltonian = sharp_operator(spec.hamiltonian_part, bohr).hermitian_part()
    return LindbladSpec(spec.space, tuple(jumps), hamiltonian)


def davies_generator(
    zeno: ZenoObjects, cluster_tol: float = 1e-8
) -> tuple[BohrDecomposition, SuperOperator]:
    """Bohr decomposition of H_P and D_P♯."""
    bohr = bohr_decompose(zeno.h_p, cluster_tol)
    d_p_sharp = sharp_superop(zeno.d_p, bohr)
    logger.info(
        "D_P sharp built: %d eigenvalues, %d frequencies",
        len(bohr.eigenvalues),
        len(bohr.frequencies),
    )
    return bohr, d_p_sharp


def oscillation_bound(bohr: BohrDecomposition, horizon: float) -> float:
    """|σ(H_P)|⁴ · 3π / (2bT): distance between T♯ and its finite-time average."""
    if bohr.b is None:
        return 0.0
    return len(bohr.eigenvalues) ** 4 * 3 * math.pi / (2 * bohr.b * horizon)


def finite_time_average(
    t: SuperOperator,
    h_p: Operator,
    horizon: float,
    panels: Optional[int] = None,
) -> SuperOperator:
    """
    (1/2T) ∫_{−T}^{T} e^{−sK_P} T e^{sK_P} ds by composite Gauss–Legendre.

    Works in the eigenbasis of H_P, where conjugation by e^{sK_P} only
    multiplies matrix entries by phases.

    Args:
        t: Superoperator on B
        h_p: Hamiltonian generating K_P
        horizon: Half-width T of the averaging window
        panels: Number of quadrature panels; by default each panel spans
            at most half a period of the fastest phase
    """
    values, u = scipy.linalg.eigh(h_p.hermitian_part().entries)
    w = np.kron(u.conj(), u)
    omega = np.subtract.outer(values, values).T.ravel()
    rotated = w.conj().T @ t.matrix @ w
    delta = np.subtract.outer(omega, omega)

    if panels is None:
        fastest = max(float(np.max(np.abs(delta))), 1.0)
        panels = int(np.ceil(2 * horizon * fastest / math.pi)) + 1
    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_NODES)
    edges = np.linspace(-horizon, horizon, panels + 1)

    average = np.zeros_like(delta, dtype=np.complex128)
    for left, right in zip(edges[:-1], edges[1:]):
        half = 0.5 * (right - left)
        for node, weight in zip(nodes, weights):
            s = 0.5 * (left + right) + half * node
            average += weight * half * np.exp(1j * s * delta)
    average /= 2 * horizon

    return SuperOperator(t.domain, t.codomain, w @ (rotated * average) @ w.conj().T)
