"""
The built-in two-qubit model and its closed-form values.

A thermal amplitude-damping dissipator on qubit A, an exchange coupling
σ₋⊗σ₊ + σ₊⊗σ₋, and H_B = σ2 + tI with t = tanh(β/2). Everything is
generated from β, so every closed form below is a function of t.

Basis convention: |0⟩ = (0, 1), |1⟩ = (1, 0), σ₋ = |0⟩⟨1|.
"""

import math
from dataclasses import replace
from typing import Optional

import numpy as np

from src.domain.models import (
    CompositeModel,
    LindbladSpec,
    ModelConfig,
    Operator,
    SpaceKind,
    SpaceTag,
    Tolerances,
)
from src.domain.zeno_reduction import make_composite_model

IDENTITY = np.eye(2, dtype=np.complex128)
SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=np.complex128)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=np.complex128)
SIGMA_PLUS = SIGMA_MINUS.conj().T
PAULIS = (IDENTITY, SIGMA_1, SIGMA_2, SIGMA_3)

DEFAULT_GAMMA_GRID = (10.0, 30.0, 100.0, 300.0)
H_B_VARIANTS = ("sigma2", "sigma3")

# D♯ acts diagonally on the Pauli basis of the example
SHARP_EIGENVALUES = {0: 0.0, 1: -1.5, 2: -1.0, 3: -1.5}


def example_parameter(beta: float) -> float:
    """t = tanh(β/2)."""
    if not math.isfinite(beta):
        raise ValueError(f"beta must be finite, got {beta}")
    return math.tanh(beta / 2)


def jump_weights(beta: float) -> tuple[float, float]:
    """(s², c²) = ((1+t)/2, (1−t)/2), the σ₋ and σ₊ weights."""
    t = example_parameter(beta)
    return (1 + t) / 2, (1 - t) / 2


def pauli_sum(terms) -> np.ndarray:
    """Σ coefficient · σ_i ⊗ σ_j over (coefficient, i, j) triples."""
    total = np.zeros((4, 4), dtype=np.complex128)
    for coefficient, i, j in terms:
        total += coefficient * np.kron(PAULIS[i], PAULIS[j])
    return total


def ladder_operator() -> np.ndarray:
    """a = ½(σ1 − iσ3), the lowering operator of σ2."""
    return 0.5 * (SIGMA_1 - 1j * SIGMA_3)


def example_config(
    beta: float = 1.0,
    gamma: float = 10.0,
    gamma_grid=DEFAULT_GAMMA_GRID,
    seed: int = 0,
    h_b_variant: str = "sigma2",
    tolerances: Optional[Tolerances] = None,
) -> ModelConfig:
    """
    Config document of the two-qubit model.

    The σ2 variant keeps the scalar tI in H_B, so trace normalization is
    switched off; the scalar does not change any generator.

    Args:
        beta: Inverse temperature of the A-side Gibbs state
        gamma: Single rate
        gamma_grid: Rates for scans
        seed: Seed recorded in the document
        h_b_variant: "sigma2" for H_B = σ2 + tI, "sigma3" for H_B = σ3
        tolerances: Tolerance overrides
    """
    if h_b_variant not in H_B_VARIANTS:
        raise ValueError(f"Unknown H_B variant '{h_b_variant}'")
    t = example_parameter(beta)
    s_sq, c_sq = jump_weights(beta)
    h_b = SIGMA_2 + t * IDENTITY if h_b_variant == "sigma2" else SIGMA_3
    return ModelConfig(
        d_a=2,
        d_b=2,
        h_a=SIGMA_3,
        h_ab=np.kron(SIGMA_MINUS, SIGMA_PLUS) + np.kron(SIGMA_PLUS, SIGMA_MINUS),
        h_b=h_b,
        jumps=(math.sqrt(c_sq) * SIGMA_PLUS, math.sqrt(s_sq) * SIGMA_MINUS),
        hamiltonian_part=np.zeros((2, 2)),
        gamma=gamma,
        gamma_grid=tuple(gamma_grid),
        seed=seed,
        normalize_trace=False,
        tolerances=tolerances or Tolerances(),
        label=f"two-qubit example, beta={beta:g}, H_B={h_b_variant}",
    )


def model_from_config(config: ModelConfig) -> CompositeModel:
    """Checked CompositeModel from a config document."""
    dims = SpaceTag.composite(config.d_a, config.d_b)
    space_a = dims.factor(SpaceKind.A)
    k_l = config.hamiltonian_part
    spec = LindbladSpec.from_jumps(
        space_a,
        [Operator(space_a, jump) for jump in config.jumps],
        Operator(space_a, k_l) if k_l is not None else None,
    )
    return make_composite_model(
        Operator(space_a, config.h_a),
        Operator(dims, config.h_ab),
        Operator(dims.factor(SpaceKind.B), config.h_b),
        spec,
        gamma=config.gamma,
        normalize_trace=config.normalize_trace,
        tolerances=config.tolerances,
    )


def build_example_model(
    beta: float = 1.0, gamma: float = 10.0, h_b_variant: str = "sigma2"
) -> CompositeModel:
    return model_from_config(example_config(beta, gamma, h_b_variant=h_b_variant))


def build_counter_model(beta: float = 1.0, gamma: float = 10.0) -> CompositeModel:
    """Example with H_A = σ3 + σ1, so π_A no longer commutes with K_A."""
    config = replace(example_config(beta, gamma), h_a=SIGMA_3 + SIGMA_1, label="counter-model")
    return model_from_config(config)


def random_model(
    rng: np.random.Generator,
    d_a: int = 2,
    d_b: int = 2,
    n_jumps: int = 2,
    gamma: float = 1.0,
) -> CompositeModel:
    """
    Random model with Gaussian Hamiltonians and jumps.

    Generic complex jumps make D_A ergodic and gapped with probability one;
    trace normalization re-splits H so the interaction has vanishing
    partial traces.
    """
    dims = SpaceTag.composite(d_a, d_b)
    space_a = dims.factor(SpaceKind.A)

    def hermitian(n: int) -> np.ndarray:
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        return 0.5 * (g + g.conj().T)

    jumps = [
        (rng.standard_normal((d_a, d_a)) + 1j * rng.standard_normal((d_a, d_a))) / d_a
        for _ in range(n_jumps)
    ]
    spec = LindbladSpec.from_jumps(
        space_a,
        [Operator(space_a, jump) for jump in jumps],
        Operator(space_a, 0.2 * hermitian(d_a)),
    )
    return make_composite_model(
        Operator(space_a, hermitian(d_a)),
        Operator(dims, hermitian(d_a * d_b)),
        Operator(dims.factor(SpaceKind.B), hermitian(d_b)),
        spec,
        gamma=gamma,
        normalize_trace=True,
    )


def expected_pi_a(t: float) -> np.ndarray:
    """π_A = ½I − (t/2)σ3."""
    return 0.5 * IDENTITY - 0.5 * t * SIGMA_3


def expected_dp_identity(t: float) -> np.ndarray:
    """D_P(I) = −2tσ3."""
    return -2 * t * SIGMA_3


def expected_projected_state(t: float, gamma: float) -> np.ndarray:
    """Steady state of K_P + γ⁻¹D_P."""
    return (
        0.5 * IDENTITY
        - (gamma * t / (2 * gamma**2 + 1)) * SIGMA_1
        - (t / (4 * gamma**2 + 2)) * SIGMA_3
    )


def expected_projected_eigenvalues(gamma: float) -> np.ndarray:
    """Spectrum of K_P + γ⁻¹D_P, in no particular order."""
    root = np.sqrt(complex(16 * gamma**2 - 1))
    pair = -(3 + np.array([1j, -1j]) * root) / (2 * gamma)
    return np.concatenate([[0.0, -1 / gamma], pair])


def expected_hierarchy_coefficients(t: float) -> dict[str, np.ndarray]:
    """V_0, W_0, V_1 and W_1 on B."""
    return {
        "V0": -0.5 * t * SIGMA_1,
        "W0": np.zeros((2, 2), dtype=np.complex128),
        "V1": 0.25 * t * SIGMA_3,
        "W1": -3 * t * SIGMA_2,
    }


def expected_n0(t: float) -> np.ndarray:
    """γ⁻¹ coefficient of the steady state."""
    return pauli_sum(
        [
            (-t / 4, 1, 2),
            (t / 4, 2, 1),
            (-t / 4, 0, 1),
            (t**2 / 4, 3, 1),
        ]
    )


def expected_n1(t: float) -> np.ndarray:
    """γ⁻² coefficient of the steady state."""
    return pauli_sum(
        [
            (-1.5 * t, 0, 2),
            (t / 8, 0, 3),
            (-(t**2) / 4, 2, 0),
            (t / 4, 3, 0),
            (-t / 2, 1, 1),
            (-t / 2, 2, 2),
            (-3 * t**2 / 8, 3, 3),
            (-t / 4, 2, 3),
            (1.5 * t**2, 3, 2),
        ]
    )


def expected_trace_a(t: float, gamma: float) -> np.ndarray:
    """Tr_A of the steady state through order γ⁻²."""
    return (
        0.5 * IDENTITY
        - (t / 2) / gamma * SIGMA_1
        + (-3 * t * SIGMA_2 + (t / 4) * SIGMA_3) / gamma**2
    )


def expected_trace_b(t: float, gamma: float) -> np.ndarray:
    """Tr_B of the steady state through order γ⁻²."""
    return expected_pi_a(t) + (-(t**2) / 2 * SIGMA_2 + (t / 2) * SIGMA_3) / gamma**2


def exact_denominator(gamma: float) -> float:
    """Common denominator of the exact steady-state Pauli coefficients."""
    return 2 * gamma**4 + 23 * gamma**2 + 64


def expected_sharp_mixing_time(epsilon: float = 0.2) -> float:
    """
    t_mix(D_P♯, ε) = ln(1/ε).

    The sup of d_TV over qubit pairs is the largest Bloch-vector contraction,
    here e^{−t} along σ2.
    """
    return math.log(1 / epsilon)
