"""
Domain models for ZenoLimit.

Contains the value types shared by the numerical layers: space tags,
operators and superoperators, Lindblad specifications, the composite
model, and the result records produced by the reduction pipeline.

All numerical values are immutable after construction: arrays are copied
on the way in and marked read-only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from numbers import Number
from typing import Optional

import numpy as np

from src.domain.errors import InvalidGeneratorError, ModelInvariantError, SpaceMismatchError
from src.domain.matrix_codec import decode_matrix, encode_matrix, encode_operator_list


def _frozen_array(values, dtype=np.complex128) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


class SpaceKind(Enum):
    """Which factor of H_A ⊗ H_B an operator acts on."""

    A = "A"
    B = "B"
    AB = "AB"


@dataclass(frozen=True)
class SpaceTag:
    """
    Hilbert space label carrying both factor dimensions.

    Attributes:
        which: Factor the tag refers to
        dim_a: Dimension of H_A
        dim_b: Dimension of H_B
    """

    which: SpaceKind
    dim_a: int
    dim_b: int

    def __post_init__(self):
        if self.dim_a < 1 or self.dim_b < 1:
            raise SpaceMismatchError(
                f"Dimensions must be positive, got dim_a={self.dim_a}, dim_b={self.dim_b}"
            )

    @classmethod
    def on_a(cls, dim_a: int, dim_b: int = 1) -> SpaceTag:
        return cls(SpaceKind.A, dim_a, dim_b)

    @classmethod
    def on_b(cls, dim_b: int, dim_a: int = 1) -> SpaceTag:
        return cls(SpaceKind.B, dim_a, dim_b)

    @classmethod
    def composite(cls, dim_a: int, dim_b: int) -> SpaceTag:
        return cls(SpaceKind.AB, dim_a, dim_b)

    @property
    def dim(self) -> int:
        """Dimension of the space the tag names."""
        if self.which is SpaceKind.A:
            return self.dim_a
        if self.which is SpaceKind.B:
            return self.dim_b
        return self.dim_a * self.dim_b

    def factor(self, which: SpaceKind) -> SpaceTag:
        """Tag for another factor of the same bipartition."""
        return SpaceTag(which, self.dim_a, self.dim_b)

    def matches(self, other: SpaceTag) -> bool:
        """Same factor and same dimension."""
        return self.which is other.which and self.dim == other.dim

    def __str__(self) -> str:
        return f"{self.which.value}[{self.dim}]"


@dataclass(frozen=True, eq=False)
class Operator:
    """
    A d×d complex matrix tagged with the space it acts on.

    Attributes:
        space: Space tag; its dimension fixes the matrix shape
        entries: Read-only complex matrix
    """

    space: SpaceTag
    entries: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.entries)
        d = self.space.dim
        if arr.shape != (d, d):
            raise SpaceMismatchError(
                f"Operator on {self.space} needs shape {(d, d)}, got {arr.shape}"
            )
        object.__setattr__(self, "entries", arr)

    @classmethod
    def identity(cls, space: SpaceTag) -> Operator:
        return cls(space, np.eye(space.dim))

    @classmethod
    def zeros(cls, space: SpaceTag) -> Operator:
        return cls(space, np.zeros((space.dim, space.dim)))

    @property
    def dim(self) -> int:
        return self.space.dim

    def dag(self) -> Operator:
        """Hermitian adjoint."""
        return Operator(self.space, self.entries.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def hermitian_part(self) -> Operator:
        """(X + X†)/2."""
        return Operator(self.space, 0.5 * (self.entries + self.entries.conj().T))

    def hermiticity_defect(self) -> float:
        """Largest entry of |X − X†|."""
        return float(np.max(np.abs(self.entries - self.entries.conj().T), initial=0.0))

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        return self.hermiticity_defect() <= tol

    def distance(self, other: Operator) -> float:
        """Largest entrywise deviation; spaces must match."""
        self._check_space(other)
        return float(np.max(np.abs(self.entries - other.entries), initial=0.0))

    def allclose(self, other: Operator, tol: float = 1e-10) -> bool:
        return self.space.matches(other.space) and self.distance(other) <= tol

    def _check_space(self, other: Operator) -> None:
        if not self.space.matches(other.space):
            raise SpaceMismatchError(f"Cannot combine operators on {self.space} and {other.space}")

    def __add__(self, other: Operator) -> Operator:
        self._check_space(other)
        return Operator(self.space, self.entries + other.entries)

    def __sub__(self, other: Operator) -> Operator:
        self._check_space(other)
        return Operator(self.space, self.entries - other.entries)

    def __neg__(self) -> Operator:
        return Operator(self.space, -self.entries)

    def __mul__(self, scalar) -> Operator:
        if not isinstance(scalar, Number):
            return NotImplemented
        return Operator(self.space, self.entries * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> Operator:
        if not isinstance(scalar, Number):
            return NotImplemented
        return Operator(self.space, self.entries / scalar)

    def __matmul__(self, other: Operator) -> Operator:
        self._check_space(other)
        return Operator(self.space, self.entries @ other.entries)

    def __repr__(self) -> str:
        return f"Operator({self.space}, {np.array2string(self.entries, precision=4)})"


@dataclass(frozen=True, eq=False)
class SuperOperator:
    """
    Linear map between operator spaces.

    The matrix acts on column-stacked vectors: vec(X)[i + j·d] = X[i, j],
    so X ↦ AXB has matrix Bᵀ ⊗ A.

    Attributes:
        domain: Space of the input operators
        codomain: Space of the output operators
        matrix: (d_out²)×(d_in²) complex matrix
    """

    domain: SpaceTag
    codomain: SpaceTag
    matrix: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.matrix)
        shape = (self.codomain.dim**2, self.domain.dim**2)
        if arr.shape != shape:
            raise SpaceMismatchError(
                f"Superoperator {self.domain} -> {self.codomain} needs shape {shape}, "
                f"got {arr.shape}"
            )
        object.__setattr__(self, "matrix", arr)

    @classmethod
    def identity(cls, space: SpaceTag) -> SuperOperator:
        return cls(space, space, np.eye(space.dim**2))

    @classmethod
    def zeros(cls, domain: SpaceTag, codomain: Optional[SpaceTag] = None) -> SuperOperator:
        codomain = codomain or domain
        return cls(domain, codomain, np.zeros((codomain.dim**2, domain.dim**2)))

    @property
    def is_square(self) -> bool:
        return self.domain.matches(self.codomain)

    def __call__(self, x: Operator) -> Operator:
        if not x.space.matches(self.domain):
            raise SpaceMismatchError(f"Superoperator expects {self.domain}, got {x.space}")
        d = self.codomain.dim
        image = self.matrix @ x.entries.reshape(-1, order="F")
        return Operator(self.codomain, image.reshape(d, d, order="F"))

    def __matmul__(self, other: SuperOperator) -> SuperOperator:
        """Composition self ∘ other."""
        if not other.codomain.matches(self.domain):
            raise SpaceMismatchError(
                f"Cannot compose {other.domain}->{other.codomain} into "
                f"{self.domain}->{self.codomain}"
            )
        return SuperOperator(other.domain, self.codomain, self.matrix @ other.matrix)

    def _check_shape(self, other: SuperOperator) -> None:
        if not (self.domain.matches(other.domain) and self.codomain.matches(other.codomain)):
            raise SpaceMismatchError("Superoperators act between different spaces")

    def __add__(self, other: SuperOperator) -> SuperOperator:
        self._check_shape(other)
        return SuperOperator(self.domain, self.codomain, self.matrix + other.matrix)

    def __sub__(self, other: SuperOperator) -> SuperOperator:
        self._check_shape(other)
        return SuperOperator(self.domain, self.codomain, self.matrix - other.matrix)

    def __neg__(self) -> SuperOperator:
        return SuperOperator(self.domain, self.codomain, -self.matrix)

    def __mul__(self, scalar) -> SuperOperator:
        if not isinstance(scalar, Number):
            return NotImplemented
        return SuperOperator(self.domain, self.codomain, self.matrix * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> SuperOperator:
        if not isinstance(scalar, Number):
            return NotImplemented
        return SuperOperator(self.domain, self.codomain, self.matrix / scalar)

    def adjoint(self) -> SuperOperator:
        """Adjoint with respect to the Hilbert–Schmidt inner product."""
        return SuperOperator(self.codomain, self.domain, self.matrix.conj().T)

    def distance(self, other: SuperOperator) -> float:
        """Largest entrywise deviation of the matrices."""
        self._check_shape(other)
        return float(np.max(np.abs(self.matrix - other.matrix), initial=0.0))

    def allclose(self, other: SuperOperator, tol: float = 1e-10) -> bool:
        return self.distance(other) <= tol

    def __repr__(self) -> str:
        return f"SuperOperator({self.domain} -> {self.codomain})"


@dataclass(frozen=True, eq=False)
class LindbladSpec:
    """
    Canonical dissipator data: Σ_j (2 L_j X L_j† − L_j†L_j X − X L_j†L_j) − i[K_L, X].

    Attributes:
        space: Space the jumps act on
        jumps: Jump operators L_1..L_r
        hamiltonian_part: Self-adjoint K_L
    """

    space: SpaceTag
    jumps: tuple[Operator, ...]
    hamiltonian_part: Operator

    def __post_init__(self):
        object.__setattr__(self, "jumps", tuple(self.jumps))
        for index, jump in enumerate(self.jumps):
            if not jump.space.matches(self.space):
                raise InvalidGeneratorError(
                    f"Jump {index} acts on {jump.space}, expected {self.space}"
                )
        if not self.hamiltonian_part.space.matches(self.space):
            raise InvalidGeneratorError(
                f"Hamiltonian part acts on {self.hamiltonian_part.space}, expected {self.space}"
            )
        scale = max(1.0, float(np.max(np.abs(self.hamiltonian_part.entries))))
        defect = self.hamiltonian_part.hermiticity_defect()
        if defect > 1e-12 * scale:
            raise InvalidGeneratorError(
                f"Hamiltonian part is not self-adjoint (defect {defect:.2e})"
            )

    @classmethod
    def from_jumps(
        cls,
        space: SpaceTag,
        jumps,
        hamiltonian_part: Optional[Operator] = None,
    ) -> LindbladSpec:
        """Build a spec, defaulting K_L to zero."""
        return cls(
            space=space,
            jumps=tuple(jumps),
            hamiltonian_part=hamiltonian_part or Operator.zeros(space),
        )

    @property
    def rank(self) -> int:
        return len(self.jumps)


@dataclass(frozen=True, eq=False)
class SpectralSummary:
    """
    Spectral data of a generator.

    Attributes:
        eigenvalues: All eigenvalues, sorted by decreasing real part
        gap: a = −max Re λ over the nonzero cluster (0 when none)
        zero_multiplicity: Size of the cluster at zero
        is_ergodic: Unique steady state and no purely imaginary eigenvalues
        has_imaginary_eigenvalues: Nonzero eigenvalues on the imaginary axis
        steady_state: Normalized steady state when ergodic
        notes: Reasons a steady state could not be produced
    """

    eigenvalues: np.ndarray
    gap: float
    zero_multiplicity: int
    is_ergodic: bool
    has_imaginary_eigenvalues: bool
    steady_state: Optional[Operator] = None
    notes: tuple[str, ...] = ()

    def is_gapped(self, threshold: float = 1e-6) -> bool:
        return self.gap > threshold


@dataclass(frozen=True)
class GksReport:
    """Result of the conditional complete-positivity test for a generator."""

    is_hermiticity_preserving: bool
    is_trace_annihilating: bool
    min_projected_choi_eigenvalue: float
    is_lindblad: bool


@dataclass(frozen=True)
class CptpReport:
    """Result of the Choi-matrix test for a map."""

    is_cp: bool
    is_tp: bool
    min_choi_eigenvalue: float


@dataclass(frozen=True, eq=False)
class NormWitness:
    """
    Best value found by a multistart norm maximization.

    Attributes:
        value: ‖T(|ψ⟩⟨φ|)‖₁ at the best pair (a lower bound on the norm)
        psi: Best ψ
        phi: Best φ (equals psi in the Hermitian-restricted search)
        converged_restarts: Restarts that reached the best value within tolerance
    """

    value: float
    psi: np.ndarray
    phi: np.ndarray
    converged_restarts: int


@dataclass(frozen=True, eq=False)
class CompositeModel:
    """
    Boundary-driven problem instance: L_γ = −i[H, ·] + γ (D_A ⊗ id_B).

    H = H_A ⊗ I + H_AB + I ⊗ H_B. Build instances with
    ``zeno_reduction.make_composite_model``, which re-centers H and checks
    ergodicity of D_A.

    Attributes:
        dims: Composite space tag
        h_a: Local Hamiltonian on A
        h_ab: Interaction with vanishing partial traces
        h_b: Local Hamiltonian on B
        dissipator_a: Lindblad data of D_A
        gamma: Dissipation strength
        trace_normalized: Whether Tr H = 0 is enforced
        adjustments: Notes on any re-centering applied at construction
    """

    dims: SpaceTag
    h_a: Operator
    h_ab: Operator
    h_b: Operator
    dissipator_a: LindbladSpec
    gamma: float
    trace_normalized: bool = True
    adjustments: tuple[str, ...] = ()

    def __post_init__(self):
        if self.dims.which is not SpaceKind.AB:
            raise SpaceMismatchError(f"Model dims must be composite, got {self.dims}")
        expected = {
            "H_A": (self.h_a, self.dims.factor(SpaceKind.A)),
            "H_AB": (self.h_ab, self.dims),
            "H_B": (self.h_b, self.dims.factor(SpaceKind.B)),
        }
        for name, (op, space) in expected.items():
            if not op.space.matches(space):
                raise SpaceMismatchError(f"{name} acts on {op.space}, expected {space}")
        if not self.dissipator_a.space.matches(self.dims.factor(SpaceKind.A)):
            raise SpaceMismatchError("D_A must act on H_A")
        if not (self.gamma >= 0.0 and math.isfinite(self.gamma)):
            raise ModelInvariantError("gamma >= 0", float(self.gamma), 0.0)

    @property
    def dim_a(self) -> int:
        return self.dims.dim_a

    @property
    def dim_b(self) -> int:
        return self.dims.dim_b

    @property
    def hamiltonian(self) -> Operator:
        """Full Hamiltonian H on AB."""
        eye_a = np.eye(self.dim_a)
        eye_b = np.eye(self.dim_b)
        full = (
            np.kron(self.h_a.entries, eye_b)
            + self.h_ab.entries
            + np.kron(eye_a, self.h_b.entries)
        )
        return Operator(self.dims, full)

    def with_gamma(self, gamma: float) -> CompositeModel:
        return replace(self, gamma=float(gamma))

    def with_h_b(self, h_b: Operator) -> CompositeModel:
        return replace(self, h_b=h_b)


@dataclass(frozen=True, eq=False)
class CompositeGenerators:
    """K = −i[H, ·], D = D_A ⊗ id_B and L_γ = K + γD on AB."""

    k: SuperOperator
    d: SuperOperator
    l_gamma: SuperOperator


@dataclass(frozen=True, eq=False)
class Projectors:
    """
    Projection machinery attached to the dissipator's steady manifold.

    Attributes:
        pi_a: Steady state of D_A
        p: P = V Tr_A
        q: Q = id − P
        s: Generalized inverse with SD = DS = Q
        embed: V: R ↦ π_A ⊗ R
        trace_a: Tr_A as a superoperator AB → B
        d: D = D_A ⊗ id_B
        d_a: D_A on A
        s_a: Generalized inverse on A
        q_a: Q_A on A
        gap_a: Spectral gap of D_A
    """

    pi_a: Operator
    p: SuperOperator
    q: SuperOperator
    s: SuperOperator
    embed: SuperOperator
    trace_a: SuperOperator
    d: SuperOperator
    d_a: SuperOperator
    s_a: SuperOperator
    q_a: SuperOperator
    gap_a: float


@dataclass(frozen=True, eq=False)
class DpLindbladForm:
    """
    Explicit Lindblad form of D_P from the dual-basis construction.

    Attributes:
        y_basis: Eigenbasis of D_A, Y_0 = π_A
        x_basis: Dual basis, ⟨X_j, Y_k⟩ = δ_jk and X_0 = I
        eigenvalues: λ_j of D_A for j ≥ 1
        g_coefficients: G_0..G_n with H = Σ X_j ⊗ G_j
        m: M_jk = −⟨S_A† X_k, X_j π_A⟩ for j, k ≥ 1
        a_mat: (M + M†)/2
        b_mat: (M − M†)/(2i)
        spec: Jumps V_ℓ and Hamiltonian part H_L
        rebuild_error: Largest deviation between the rebuilt dissipator and D_P
        condition_number: Condition number of the eigenvector matrix
    """

    y_basis: tuple[Operator, ...]
    x_basis: tuple[Operator, ...]
    eigenvalues: np.ndarray
    g_coefficients: tuple[Operator, ...]
    m: np.ndarray
    a_mat: np.ndarray
    b_mat: np.ndarray
    spec: LindbladSpec
    rebuild_error: float
    condition_number: float


@dataclass(frozen=True, eq=False)
class ZenoObjects:
    """
    Everything the Zeno reduction derives from a composite model.

    Attributes:
        model: Source model
        projectors: π_A, P, Q, S and their A-side counterparts
        h_p: Projected Hamiltonian on B
        k_p: −i[H_P, ·]
        d_p: Projected dissipator −Tr_A K S K V
        b_p: Second-order corrector
        extraction: Explicit Lindblad form of D_P, absent when D_A is defective
    """

    model: CompositeModel
    projectors: Projectors
    h_p: Operator
    k_p: SuperOperator
    d_p: SuperOperator
    b_p: SuperOperator
    extraction: Optional[DpLindbladForm] = None

    @property
    def pi_a(self) -> Operator:
        return self.projectors.pi_a

    @property
    def p(self) -> SuperOperator:
        return self.projectors.p

    @property
    def q(self) -> SuperOperator:
        return self.projectors.q

    @property
    def s(self) -> SuperOperator:
        return self.projectors.s

    @property
    def dp_lindblad(self) -> Optional[LindbladSpec]:
        return self.extraction.spec if self.extraction else None

    @property
    def m(self) -> Optional[np.ndarray]:
        return self.extraction.m if self.extraction else None

    @property
    def a_mat(self) -> Optional[np.ndarray]:
        return self.extraction.a_mat if self.extraction else None

    @property
    def b_mat(self) -> Optional[np.ndarray]:
        return self.extraction.b_mat if self.extraction else None


@dataclass(frozen=True, eq=False)
class BohrDecomposition:
    """
    Spectral decomposition of H_P and its Bohr frequencies.

    Attributes:
        eigenvalues: Distinct (clustered) eigenvalues μ, increasing
        projections: Spectral projections P_μ
        frequencies: Distinct differences μ − ν, increasing
        b: Smallest gap between distinct frequencies; None when H_P ∝ I
        cluster_tol: Tolerance used for merging
        near_resonances: Frequency pairs closer than 10·cluster_tol but not merged
    """

    eigenvalues: np.ndarray
    projections: tuple[Operator, ...]
    frequencies: np.ndarray
    b: Optional[float]
    cluster_tol: float
    near_resonances: tuple[tuple[float, float], ...] = ()

    @property
    def is_degenerate(self) -> bool:
        return len(self.eigenvalues) == 1


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """
    Splitting of traceless operators on B as ran(K_P) ⊕ (ker(K_P) ∩ traceless).

    Attributes:
        v_basis: Orthonormal basis of ran(K_P)
        w_basis: Orthonormal basis of ker(K_P) ∩ traceless
        traceless_basis: Orthonormal basis of all traceless operators
        lu_factors: LU factorization of the map (v, w) ↦ K_P V + D_P W in coordinates
        c_v: Trace-norm bound for the V component
        c_w: Trace-norm bound for the W component
        k_p: K_P
        d_p: D_P
    """

    v_basis: tuple[Operator, ...]
    w_basis: tuple[Operator, ...]
    traceless_basis: tuple[Operator, ...]
    lu_factors: tuple[np.ndarray, np.ndarray]
    c_v: float
    c_w: float
    k_p: SuperOperator
    d_p: SuperOperator


@dataclass(frozen=True, eq=False)
class ExpansionResult:
    """
    Steady-state Hilbert expansion ρ̄_γ = π_A ⊗ R̄ + Σ_k γ^{−(k+1)} n̄_k.

    Attributes:
        r_bar: Steady state of D_P♯
        pi_a: Steady state of D_A
        n_bar: n̄_0..n̄_K on AB
        m_tilde: Intermediate m̃_0..m̃_K
        v_coefficients: V_0..V_{K+1} from the range of K_P
        w_coefficients: W_0..W_K from the kernel of K_P
        per_order_residuals: ‖D n̄_k + K n̄_{k−1}‖₁ per order
        sk_norm_bound: Witness of ‖SK‖₁→₁ (logged, not asserted)
    """

    r_bar: Operator
    pi_a: Operator
    n_bar: tuple[Operator, ...]
    m_tilde: tuple[Operator, ...]
    v_coefficients: tuple[Operator, ...]
    w_coefficients: tuple[Operator, ...]
    per_order_residuals: tuple[float, ...]
    sk_norm_bound: float = float("nan")

    @property
    def order(self) -> int:
        return len(self.n_bar) - 1

    @property
    def leading_state(self) -> Operator:
        """π_A ⊗ R̄."""
        space = self.n_bar[0].space
        return Operator(space, np.kron(self.pi_a.entries, self.r_bar.entries))

    def truncated_state(self, gamma: float, order: Optional[int] = None) -> Operator:
        """
        Truncated expansion at rate gamma.

        Args:
            gamma: Dissipation strength
            order: Highest n̄ index kept; defaults to all computed orders

        Returns:
            π_A ⊗ R̄ + Σ_{k ≤ order} γ^{−(k+1)} n̄_k, with unit trace but not
            necessarily positive
        """
        order = self.order if order is None else order
        if order > self.order:
            raise ValueError(f"Expansion computed to order {self.order}, requested {order}")
        state = self.leading_state
        for k in range(order + 1):
            state = state + self.n_bar[k] * gamma ** (-(k + 1))
        return state


class TheoremTag(Enum):
    """Comparison statements checked by trajectory gap scans."""

    LEAKAGE = "leakage"  # ‖Q e^{tL} P ρ‖ ~ 1/γ
    RELAXATION = "relaxation"  # ‖e^{tL} Q ρ‖ ~ log(1+γ)/γ for t ≥ t_γ
    COHERENT = "coherent"  # reduced vs projected dynamics ~ T/γ²
    PROJECTED_TRACKING = "projected-tracking"  # full vs π ⊗ e^{tL_P} R0 on [t_γ, γT]
    ZENO_TRACKING = "zeno-tracking"  # full vs π ⊗ e^{tK_P} R0 on [t_γ, T]
    INTERACTION_REDUCED = "interaction-reduced"  # interaction picture of L_P vs e^{τD♯}
    INTERACTION_FULL = "interaction-full"  # interaction picture of the full dynamics vs e^{τD♯}

    @property
    def code(self) -> str:
        """Short upper-case name accepted by the command line."""
        return THEOREM_CODES[self]

    @classmethod
    def parse(cls, name: str) -> TheoremTag:
        """
        Look up a tag by value or by code.

        Raises:
            ValueError: If the name matches neither
        """
        for tag in cls:
            if name in (tag.value, tag.code):
                return tag
        raise ValueError(f"Unknown theorem tag '{name}'")


THEOREM_CODES = {
    TheoremTag.LEAKAGE: "TZCVS",
    TheoremTag.RELAXATION: "EULLIM",
    TheoremTag.COHERENT: "COHERENTSC",
    TheoremTag.PROJECTED_TRACKING: "MTILRM",
    TheoremTag.ZENO_TRACKING: "MTILRMEUL",
    TheoremTag.INTERACTION_REDUCED: "PROJMOZLTH",
    TheoremTag.INTERACTION_FULL: "PROJMOZLTHA",
}


@dataclass(frozen=True, eq=False)
class GapSeries:
    """One trace-norm gap curve at fixed γ."""

    name: str
    gamma: float
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = _frozen_array(self.times, dtype=float)
        values = _frozen_array(self.values, dtype=float)
        if times.shape != values.shape:
            raise ValueError("times and values must have the same length")
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise ValueError("time grid must be strictly increasing")
        if np.any(values < 0):
            raise ValueError("gaps must be nonnegative")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    @property
    def supremum(self) -> float:
        return float(np.max(self.values)) if self.values.size else 0.0


@dataclass(frozen=True, eq=False)
class TrajectoryGapReport:
    """
    Result of a comparison scan over a γ grid.

    Attributes:
        theorem_tag: Which comparison was evaluated
        gammas: Rate grid
        series: Named gap curves, one tuple entry per γ
        primary: Name of the series whose suprema are fitted
        fitted_rate: Log-log slope of the primary suprema
        r_squared: Coefficient of determination of the fit
        fit_abscissa: "gamma" or "log(1+gamma)/gamma"
    """

    theorem_tag: TheoremTag
    gammas: np.ndarray
    series: dict[str, tuple[GapSeries, ...]]
    primary: str
    fitted_rate: float
    r_squared: float
    fit_abscissa: str = "gamma"

    def suprema(self, name: Optional[str] = None) -> np.ndarray:
        """Supremum of a named series at each γ."""
        return np.array([s.supremum for s in self.series[name or self.primary]])

    def rows(self):
        """Flat (series, gamma, time, value) rows for tabular output."""
        for name, curves in self.series.items():
            for curve in curves:
                for t, value in zip(curve.times, curve.values):
                    yield name, curve.gamma, float(t), float(value)


class MixingMethod(Enum):
    """How a mixing time was located."""

    BISECTION = "bisection"


@dataclass(frozen=True, eq=False)
class MixingReport:
    """
    Estimated mixing time t_mix(L, ε).

    Attributes:
        epsilon: Threshold in (0, 1/2)
        t_mix: Estimated time, math.inf when the flag is raised
        is_finite: False when the sup exceeds ε at t_max
        witness_pair: Pure states attaining the sup at t_mix
        sup_at_t_mix: Estimated sup of d_TV at t_mix
        t_max: Search horizon
        method: Search method
    """

    epsilon: float
    t_mix: float
    is_finite: bool
    witness_pair: Optional[tuple[Operator, Operator]]
    sup_at_t_mix: float
    t_max: float
    method: MixingMethod = MixingMethod.BISECTION


@dataclass(frozen=True)
class MixingRatioRow:
    """Mixing-time ratios at one γ."""

    gamma: float
    full_ratio: float
    projected_ratio: float
    full_deviation: float
    projected_deviation: float


@dataclass(frozen=True)
class MixingRatioScan:
    """Mixing-time ratios t_mix/γ against t_mix(D_P♯) over a γ grid."""

    epsilon: float
    reference: float
    rows: tuple[MixingRatioRow, ...]
    continuity: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class EnvelopeFit:
    """Fit of norm(t) ≤ C e^{−rate·t}."""

    constant: float
    rate: float
    times: np.ndarray
    norms: np.ndarray


@dataclass(frozen=True, eq=False)
class BoundaryStateReport:
    """
    Whether Tr_B of the first expansion term vanishes.

    Attributes:
        k_a: H_A + Tr_B[(I ⊗ R̄) H_AB]
        commutator_norm: ‖[π_A, K_A]‖₁
        trb_n0_norm: ‖Tr_B n̄_0‖₁
        consistent: Both vanish or both do not
    """

    k_a: Operator
    commutator_norm: float
    trb_n0_norm: float
    consistent: bool


@dataclass(frozen=True)
class DecayCheckRow:
    """Mixing geometric decay at multiples of t_mix."""

    k: int
    time: float
    distance: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.distance <= self.bound + 1e-8


@dataclass(frozen=True)
class Tolerances:
    """
    Numerical tolerances, overridable per config document.

    Attributes:
        exact: Identities that hold up to rounding
        optimized: Quantities from iterative or optimized estimates
        fit: Allowed deviation of fitted log-log slopes
        cluster: Relative eigenvalue/frequency merging tolerance
        gks: Choi-eigenvalue slack in positivity tests
        gap_threshold: Smallest gap counted as gapped
        condition_limit: Largest accepted eigenvector condition number
    """

    exact: float = 1e-10
    optimized: float = 1e-6
    fit: float = 0.2
    cluster: float = 1e-8
    gks: float = 1e-9
    gap_threshold: float = 1e-6
    condition_limit: float = 1e8

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "exact": self.exact,
            "optimized": self.optimized,
            "fit": self.fit,
            "cluster": self.cluster,
            "gks": self.gks,
            "gap_threshold": self.gap_threshold,
            "condition_limit": self.condition_limit,
        }

    @classmethod
    def from_dict(cls, data: Optional[dict]) -> Tolerances:
        """Create from a possibly partial dictionary; missing keys keep defaults."""
        defaults = cls()
        data = data or {}
        values = {key: float(data.get(key, value)) for key, value in defaults.to_dict().items()}
        return cls(**values)

    def with_overrides(self, **overrides) -> Tolerances:
        return replace(self, **{k: float(v) for k, v in overrides.items() if v is not None})


@dataclass(frozen=True, eq=False)
class ModelConfig:
    """
    A model document as stored on disk.

    Attributes:
        d_a: Dimension of H_A
        d_b: Dimension of H_B
        h_a: Local Hamiltonian on A
        h_ab: Interaction on AB
        h_b: Local Hamiltonian on B
        jumps: Jump operators of D_A
        hamiltonian_part: K_L of D_A
        gamma: Single rate for validate/project/steady
        gamma_grid: Rates for scans and error tables
        seed: Seed for every randomized estimate
        normalize_trace: Re-center H to Tr H = 0 at construction
        tolerances: Tolerance overrides
        label: Free-form name
    """

    d_a: int
    d_b: int
    h_a: np.ndarray
    h_ab: np.ndarray
    h_b: np.ndarray
    jumps: tuple[np.ndarray, ...]
    hamiltonian_part: Optional[np.ndarray] = None
    gamma: float = 1.0
    gamma_grid: tuple[float, ...] = ()
    seed: int = 0
    normalize_trace: bool = True
    tolerances: Tolerances = field(default_factory=Tolerances)
    label: str = ""

    def __post_init__(self):
        for name in ("h_a", "h_ab", "h_b"):
            object.__setattr__(self, name, _frozen_array(getattr(self, name)))
        object.__setattr__(self, "jumps", tuple(_frozen_array(j) for j in self.jumps))
        if self.hamiltonian_part is not None:
            object.__setattr__(self, "hamiltonian_part", _frozen_array(self.hamiltonian_part))
        object.__setattr__(self, "gamma_grid", tuple(float(g) for g in self.gamma_grid))

    @property
    def rates(self) -> tuple[float, ...]:
        """The γ grid, or the single γ when no grid is given."""
        return self.gamma_grid or (float(self.gamma),)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        k_l = (
            self.hamiltonian_part
            if self.hamiltonian_part is not None
            else np.zeros((self.d_a, self.d_a))
        )
        return {
            "version": 1,
            "label": self.label,
            "dims": {"d_A": self.d_a, "d_B": self.d_b},
            "H_A": encode_matrix(self.h_a),
            "H_AB": encode_matrix(self.h_ab),
            "H_B": encode_matrix(self.h_b),
            "dissipator_A": {
                "jumps": encode_operator_list(self.jumps),
                "hamiltonian_part": encode_matrix(k_l),
            },
            "gamma": self.gamma,
            "gamma_grid": list(self.gamma_grid),
            "seed": self.seed,
            "normalize_trace": self.normalize_trace,
            "tolerances": self.tolerances.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> ModelConfig:
        """Create from dictionary (JSON deserialization)."""
        dissipator = data["dissipator_A"]
        k_l = dissipator.get("hamiltonian_part")
        return cls(
            d_a=int(data["dims"]["d_A"]),
            d_b=int(data["dims"]["d_B"]),
            h_a=decode_matrix(data["H_A"]),
            h_ab=decode_matrix(data["H_AB"]),
            h_b=decode_matrix(data["H_B"]),
            jumps=tuple(decode_matrix(j) for j in dissipator.get("jumps", [])),
            hamiltonian_part=decode_matrix(k_l) if k_l is not None else None,
            gamma=float(data.get("gamma", 1.0)),
            gamma_grid=tuple(float(g) for g in data.get("gamma_grid", [])),
            seed=int(data.get("seed", 0)),
            normalize_trace=bool(data.get("normalize_trace", True)),
            tolerances=Tolerances.from_dict(data.get("tolerances")),
            label=str(data.get("label", "")),
        )


@dataclass
class RunManifest:
    """
    Record of one command invocation and everything it wrote.

    Attributes:
        command: Command name
        config_digest: SHA-256 of the canonical config document
        seed: Seed in effect
        versions: Library versions
        stage_times: Wall time per stage in seconds
        outputs: Paths of emitted artifacts
        csv_contract: Version of the CSV column layout
        exit_code: Process exit code
    """

    command: str
    config_digest: str = ""
    seed: int = 0
    versions: dict[str, str] = field(default_factory=dict)
    stage_times: dict[str, float] = field(default_factory=dict)
    outputs: list[str] = field(default_factory=list)
    csv_contract: int = 1
    exit_code: int = 0

    def record_stage(self, name: str, seconds: float) -> None:
        self.stage_times[name] = self.stage_times.get(name, 0.0) + float(seconds)

    def add_output(self, path) -> None:
        path = str(path)
        if path not in self.outputs:
            self.outputs.append(path)

    def to_dict(self) -> dict:
        """Convert to dictionary for JSON serialization."""
        return {
            "version": 1,
            "command": self.command,
            "config_digest": self.config_digest,
            "seed": self.seed,
            "versions": dict(self.versions),
            "stage_times": dict(self.stage_times),
            "outputs": list(self.outputs),
            "csv_contract": self.csv_contract,
            "exit_code": self.exit_code,
        }

    @classmethod
    def from_dict(cls, data: dict) -> RunManifest:
        """Create from dictionary (JSON deserialization)."""
        return cls(
            command=data["command"],
            config_digest=data.get("config_digest", ""),
            seed=int(data.get("seed", 0)),
            versions=dict(data.get("versions", {})),
            stage_times={k: float(v) for k, v in data.get("stage_times", {}).items()},
            outputs=list(data.get("outputs", [])),
            csv_contract=int(data.get("csv_contract", 1)),
            exit_code=int(data.get("exit_code", 0)),
        )


@dataclass(frozen=True)
class AcceptanceCheck:
    """
    One pass/fail row of the example acceptance suite.

    Attributes:
        name: Short check identifier
        passed: Whether the check holds
        value: Measured quantity (deviation, slope, ratio)
        tolerance: Threshold the value was compared with
        detail: Human-readable context
    """

    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""


@dataclass(frozen=True)
class AcceptanceReport:
    """All checks of one acceptance run."""

    beta: float
    checks: tuple[AcceptanceCheck, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> tuple[AcceptanceCheck, ...]:
        return tuple(check for check in self.checks if not check.passed)


@dataclass
class CommandResult:
    """
    Outcome of one service command.

    Attributes:
        command: Command name
        exit_code: 0 on success, 1 when a check failed
        report: Ordered (key, value) lines for display
        outputs: Paths of written artifacts
    """

    command: str
    exit_code: int = 0
    report: list[tuple[str, str]] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)

    def add(self, key: str, value) -> None:
        self.report.append((key, str(value)))
