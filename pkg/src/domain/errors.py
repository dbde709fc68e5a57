"""
Domain exceptions for ZenoLimit.

All exceptions carry a short user-facing message that the command line
prints as-is, next to the technical message that goes to the log.
"""

from typing import Optional


class DomainError(Exception):
    """Base exception for all domain errors."""

    def __init__(self, message: str, user_message: str):
        """
        Initialize domain error.

        Args:
            message: Technical message for logging/debugging
            user_message: Short message for display
        """
        super().__init__(message)
        self.user_message = user_message


class SpaceMismatchError(DomainError):
    """Raised when operator shapes or space tags do not fit together."""

    def __init__(self, message: str = "Space mismatch"):
        super().__init__(
            message=message,
            user_message="Operator dimensions do not match the declared spaces.",
        )


class InvalidGeneratorError(DomainError):
    """Raised when a Lindblad specification is malformed."""

    def __init__(self, message: str = "Invalid Lindblad specification"):
        super().__init__(
            message=message,
            user_message="The dissipator specification is not a valid Lindblad form.",
        )


class ModelInvariantError(DomainError):
    """Raised when a model invariant fails; names the failing quantity."""

    def __init__(self, quantity: str, value: float = float("nan"), tolerance: float = 0.0):
        self.quantity = quantity
        self.value = value
        self.tolerance = tolerance
        super().__init__(
            message=f"Invariant '{quantity}' violated: value {value:.3e} exceeds {tolerance:.1e}",
            user_message=f"Model check failed: {quantity}.",
        )


class NotErgodicError(DomainError):
    """Raised when a generator that must be ergodic and gapped is not."""

    def __init__(self, generator: str = "generator", gap: float = 0.0, reason: str = ""):
        self.generator = generator
        self.gap = gap
        detail = f" ({reason})" if reason else ""
        super().__init__(
            message=f"{generator} is not ergodic and gapped: gap={gap:.3e}{detail}",
            user_message=f"{generator} is not ergodic (no unique gapped steady state).",
        )


class ExtractionUnavailableError(DomainError):
    """Raised when the explicit jump-operator form of D_P cannot be built."""

    def __init__(self, message: str = "Jump-operator extraction unavailable"):
        super().__init__(
            message=message,
            user_message="D_A is not safely diagonalizable; only the D_P superoperator "
            "is available.",
        )


class NumericalBreakdownError(DomainError):
    """Raised when a quantity that is positive in exact arithmetic is not."""

    def __init__(self, message: str = "Numerical breakdown"):
        super().__init__(
            message=message,
            user_message="A numerical consistency check failed; results are unreliable.",
        )


class NonTracelessError(DomainError):
    """Raised when a traceless operator is required."""

    def __init__(self, trace: complex = 0j):
        super().__init__(
            message=f"Operator must be traceless, got trace {trace:.3e}",
            user_message="Input operator must have zero trace.",
        )


class HierarchyResidualError(DomainError):
    """Raised when an order of the steady-state hierarchy fails its residual check."""

    def __init__(self, order: int, residual: float, tolerance: float):
        self.order = order
        self.residual = residual
        super().__init__(
            message=f"Hierarchy order {order}: residual {residual:.3e} > {tolerance:.1e}",
            user_message=f"Steady-state expansion failed at order {order}.",
        )


class ParameterRangeError(DomainError):
    """Raised when a numerical argument is outside its admissible range."""

    def __init__(self, name: str, value, allowed: str):
        self.name = name
        self.value = value
        super().__init__(
            message=f"{name} must be {allowed}, got {value}",
            user_message=f"Invalid {name}: expected {allowed}.",
        )


class ScanGridError(DomainError):
    """Raised when a rate grid cannot support a scaling fit."""

    def __init__(self, message: str = "Rate grid too small for a fit"):
        super().__init__(
            message=message,
            user_message="Provide at least three increasing gamma values.",
        )


class EpsilonRangeError(DomainError):
    """Raised when a mixing threshold is outside (0, upper)."""

    def __init__(self, epsilon: float = 0.0, upper: float = 0.5):
        super().__init__(
            message=f"epsilon must lie in (0, {upper}), got {epsilon}",
            user_message=f"Mixing threshold must be strictly between 0 and {upper}.",
        )


class ConfigError(DomainError):
    """Raised when a model configuration cannot be read or parsed."""

    def __init__(self, message: str = "Invalid configuration", user_message: Optional[str] = None):
        super().__init__(
            message=message,
            user_message=user_message or "The configuration file could not be read.",
        )
