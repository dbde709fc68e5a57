"""
Domain Layer - numerics and workflows without I/O dependencies.

This layer contains:
- Models (operators, superoperators, model configs, reports)
- Reduction numerics (projections, Davies average, steady expansion, scans)
- Services (ReductionService, ModelValidator, acceptance suite)
- Domain exceptions

Adapters for files and manifests live in ``src.infra``.
"""

from src.domain.errors import (
    ConfigError,
    DomainError,
    EpsilonRangeError,
    ExtractionUnavailableError,
    HierarchyResidualError,
    InvalidGeneratorError,
    ModelInvariantError,
    NonTracelessError,
    NotErgodicError,
    NumericalBreakdownError,
    ScanGridError,
    SpaceMismatchError,
)
from src.domain.models import (
    CompositeModel,
    LindbladSpec,
    ModelConfig,
    Operator,
    SpaceKind,
    SpaceTag,
    SuperOperator,
    TheoremTag,
    Tolerances,
    ZenoObjects,
)

__all__ = [
    # Models
    "CompositeModel",
    "LindbladSpec",
    "ModelConfig",
    "Operator",
    "SpaceKind",
    "SpaceTag",
    "SuperOperator",
    "TheoremTag",
    "Tolerances",
    "ZenoObjects",
    # Errors
    "ConfigError",
    "DomainError",
    "EpsilonRangeError",
    "ExtractionUnavailableError",
    "HierarchyResidualError",
    "InvalidGeneratorError",
    "ModelInvariantError",
    "NonTracelessError",
    "NotErgodicError",
    "NumericalBreakdownError",
    "ScanGridError",
    "SpaceMismatchError",
]
