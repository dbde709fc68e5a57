"""
Shared pytest fixtures for ZenoLimit tests.
"""

import shutil
import tempfile
from pathlib import Path

import numpy as np
import pytest

from src.domain.example_model import build_example_model, example_parameter, random_model
from src.domain.zeno_reduction import build_zeno_objects

BETA = 1.0


@pytest.fixture
def temp_dir():
    """Create a temporary directory for test files."""
    tmp = tempfile.mkdtemp()
    yield Path(tmp)
    shutil.rmtree(tmp, ignore_errors=True)


@pytest.fixture
def rng():
    """Seeded generator; every test gets the same stream."""
    return np.random.default_rng(1234)


@pytest.fixture
def t_param():
    """t = tanh(β/2) of the example at β = 1."""
    return example_parameter(BETA)


@pytest.fixture(scope="session")
def example_model():
    """Two-qubit example at β = 1, γ = 10."""
    return build_example_model(BETA, gamma=10.0)


@pytest.fixture(scope="session")
def example_zeno(example_model):
    """Reduction objects of the example."""
    return build_zeno_objects(example_model)


@pytest.fixture
def random_model_factory():
    """Factory for seeded random models."""

    def _create(seed: int = 0, d_a: int = 2, d_b: int = 2, n_jumps: int = 2, gamma: float = 1.0):
        return random_model(np.random.default_rng(seed), d_a, d_b, n_jumps, gamma)

    return _create
