from __future__ import annotations

import pytest

from altgd import InitConfig, Rng, SpectrumSpec, make_matrix

FIG1_ETA = 0.0683
MATRIX_STREAM = 2**63


@pytest.fixture(scope="session")
def fig1_matrix():
    """The reference 100x100 rank-5 instance with spectrum 1.0 .. 0.5."""
    spec = SpectrumSpec.linspace(100, 100, 1.0, 0.5, 5)
    return make_matrix(Rng(777, MATRIX_STREAM), spec)


@pytest.fixture(scope="session")
def fig1_matrix_alt():
    """Same instance shape drawn from a different matrix seed; used by the
    statistical initialization-event tests."""
    spec = SpectrumSpec.linspace(100, 100, 1.0, 0.5, 5)
    return make_matrix(Rng(101, MATRIX_STREAM), spec)


@pytest.fixture(scope="session")
def fig1_init_config():
    return InitConfig(c=4.0, nu=1e-10, eta=FIG1_ETA, d=6)
