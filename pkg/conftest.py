import numpy as np
import pytest

from dirberg.dirichlet_poly.polynomial import DirichletPolynomial
from dirberg.measures.measures import AlphaMeasure
from dirberg.services.config import SuiteConfig

SEED = 20240101


@pytest.fixture
def mu0():
    return AlphaMeasure(0.0)


@pytest.fixture
def one_plus_two():
    """1 + 2^{-s}."""
    return DirichletPolynomial(np.array([1.0, 1.0], dtype=complex))


@pytest.fixture
def two_plus_three():
    """2^{-s} + 3^{-s}, the polynomial of the README example."""
    return DirichletPolynomial.from_terms({2: 1.0, 3: 1.0})


@pytest.fixture
def quick_suites():
    """Suite settings scaled down so that a whole suite runs in seconds."""
    return SuiteConfig(
        seed=SEED,
        samples=4096,
        binomial_max_n=10,
        binomial_degree=60,
        alternating_max=12,
        divisor_max_m=3,
        divisor_max_n=2000,
        zeta_power_n=300,
    )
