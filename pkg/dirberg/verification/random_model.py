"""
Random Dirichlet polynomials for the inequality suites: degree N uniform in
[min_degree, max_degree], complex Gaussian coefficients, scaled to unit H^2 norm.
Everything is drawn from one numpy Generator so a seed fixes the whole trial list.
"""
from typing import List, Tuple

import numpy as np

from dirberg.dirichlet_poly.polynomial import DirichletPolynomial
from dirberg.services.errors import DomainError


def trial_generator(seed: int, stream: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, stream, 0]))


def _degree(rng: np.random.Generator, degree_range: Tuple[int, int]) -> int:
    lo, hi = degree_range
    if not 1 <= lo <= hi:
        raise DomainError(f"degree range must satisfy 1 <= lo <= hi, got {degree_range}")
    return int(rng.integers(lo, hi + 1))


def random_polynomial(rng: np.random.Generator, degree_range: Tuple[int, int] = (1, 30),
                      normalize: bool = True) -> DirichletPolynomial:
    N = _degree(rng, degree_range)
    coeffs = (rng.standard_normal(N) + 1j * rng.standard_normal(N)) / np.sqrt(2)
    if normalize:
        coeffs /= np.sqrt(np.sum(np.abs(coeffs) ** 2))
    return DirichletPolynomial(coeffs)


def random_polynomials(seed: int, count: int, degree_range: Tuple[int, int] = (1, 30),
                       stream: int = 0) -> List[DirichletPolynomial]:
    rng = trial_generator(seed, stream)
    return [random_polynomial(rng, degree_range) for _ in range(count)]


def random_gaussian_integers(rng: np.random.Generator, degree_range: Tuple[int, int] = (1, 200),
                             scale: int = 100) -> Tuple[np.ndarray, np.ndarray]:
    N = _degree(rng, degree_range)
    re = np.rint(scale * rng.standard_normal(N)).astype(np.int64)
    im = np.rint(scale * rng.standard_normal(N)).astype(np.int64)
    return re, im
