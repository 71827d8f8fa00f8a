"""
zeta(x), zeta'(x) and the log-weighted sums L_a(x) = sum (1 + log n)^a n^{-x} for real x > 1.

Each is a direct sum over n < N plus the Euler-Maclaurin tail
    integral_N^inf f + f(N) / 2 - f'(N) / 12
where the integral of (1 + log t)^a t^{-x} is e^{x-1} (x-1)^{-(a+1)} Gamma(a+1, (x-1)(1 + log N)).
"""
import logging
import math
from functools import lru_cache

import mpmath
import numpy as np

from dirberg import APP_NAME
from dirberg.services import constants
from dirberg.services.errors import DomainError

logger = logging.getLogger(APP_NAME)


@lru_cache(maxsize=4)
def _logs(N: int) -> np.ndarray:
    logs = np.log(np.arange(1, N, dtype=float))
    logs.setflags(write=False)
    return logs


def _check(x: float) -> float:
    x = float(x)
    if not x > 1:
        raise DomainError(f"the series converges only for x > 1, got {x}")
    return x


def log_weighted_tail(x: float, a: float, N: float) -> float:
    """integral from N to infinity of (1 + log t)^a t^{-x} dt."""
    x = _check(x)
    if a == 0:
        return N ** (1 - x) / (x - 1)
    u = (x - 1) * (1 + math.log(N))
    value = mpmath.exp(x - 1) * mpmath.power(x - 1, -(a + 1)) * mpmath.gammainc(a + 1, u)
    return float(value)


def log_weighted_zeta(x: float, a: float = 0.0, terms: int = constants.ZETA_TERMS, from_two: bool = False) -> float:
    """
    sum over n >= 1 of (1 + log n)^a n^{-x}; a = 0 is zeta(x), a = 1 is zeta(x) - zeta'(x).
    from_two drops the n = 1 term without cancellation.
    """
    x = _check(x)
    N = terms
    logs = _logs(N)[1:] if from_two else _logs(N)
    head = float(np.sum(np.exp(a * np.log1p(logs) - x * logs)))
    log_N = math.log(N)
    f_N = (1 + log_N) ** a * N ** (-x)
    f_prime_N = N ** (-x - 1) * (1 + log_N) ** (a - 1) * (a - x * (1 + log_N))
    return head + log_weighted_tail(x, a, N) + f_N / 2 - f_prime_N / 12


def zeta(x: float) -> float:
    return log_weighted_zeta(x, 0.0)


def zeta_minus_one(x: float) -> float:
    return log_weighted_zeta(x, 0.0, from_two=True)


def zeta_prime(x: float, terms: int = constants.ZETA_TERMS) -> float:
    """zeta'(x) = -sum log n n^{-x}."""
    x = _check(x)
    N = terms
    logs = _logs(N)
    head = float(np.sum(logs * np.exp(-x * logs)))
    log_N = math.log(N)
    tail = N ** (1 - x) * (log_N / (x - 1) + 1 / (x - 1) ** 2)
    f_N = log_N * N ** (-x)
    f_prime_N = N ** (-x - 1) * (1 - x * log_N)
    return -(head + tail + f_N / 2 - f_prime_N / 12)


def zeta_upper(x: float) -> float:
    """The elementary bound zeta(x) <= x / (x - 1)."""
    x = _check(x)
    return x / (x - 1)
