"""
Multiplicative number theory on [1, N]: factorization, divisor functions, Dirichlet
convolution, coefficients of zeta powers and truncated Euler products.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Tuple

import numpy as np
from scipy.special import exp1

from dirberg import APP_NAME
from dirberg.number_theory.primes import nth_prime, prime_index, primes_up_to
from dirberg.services import constants
from dirberg.services.errors import DomainError

logger = logging.getLogger(APP_NAME)


@dataclass(frozen=True, order=True)
class Exponents:
    """Factorization n = prod p_i^alpha_i as (prime_index, exponent) pairs, prime indices increasing."""
    entries: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        previous = 0
        for index, exponent in self.entries:
            if index <= previous:
                raise DomainError(f"prime indices must be strictly increasing: {self.entries}")
            if exponent < 1:
                raise DomainError(f"exponents must be positive: {self.entries}")
            previous = index

    def value(self) -> int:
        n = 1
        for index, exponent in self.entries:
            n *= nth_prime(index) ** exponent
        return n

    def total_degree(self) -> int:
        return sum(exponent for _, exponent in self.entries)

    def max_index(self) -> int:
        return self.entries[-1][0] if self.entries else 0

    def __mul__(self, other: "Exponents") -> "Exponents":
        merged = dict(self.entries)
        for index, exponent in other.entries:
            merged[index] = merged.get(index, 0) + exponent
        return Exponents(tuple(sorted(merged.items())))


@dataclass(frozen=True)
class ArithmeticSequence:
    """
    Values a(1), ..., a(N) stored densely (values[n - 1] = a(n)). Object dtype
    holds exact ints or Fractions.
    """
    values: np.ndarray

    @property
    def N(self) -> int:
        return len(self.values)

    @property
    def exact(self) -> bool:
        return self.values.dtype == object

    def __getitem__(self, n: int):
        if not 1 <= n <= self.N:
            raise DomainError(f"index {n} outside [1, {self.N}]")
        return self.values[n - 1]

    @classmethod
    def from_function(cls, f: Callable[[int], object], N: int, exact: bool = False) -> "ArithmeticSequence":
        dtype = object if exact else complex
        return cls(np.array([f(n) for n in range(1, N + 1)], dtype=dtype))

    @classmethod
    def ones(cls, N: int, exact: bool = False) -> "ArithmeticSequence":
        if exact:
            return cls(np.array([1] * N, dtype=object))
        return cls(np.ones(N))

    @classmethod
    def delta(cls, N: int, exact: bool = False) -> "ArithmeticSequence":
        values = np.array([0] * N, dtype=object) if exact else np.zeros(N)
        values[0] = 1
        return cls(values)

    def to_list(self) -> list:
        return list(self.values)


def factorize(n: int) -> Exponents:
    if not 1 <= n <= constants.SUPPORTED_BOUND:
        raise DomainError(f"n must lie in [1, {constants.SUPPORTED_BOUND}], got {n}")
    entries = []
    remaining = n
    for index, p in enumerate(primes_up_to(math.isqrt(n)), start=1):
        p = int(p)
        if p * p > remaining:
            break
        if remaining % p == 0:
            exponent = 0
            while remaining % p == 0:
                remaining //= p
                exponent += 1
            entries.append((index, exponent))
    if remaining > 1:
        entries.append((prime_index(remaining), 1))
    return Exponents(tuple(entries))


def divisor_count(n: int) -> int:
    result = 1
    for _, exponent in factorize(n).entries:
        result *= exponent + 1
    return result


def generalized_divisor(m: int, n: int) -> int:
    """d_m(n), the number of ordered factorizations of n into m factors."""
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    result = 1
    for _, exponent in factorize(n).entries:
        result *= math.comb(m + exponent - 1, m - 1)
    return result


def prime_omega_table(N: int) -> np.ndarray:
    """Omega(n) for n <= N: number of prime factors counted with multiplicity."""
    omega = np.zeros(N, dtype=np.int64)
    for p in primes_up_to(N):
        pk = int(p)
        while pk <= N:
            omega[pk - 1::pk] += 1
            pk *= int(p)
    return omega


def multiplicative_table(N: int, local: Callable[[int, int], object], dtype=np.int64) -> np.ndarray:
    """
    Dense table of the multiplicative function with f(p^k) = local(p, k), built per prime
    from exponent counts on the multiples of p.
    """
    values = np.ones(N, dtype=dtype) if dtype != object else np.array([1] * N, dtype=object)
    for p in primes_up_to(N):
        p = int(p)
        if p * p > N:
            values[p - 1::p] *= local(p, 1)
            continue
        exponents = np.zeros(N // p, dtype=np.int64)
        pk = p
        while pk <= N:
            exponents[pk // p - 1::pk // p] += 1
            pk *= p
        factors = np.array([1] + [local(p, k) for k in range(1, int(exponents.max()) + 1)], dtype=dtype)
        values[p - 1::p] *= factors[exponents]
    return values


def generalized_divisor_table(m: int, N: int) -> np.ndarray:
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    # d_m(n) <= m ** log2(n)
    dtype = np.int64 if math.log2(max(N, 2)) * math.log2(max(m, 2)) < 62 else object
    return multiplicative_table(N, lambda p, k: math.comb(m + k - 1, m - 1), dtype=dtype)


def divisor_count_table(N: int) -> np.ndarray:
    return generalized_divisor_table(2, N)


def dirichlet_convolve(a: ArithmeticSequence, b: ArithmeticSequence) -> ArithmeticSequence:
    """(a * b)(n) = sum over d | n of a(d) b(n/d), by the divisor-pair loop."""
    if a.N != b.N:
        raise DomainError(f"length mismatch: {a.N} != {b.N}")
    N = a.N
    exact = a.exact or b.exact
    if exact:
        out = np.array([0] * N, dtype=object)
    else:
        out = np.zeros(N, dtype=np.result_type(a.values, b.values))
    for d in range(1, N + 1):
        ad = a.values[d - 1]
        if ad == 0:
            continue
        out[d - 1::d] += ad * b.values[: N // d]
    return ArithmeticSequence(out)


def convolution_power(a: ArithmeticSequence, m: int) -> ArithmeticSequence:
    result = ArithmeticSequence.delta(a.N, exact=a.exact)
    for _ in range(m):
        result = dirichlet_convolve(result, a)
    return result


def binomial_series_coefficient(q, k: int):
    """C(q + k - 1, k) = q (q + 1) ... (q + k - 1) / k!, exact when q is int or Fraction."""
    coefficient = Fraction(1) if isinstance(q, (int, Fraction)) else 1.0
    for j in range(k):
        coefficient = coefficient * (q + j) / (j + 1)
    return coefficient


def zeta_power_coeffs(q, N: int) -> ArithmeticSequence:
    """
    Coefficients of zeta^q through its Euler product: multiplicative, with value
    C(q + k - 1, k) at p^k. Integer or Fraction q gives exact values.
    """
    if not q > 0:
        raise DomainError(f"q must be > 0, got {q}")
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    exact = isinstance(q, (int, Fraction))
    if isinstance(q, int):
        dtype = object
        local = lambda p, k: math.comb(q + k - 1, k)
    elif exact:
        dtype = object
        local = lambda p, k: binomial_series_coefficient(q, k)
    else:
        dtype = float
        local = lambda p, k: binomial_series_coefficient(float(q), k)
    return ArithmeticSequence(multiplicative_table(N, local, dtype=dtype))


def dirichlet_power(a: ArithmeticSequence, q: float, N: int = None) -> ArithmeticSequence:
    """
    Real power of a Dirichlet series with a(1) != 0 (principal branch at n = 1), from
    g(n) log n = sum over d | n, d > 1 of a(d) g(n/d) ((q + 1) log d - log n).
    """
    N = a.N if N is None else N
    if N > a.N:
        raise DomainError(f"N={N} exceeds the sequence length {a.N}")
    values = np.asarray(a.values[:N], dtype=complex)
    leading = values[0]
    if leading == 0:
        raise DomainError("dirichlet_power needs a(1) != 0")
    values = values / leading
    logs = np.log(np.arange(1, N + 1, dtype=float))
    accumulated = np.zeros(N, dtype=complex)
    g = np.zeros(N, dtype=complex)
    g[0] = 1.0
    for m in range(1, N + 1):
        if m > 1:
            g[m - 1] = accumulated[m - 1] / logs[m - 1]
        if g[m - 1] == 0 or 2 * m > N:
            continue
        d = np.arange(2, N // m + 1)
        accumulated[2 * m - 1::m] += values[d - 1] * g[m - 1] * ((q + 1) * logs[d - 1] - logs[m * d - 1])
    g *= leading ** q
    if np.all(g.imag == 0):
        g = g.real
    return ArithmeticSequence(g)


@dataclass(frozen=True)
class EulerProduct:
    value: float
    truncation_estimate: float
    primes_used: int


def euler_product(local_factor: Callable, P_max: int) -> EulerProduct:
    """
    Product of local_factor(p) over primes p <= P_max. local_factor receives the prime array;
    scalar-only callables are applied prime by prime. The truncation estimate is
    |log of the product over the last 10% of primes|.
    """
    primes = primes_up_to(P_max)
    if len(primes) == 0:
        return EulerProduct(1.0, 0.0, 0)
    factors = _apply_local(local_factor, primes)
    if np.any(factors <= 0):
        bad = int(primes[np.argmax(factors <= 0)])
        raise DomainError(f"local factor must be positive, got {factors[np.argmax(factors <= 0)]} at p={bad}")
    logs = np.log(factors)
    tail_start = len(primes) - max(1, len(primes) // 10)
    estimate = float(abs(np.sum(logs[tail_start:])))
    return EulerProduct(float(np.exp(np.sum(logs))), estimate, len(primes))


def _apply_local(local_factor: Callable, primes: np.ndarray) -> np.ndarray:
    try:
        values = np.asarray(local_factor(primes.astype(float)), dtype=float)
        if values.shape == primes.shape:
            return values
        if values.ndim == 0:
            return np.full(primes.shape, float(values))
    except (TypeError, ValueError):
        pass
    return np.array([float(local_factor(int(p))) for p in primes])


def prime_power_tail(P: float, a: float) -> float:
    """
    Sum over primes p > P of p^{-a}, a > 1, by the prime number theorem:
    integral from P to infinity of t^{-a} / log t dt = E_1((a - 1) log P).
    """
    if not a > 1:
        raise DomainError(f"the prime sum converges only for a > 1, got {a}")
    if P < 2:
        raise DomainError(f"P must be >= 2, got {P}")
    return float(exp1((a - 1) * math.log(P)))
