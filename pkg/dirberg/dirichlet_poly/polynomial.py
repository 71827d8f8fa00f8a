"""
Dirichlet polynomials f(s) = sum_{n <= N} a_n n^{-s}, their Bohr lifts to polynomials in
the prime variables z_j = p_j^{-s}, and character twists.
"""
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Dict, Mapping, Optional, Sequence, Union

import numpy as np

from dirberg import APP_NAME
from dirberg.number_theory.arithmetic import ArithmeticSequence, Exponents, factorize, prime_omega_table
from dirberg.number_theory.primes import first_primes, primes_up_to
from dirberg.services import constants
from dirberg.services.errors import BudgetExceeded, DomainError
from dirberg.services.output import format_float

logger = logging.getLogger(APP_NAME)

LOG_CACHE_FROM = 10_000
UNIT_TOL = 1e-12


@lru_cache(maxsize=8)
def _cached_logs(N: int) -> np.ndarray:
    logs = np.log(np.arange(1, N + 1, dtype=float))
    logs.setflags(write=False)
    return logs


def log_table(N: int) -> np.ndarray:
    if N > LOG_CACHE_FROM:
        return _cached_logs(N)
    return np.log(np.arange(1, N + 1, dtype=float))


@dataclass(frozen=True)
class DirichletPolynomial:
    """
    Dense coefficients a_1..a_N (coeffs[n - 1] = a_n); a_n = 0 beyond N.
    Object dtype keeps exact int/Fraction coefficients.
    """
    coeffs: np.ndarray

    def __post_init__(self):
        if self.coeffs.ndim != 1 or len(self.coeffs) < 1:
            raise DomainError("a Dirichlet polynomial needs at least the coefficient a_1")

    @property
    def N(self) -> int:
        return len(self.coeffs)

    @property
    def exact(self) -> bool:
        return self.coeffs.dtype == object

    @property
    def value_at_infinity(self):
        return self.coeffs[0]

    def coefficient(self, n: int):
        return self.coeffs[n - 1] if 1 <= n <= self.N else 0

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.coeffs != 0) + 1

    def as_complex(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)

    def terms(self) -> Dict[int, object]:
        return {int(n): self.coeffs[n - 1] for n in self.support()}

    def __eq__(self, other):
        if not isinstance(other, DirichletPolynomial):
            return NotImplemented
        return self.terms() == other.terms()

    def __hash__(self):
        return hash(tuple(sorted(self.terms().items())))

    @classmethod
    def from_terms(cls, terms: Mapping[int, object], N: Optional[int] = None, exact: bool = False) -> "DirichletPolynomial":
        top = max(terms, default=1)
        N = top if N is None else N
        if top > N:
            raise DomainError(f"term index {top} exceeds N={N}")
        if exact:
            coeffs = np.array([0] * N, dtype=object)
        else:
            coeffs = np.zeros(N, dtype=complex)
        for n, a in terms.items():
            if n < 1:
                raise DomainError(f"term index must be >= 1, got {n}")
            coeffs[n - 1] = a
        return cls(coeffs)

    @classmethod
    def constant(cls, c=1.0) -> "DirichletPolynomial":
        return cls.from_terms({1: c}, exact=isinstance(c, (int, Fraction)))

    @classmethod
    def monomial(cls, n: int, a=1.0) -> "DirichletPolynomial":
        return cls.from_terms({n: a}, exact=isinstance(a, (int, Fraction)))

    @classmethod
    def from_sequence(cls, sequence: ArithmeticSequence) -> "DirichletPolynomial":
        return cls(np.array(sequence.values, dtype=object if sequence.exact else complex))

    @classmethod
    def truncated_zeta(cls, N: int, sigma: float = 0.0) -> "DirichletPolynomial":
        """Partial sum of zeta(sigma + s) up to N."""
        return cls(np.exp(-sigma * log_table(N)).astype(complex))


def evaluate(f: DirichletPolynomial, s):
    """sum a_n exp(-s log n); s may be a scalar or an array."""
    logs = log_table(f.N)
    a = f.as_complex()
    support = np.flatnonzero(a)
    if np.ndim(s) == 0:
        return complex(np.sum(a[support] * np.exp(-complex(s) * logs[support])))
    s = np.asarray(s, dtype=complex)
    return np.exp(-np.multiply.outer(s, logs[support])) @ a[support]


def translate(f: DirichletPolynomial, sigma: float) -> DirichletPolynomial:
    """T_sigma f: coefficients a_n n^{-sigma}."""
    if sigma < 0:
        raise DomainError(f"translation needs sigma >= 0, got {sigma}")
    if sigma == 0:
        return f
    return DirichletPolynomial(f.as_complex() * np.exp(-sigma * log_table(f.N)))


def vertical_translate(f: DirichletPolynomial, t: float) -> DirichletPolynomial:
    """Coefficients a_n n^{-it}, i.e. s -> s + it."""
    return DirichletPolynomial(f.as_complex() * np.exp(-1j * t * log_table(f.N)))


def derivative(f: DirichletPolynomial) -> DirichletPolynomial:
    return DirichletPolynomial(-f.as_complex() * log_table(f.N))


def dilate(f: DirichletPolynomial, r: float) -> DirichletPolynomial:
    """Coefficients a_n r^{Omega(n)}: the lifted polynomial evaluated at r z."""
    omega = prime_omega_table(f.N)
    if f.exact and isinstance(r, (int, Fraction)):
        return DirichletPolynomial(np.array([a * Fraction(r) ** int(k) for a, k in zip(f.coeffs, omega)], dtype=object))
    return DirichletPolynomial(f.as_complex() * np.power(float(r), omega))


def multiply(f: DirichletPolynomial, g: DirichletPolynomial, N_out: Optional[int] = None) -> DirichletPolynomial:
    """Dirichlet convolution of the coefficients truncated at N_out (exact when N_out = N_f N_g)."""
    full = f.N * g.N
    N_out = full if N_out is None else N_out
    if not 1 <= N_out <= full:
        raise DomainError(f"N_out must lie in [1, {full}], got {N_out}")
    exact = f.exact and g.exact
    if exact:
        out = np.array([0] * N_out, dtype=object)
        b = g.coeffs
    else:
        out = np.zeros(N_out, dtype=complex)
        b = g.as_complex()
    if len(f.support()) > len(g.support()):
        f, g = g, f
        b = g.coeffs if exact else g.as_complex()
    for d in f.support():
        d = int(d)
        if d > N_out:
            break
        count = min(g.N, N_out // d)
        a_d = f.coeffs[d - 1] if exact else complex(f.coeffs[d - 1])
        out[d - 1: d * count: d] += a_d * b[:count]
    return DirichletPolynomial(out)


def power(f: DirichletPolynomial, m: int, budget: Optional[int] = None) -> DirichletPolynomial:
    """Untruncated f^m; refuses products longer than the coefficient budget."""
    if m < 0:
        raise DomainError(f"power must be >= 0, got {m}")
    budget = constants.COEFF_BUDGET if budget is None else budget
    top = int(f.support().max()) if len(f.support()) else 1
    length = top ** m
    if length > budget:
        raise BudgetExceeded(f"f^{m} needs {length} coefficients, budget is {budget}")
    core = DirichletPolynomial(f.coeffs[:top])
    result = DirichletPolynomial.constant(1 if f.exact else 1.0)
    for _ in range(m):
        result = multiply(result, core)
    return result


def exponent_matrix(ns: Sequence[int], K: int) -> np.ndarray:
    """
    Row i holds the exponents of the first K primes in ns[i]. Raises DomainError
    when some n has a prime factor beyond the K-th prime.
    """
    ns = np.asarray(ns, dtype=np.int64)
    primes = first_primes(K)
    matrix = np.zeros((len(ns), K), dtype=np.int64)
    remaining = ns.copy()
    for j, p in enumerate(primes):
        divisible = remaining % p == 0
        while np.any(divisible):
            matrix[divisible, j] += 1
            remaining[divisible] //= p
            divisible = remaining % p == 0
    if np.any(remaining != 1):
        bad = int(ns[np.argmax(remaining != 1)])
        raise DomainError(f"insufficient character length: K={K} does not cover the prime factors of {bad}")
    return matrix


def required_primes(f: DirichletPolynomial) -> int:
    """Number K of leading primes that covers every index of the support of f."""
    support = f.support()
    primes = primes_up_to(f.N)
    largest_factor = np.ones(f.N, dtype=np.int64)
    for p in primes:
        largest_factor[p - 1::p] = p
    top = int(largest_factor[support - 1].max()) if len(support) else 1
    return max(1, int(np.searchsorted(primes, top, side="right")))


@dataclass(frozen=True)
class MultiPolynomial:
    """Polynomial in the prime variables z_1, z_2, ...: Exponents -> coefficient."""
    terms: Mapping[Exponents, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", MappingProxyType({k: v for k, v in dict(self.terms).items() if v != 0}))

    def __mul__(self, other: "MultiPolynomial") -> "MultiPolynomial":
        product = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = e1 * e2
                product[key] = product.get(key, 0) + c1 * c2
        return MultiPolynomial(product)

    def __eq__(self, other):
        if not isinstance(other, MultiPolynomial):
            return NotImplemented
        return dict(self.terms) == dict(other.terms)

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def num_variables(self) -> int:
        return max((e.max_index() for e in self.terms), default=0)


def bohr_lift(f: DirichletPolynomial) -> MultiPolynomial:
    return MultiPolynomial({factorize(int(n)): f.coeffs[n - 1] for n in f.support()})


def bohr_drop(F: MultiPolynomial) -> DirichletPolynomial:
    terms = {e.value(): c for e, c in F.terms.items()}
    exact = all(isinstance(c, (int, Fraction)) for c in terms.values())
    return DirichletPolynomial.from_terms(terms or {1: 0}, exact=exact)


def evaluate_lift(F: MultiPolynomial, z: Sequence[complex]) -> complex:
    z = np.asarray(z, dtype=complex)
    total = 0j
    for exponents, c in F.terms.items():
        if exponents.max_index() > len(z):
            raise DomainError(f"point has {len(z)} coordinates, term needs {exponents.max_index()}")
        monomial = 1 + 0j
        for index, exponent in exponents.entries:
            monomial *= z[index - 1] ** exponent
        total += complex(c) * monomial
    return total


@dataclass(frozen=True)
class Character:
    """
    Truncated point chi = (chi_1, ..., chi_K) of the polytorus (|chi_j| = 1) or the
    open polydisk (|chi_j| < 1); chi(n) = prod chi_j^alpha_j.
    """
    coords: np.ndarray
    mode: str = "torus"

    def __post_init__(self):
        coords = np.asarray(self.coords)
        object.__setattr__(self, "coords", coords)
        moduli = np.abs(coords.astype(complex))
        if self.mode == "torus":
            if np.any(np.abs(moduli - 1) > UNIT_TOL):
                raise DomainError("torus characters need |chi_j| = 1")
        elif self.mode == "polydisk":
            if np.any(moduli >= 1):
                raise DomainError("polydisk characters need |chi_j| < 1")
        else:
            raise DomainError(f"unknown character mode {self.mode}")

    @property
    def K(self) -> int:
        return len(self.coords)

    @classmethod
    def trivial(cls, K: int) -> "Character":
        return cls(np.ones(K, dtype=complex))

    @classmethod
    def vertical(cls, t: float, K: int) -> "Character":
        """chi_j = p_j^{-it}: the Kronecker flow at time t."""
        return cls(np.exp(-1j * t * np.log(first_primes(K).astype(float))))

    @classmethod
    def at_point(cls, s: complex, K: int) -> "Character":
        """chi_j = p_j^{-s} for Re s > 0."""
        if s.real <= 0:
            raise DomainError(f"p^-s lies in the open disk only for Re s > 0, got {s}")
        return cls(np.exp(-complex(s) * np.log(first_primes(K).astype(float))), mode="polydisk")

    def conjugate(self) -> "Character":
        if self.coords.dtype == object:
            return Character(np.array([c.conjugate() if hasattr(c, "conjugate") else c for c in self.coords], dtype=object), self.mode)
        return Character(np.conj(self.coords), self.mode)

    def values(self, ns: Sequence[int]) -> np.ndarray:
        matrix = exponent_matrix(ns, self.K)
        if self.coords.dtype == object:
            out = []
            for row in matrix:
                value = 1
                for c, e in zip(self.coords, row):
                    if e:
                        value *= c ** int(e)
                out.append(value)
            return np.array(out, dtype=object)
        return np.prod(np.power(self.coords.astype(complex)[None, :], matrix), axis=1)


def twist(f: DirichletPolynomial, chi: Character) -> DirichletPolynomial:
    """f_chi: coefficients a_n chi(n). chi must cover every prime of the support."""
    support = f.support()
    if f.exact and chi.coords.dtype == object:
        coeffs = np.array([0] * f.N, dtype=object)
        coeffs[support - 1] = f.coeffs[support - 1] * chi.values(support)
    else:
        coeffs = np.zeros(f.N, dtype=complex)
        if len(support):
            coeffs[support - 1] = f.as_complex()[support - 1] * chi.values(support)
    return DirichletPolynomial(coeffs)


def to_json(f: DirichletPolynomial) -> str:
    terms = []
    for n in f.support():
        a = complex(f.coeffs[n - 1])
        terms.append(f"[{int(n)}, {format_float(a.real)}, {format_float(a.imag)}]")
    return '{"N": ' + str(f.N) + ', "coeffs": [' + ", ".join(terms) + "]}"


def from_json(text: Union[str, dict]) -> DirichletPolynomial:
    data = json.loads(text) if isinstance(text, str) else text
    try:
        N = int(data["N"])
        terms = {}
        for entry in data["coeffs"]:
            n, re = int(entry[0]), float(entry[1])
            im = float(entry[2]) if len(entry) > 2 else 0.0
            terms[n] = terms.get(n, 0) + complex(re, im)
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise DomainError(f"malformed polynomial JSON: {e}")
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    return DirichletPolynomial.from_terms(terms, N=N)
