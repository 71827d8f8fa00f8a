"""
Exact identities: binomial generating functions, divisor-function consistency, weight
closed forms and the Kronecker flow. Integer checks run on Python ints with tolerance 0.
"""
import logging
import math
from fractions import Fraction
from typing import List, Sequence

import numpy as np

from dirberg import APP_NAME
from dirberg.dirichlet_poly.polynomial import Character, DirichletPolynomial, evaluate, required_primes, twist, vertical_translate
from dirberg.measures.measures import AlphaMeasure, bergman_weight, bergman_weight_quadrature
from dirberg.number_theory.arithmetic import (
    ArithmeticSequence,
    convolution_power,
    dirichlet_convolve,
    dirichlet_power,
    generalized_divisor,
    generalized_divisor_table,
    zeta_power_coeffs,
)
from dirberg.services.config import SuiteConfig
from dirberg.services.errors import DomainError
from dirberg.verification.random_model import random_polynomials
from dirberg.verification.report import VerificationReport, combine, compare, timed

logger = logging.getLogger(APP_NAME)


def verify_binomial_identity(n: int, K: int) -> VerificationReport:
    """
    (sum_{k<=K} C(n+k, n)^2 z^k) (1 - z)^{2n+1} against sum_k C(n, k)^2 z^k. Coefficients of
    degree <= K only involve the kept terms, so every one of them is compared.
    """
    if n < 0 or K < 0:
        raise DomainError(f"n and K must be >= 0, got n={n}, K={K}")
    series = [math.comb(n + k, n) ** 2 for k in range(K + 1)]
    factor = [(-1) ** j * math.comb(2 * n + 1, j) for j in range(2 * n + 2)]
    gap = 0
    for k in range(K + 1):
        c = sum(factor[j] * series[k - j] for j in range(min(k, 2 * n + 1) + 1))
        gap += abs(c - math.comb(n, k) ** 2)
    return compare("binomial_identity", gap, 0, 0.0, {"n": n, "K": K})


def verify_alternating_sum(n: int, m: int) -> VerificationReport:
    """sum_{j <= min(m, 2n+1)} (-1)^j C(2n+1, j) C(n+m-j, n)^2 = C(n, m)^2."""
    if n < 1 or m < 1:
        raise DomainError(f"n and m must be >= 1, got n={n}, m={m}")
    lhs = sum((-1) ** j * math.comb(2 * n + 1, j) * math.comb(n + m - j, n) ** 2 for j in range(min(m, 2 * n + 1) + 1))
    return compare("alternating_sum", lhs, math.comb(n, m) ** 2, 0.0, {"n": n, "m": m})


@timed
def binomial_identities(max_n: int, K: int) -> VerificationReport:
    return combine("binomial_identity", [verify_binomial_identity(n, K) for n in range(max_n + 1)],
                   {"max_n": max_n, "K": K})


@timed
def alternating_sums(max_nm: int) -> VerificationReport:
    reports = [verify_alternating_sum(n, m) for n in range(1, max_nm + 1) for m in range(1, max_nm + 1)]
    return combine("alternating_sum", reports, {"max_n": max_nm, "max_m": max_nm})


@timed
def divisor_consistency(max_m: int, N: int, max_k: int = 20) -> VerificationReport:
    """Sieved d_m against the m-fold convolution of 1, and d_m(2^k) = C(m+k-1, m-1)."""
    ones = ArithmeticSequence(np.ones(N, dtype=np.int64))
    convolved = convolution_power(ones, 1)
    mismatches = 0
    for m in range(1, max_m + 1):
        if m > 1:
            convolved = dirichlet_convolve(convolved, ones)
        sieved = generalized_divisor_table(m, N)
        mismatches += int(np.count_nonzero(np.asarray(sieved, dtype=float) != convolved.values))
        for k in range(max_k + 1):
            if generalized_divisor(m, 2 ** k) != math.comb(m + k - 1, m - 1):
                mismatches += 1
    return compare("divisor_consistency", mismatches, 0, 0.0, {"max_m": max_m, "N": N, "max_k": max_k})


@timed
def weight_closed_form(alphas: Sequence[float], n_max: int = 10_000, points: int = 25,
                       tol: float = 1e-9) -> VerificationReport:
    """QUADPACK w_n for mu_alpha against (1 + log n)^{-1-alpha}."""
    ns = np.unique(np.geomspace(2, n_max, points).round())
    worst, where = 0.0, None
    for alpha in alphas:
        mu = AlphaMeasure(alpha)
        for n in ns:
            gap = abs(bergman_weight_quadrature(mu, float(n), method="adaptive").value - bergman_weight(mu, float(n)))
            if gap >= worst:
                worst, where = gap, {"alpha": alpha, "n": int(n)}
    return compare("weight_closed_form", worst, 0.0, tol, {"alphas": list(alphas), "n": ns.astype(int), "worst_at": where})


@timed
def zeta_power_consistency(N: int, qs: Sequence[float] = (0.5, 1.5, 2.0 / 3.0), tol: float = 1e-12) -> VerificationReport:
    """Multiplicative zeta^q coefficients against the log-derivative recurrence on 1."""
    worst = 0.0
    for q in qs:
        direct = np.asarray(zeta_power_coeffs(float(q), N).values, dtype=float)
        recurrence = np.real(np.asarray(dirichlet_power(ArithmeticSequence.ones(N), float(q)).values, dtype=complex))
        worst = max(worst, float(np.max(np.abs(direct - recurrence) / np.maximum(1.0, np.abs(direct)))))
    # q = 1/2 squared back to zeta
    half = zeta_power_coeffs(Fraction(1, 2), 64)
    square = sum(half.values[d - 1] * half.values[64 // d - 1] for d in range(1, 65) if 64 % d == 0)
    return compare("zeta_power_consistency", worst, 0.0, tol,
                   {"N": N, "q": list(qs), "sqrt_zeta_squared_at_64": square},
                   conditions={"exact_square": square == 1})


def kronecker_flow(f: DirichletPolynomial, t: float, s: complex, tol: float = 1e-10) -> VerificationReport:
    """Twisting by (p_j^{-it}) is the vertical translation s -> s + it."""
    K = max(1, required_primes(f))
    twisted = twist(f, Character.vertical(t, K))
    value_gap = abs(evaluate(twisted, s) - evaluate(f, complex(s) + 1j * t))
    coefficient_gap = float(np.max(np.abs(twisted.as_complex() - vertical_translate(f, t).as_complex())))
    return compare("kronecker_flow", max(value_gap, coefficient_gap), 0.0, tol,
                   {"t": t, "s": complex(s), "N": f.N, "K": K})


@timed
def kronecker_flows(seed: int, trials: int = 20, ts: Sequence[float] = (0.5, 3.0, 17.25)) -> VerificationReport:
    reports = [kronecker_flow(f, t, complex(0.75, 0.0))
               for f in random_polynomials(seed, trials, (1, 60), stream=7) for t in ts]
    worst = max(float(r.lhs) for r in reports)
    return compare("kronecker_flow", worst, 0.0, reports[0].tolerance, {"trials": trials, "t": list(ts)})


def identities_suite(cfg: SuiteConfig) -> List:
    return [
        lambda: binomial_identities(cfg.binomial_max_n, cfg.binomial_degree),
        lambda: alternating_sums(cfg.alternating_max),
        lambda: divisor_consistency(cfg.divisor_max_m, cfg.divisor_max_n),
        lambda: weight_closed_form([-0.5, 0.0, 1.0, 2.5]),
        lambda: zeta_power_consistency(cfg.zeta_power_n),
        lambda: kronecker_flows(cfg.seed),
    ]
