"""
Growth of divisor sums and evaluation norms as sigma -> 1/2.

S_m(sigma) = sum d_m(n)^2 n^{-2 sigma} is computed as zeta(2 sigma)^{m^2} prod_p Q_m(p^{-2 sigma})
with Q_m(z) = (sum_k C(m-1, k)^2 z^k)(1 - z)^{(m-1)^2}. Since Q_m(z) = 1 + q_2 z^2 + O(z^3),
the primes above the cutoff contribute exp(q_2 sum_{p > P} p^{-4 sigma}), which is applied
as a correction.
"""
import logging
import math
from typing import List, Sequence, Tuple

import numpy as np
from scipy import integrate as scipy_integrate
from scipy.special import gamma as gamma_function

from dirberg import APP_NAME
from dirberg.dirichlet_poly.polynomial import log_table
from dirberg.evaluation.evaluation import (
    disk_eval_bound,
    eval_bound_ap_even,
    eval_bound_ap_general,
    eval_bound_dp,
    eval_norm_a2,
)
from dirberg.evaluation.zeta import zeta
from dirberg.measures.measures import AlphaMeasure
from dirberg.number_theory.arithmetic import euler_product, generalized_divisor_table, prime_power_tail
from dirberg.services import constants
from dirberg.services.config import SuiteConfig
from dirberg.services.errors import DomainError, TruncationError
from dirberg.verification.fitting import blowup_fit, fit_log_law, window
from dirberg.verification.report import VerificationReport, compare, timed

logger = logging.getLogger(APP_NAME)

TRUNCATION_TOL = 0.01


def _second_order(m: int) -> int:
    """Coefficient q_2 of z^2 in Q_m (the z coefficient vanishes)."""
    a = (m - 1) ** 2
    return math.comb(m - 1, 2) ** 2 - a * a + math.comb(a, 2)


def local_product(m: int, sigma: float, P_max: int) -> Tuple[float, float]:
    """prod_p Q_m(p^{-2 sigma}) over all primes, and the size of the applied tail correction."""
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    if not sigma >= 0.5:
        raise DomainError(f"the local product converges for sigma >= 1/2, got {sigma}")
    if m == 1:
        return 1.0, 0.0
    binomials = np.array([math.comb(m - 1, k) ** 2 for k in range(m)], dtype=float)

    def local(p):
        z = np.exp(-2 * sigma * np.log(p))
        return np.polyval(binomials[::-1], z) * np.exp((m - 1) ** 2 * np.log1p(-z))

    product = euler_product(local, P_max)
    correction = _second_order(m) * prime_power_tail(P_max, 4 * sigma)
    return product.value * math.exp(correction), abs(correction)


def divisor_square_sum(m: int, sigma: float, P_max: int) -> float:
    if not sigma > 0.5:
        raise DomainError(f"S_m(sigma) converges only for sigma > 1/2, got {sigma}")
    product, correction = local_product(m, sigma, P_max)
    if correction > TRUNCATION_TOL:
        logger.warning(f"Euler tail correction {correction:.3g} for m={m}, sigma={sigma}, P={P_max}")
        if constants.STRICT_TAILS:
            raise TruncationError(f"prime cutoff {P_max} too small: tail correction {correction:.3g}")
    return zeta(2 * sigma) ** (m * m) * product


def direct_square_sum(table: np.ndarray, sigma: float) -> float:
    squares = np.asarray(table, dtype=float) ** 2
    return float(np.dot(squares, np.exp(-2 * sigma * log_table(len(squares)))))


def rankin_tail(m: int, sigma: float, N: int, P_max: int, points: int = 9) -> float:
    """sum_{n > N} d_m(n)^2 n^{-2 sigma} <= min over delta of N^{-delta} S_m(sigma - delta / 2)."""
    width = 2 * sigma - 1
    deltas = width * np.linspace(0.1, 0.9, points)
    return min(N ** (-d) * divisor_square_sum(m, sigma - d / 2, P_max) for d in deltas)


@timed
def divisor_asymptotic(m: int, sigmas: Sequence[float], N: int, P_max: int, cross_sigmas: Sequence[float],
                       ratio_sigma: float = 0.505, band: float = 0.1) -> VerificationReport:
    """
    S_m(sigma) (2 sigma - 1)^{m^2} / gamma_m with gamma_m = prod_p Q_m(1/p), checked against
    direct summation to N (plus a Rankin tail bound) on cross_sigmas. For m = 2 the classical
    zeta(s)^4 / zeta(2s) and gamma_2 = 6 / pi^2 are used as independent oracles.
    """
    if any(not 0.5 < s <= 1 for s in sigmas):
        raise DomainError(f"sigmas must lie in (1/2, 1], got {list(sigmas)}")
    gamma_m, _ = local_product(m, 0.5, P_max)
    ratios = {float(s): divisor_square_sum(m, s, P_max) * (2 * s - 1) ** (m * m) / gamma_m for s in sigmas}
    ratio = divisor_square_sum(m, ratio_sigma, P_max) * (2 * ratio_sigma - 1) ** (m * m) / gamma_m

    table = generalized_divisor_table(m, N)
    cross = []
    for s in cross_sigmas:
        euler = divisor_square_sum(m, s, P_max)
        direct = direct_square_sum(table, s)
        tail = rankin_tail(m, s, N, P_max)
        cross.append({"sigma": s, "euler": euler, "direct": direct, "tail_bound": tail,
                      "consistent": bool(-1e-9 * euler <= euler - direct <= tail + 1e-9 * euler)})
    conditions = {"cross_oracle": all(c["consistent"] for c in cross)}
    parameters = {"m": m, "N": N, "P_max": P_max, "gamma_m": gamma_m, "ratios": ratios,
                  "ratio_sigma": ratio_sigma, "cross": cross}
    if m == 1:
        conditions["gamma_oracle"] = abs(gamma_m - 1.0) <= 1e-12
    if m == 2:
        oracle = 6 / math.pi ** 2
        parameters["gamma_oracle"] = oracle
        conditions["gamma_oracle"] = abs(gamma_m - oracle) <= 1e-8
        classical = max(abs(divisor_square_sum(2, s, P_max) / (zeta(2 * s) ** 4 / zeta(4 * s)) - 1) for s in sigmas)
        parameters["classical_identity_gap"] = classical
        conditions["classical_identity"] = classical <= 1e-8
    return compare(f"divisor_asymptotic_m{m}", ratio, 1.0, band, parameters, conditions)


def _fit_report(name: str, sigmas, values, expected: float, tol: float, residual_max: float,
                parameters: dict, conditions: dict = None, corrected_fit: bool = False) -> VerificationReport:
    fit = blowup_fit(sigmas, values)
    parameters = dict(parameters, sigmas=np.asarray(sigmas), values=np.asarray(values), fit=fit.to_dict(),
                      expected_exponent=expected)
    if corrected_fit:
        # diagnostic only; the check uses the plain power law
        parameters["corrected_fit"] = blowup_fit(sigmas, values, linear_correction=True).to_dict()
    conditions = dict(conditions or {}, residual=fit.residual <= residual_max)
    return compare(name, fit.exponent, expected, tol * abs(expected), parameters, conditions)


@timed
def zeta_power_h2(m: int, bounds: Tuple[float, float], points: int, tol: float, residual_max: float,
                  P_max: int) -> VerificationReport:
    """||zeta^m(sigma + .)||_{H^2} = S_m(sigma)^{1/2} ~ c_m (2 sigma - 1)^{-m^2 / 2}."""
    sigmas = window(bounds, points)
    values = [math.sqrt(divisor_square_sum(m, s, P_max)) for s in sigmas]
    at_one = math.sqrt(divisor_square_sum(m, 1.0, P_max))
    parameters = {"m": m, "value_at_one": at_one, "c_m": math.sqrt(local_product(m, 0.5, P_max)[0])}
    conditions = {}
    if m == 1:
        conditions["value_at_one"] = abs(at_one - math.pi / math.sqrt(6)) <= 1e-10
    return _fit_report(f"zeta_power_h2_m{m}", sigmas, values, m * m / 2, tol, residual_max, parameters, conditions)


def bergman_square_sum(m: int, sigma: float, P_max: int) -> float:
    """
    sum d_m(n)^2 n^{-2 sigma} / (1 + log n) = integral of S_m(sigma + u) 2 e^{-2u} du, split at
    points geometric in the distance u ~ (2 sigma - 1) where S_m varies.
    """
    x = 2 * sigma - 1
    integrand = lambda u: divisor_square_sum(m, sigma + u, P_max) * 2 * math.exp(-2 * u)
    edges = [0.0] + [x * 2.0 ** k for k in range(-4, 60) if x * 2.0 ** k < 1] + [1.0]
    total = 0.0
    for left, right in zip(edges[:-1], edges[1:]):
        total += scipy_integrate.quad(integrand, left, right, limit=100, epsrel=1e-10)[0]
    total += scipy_integrate.quad(integrand, 1.0, np.inf, limit=100, epsrel=1e-10)[0]
    return total


@timed
def injection_blowup(m: int, bounds: Tuple[float, float], points: int, tol: float, residual_max: float,
                     P_max: int) -> VerificationReport:
    """
    R(sigma) = ||zeta^{m+1}_sigma||_{A^2}^{m/(m+1)} / ||zeta^m_sigma||_{H^2} for mu_0, which grows
    like (2 sigma - 1)^{-m^2 / (2(m+1))}; a bounded identity H^2 -> A^{2(m+1)/m} would keep it bounded.
    """
    if bounds[1] > 0.6:
        raise DomainError(f"the blow-up window must lie in (1/2, 0.6], got {bounds}")
    sigmas = window(bounds, points)
    values = [bergman_square_sum(m + 1, s, P_max) ** (m / (2 * (m + 1))) / math.sqrt(divisor_square_sum(m, s, P_max))
              for s in sigmas]
    monotone = bool(np.all(np.diff(values) < 0))
    return _fit_report(f"injection_blowup_m{m}", sigmas, values, m * m / (2 * (m + 1)), tol, residual_max,
                       {"m": m, "P_max": P_max}, {"increases_towards_half": monotone}, corrected_fit=True)


@timed
def eval_sharpness(alphas: Sequence[float], sigma: float, tol: float) -> VerificationReport:
    """||delta_sigma||^2_{(A^2_alpha)*} (2 sigma - 1)^{2 + alpha} / Gamma(2 + alpha) -> 1."""
    ratios = {}
    for alpha in alphas:
        value = eval_norm_a2(AlphaMeasure(alpha), sigma).value
        ratios[alpha] = value ** 2 * (2 * sigma - 1) ** (2 + alpha) / gamma_function(2 + alpha)
    worst = max(ratios.values(), key=lambda r: abs(r - 1))
    return compare("eval_sharpness", worst, 1.0, tol, {"sigma": sigma, "ratios": ratios})


@timed
def eval_even_exponent(alpha: float, p: float, bounds: Tuple[float, float], points: int, tol: float,
                       residual_max: float) -> VerificationReport:
    """K(sigma, sigma)^{1/p} for even p grows like (2 sigma - 1)^{-(2 + alpha)/p}."""
    mu = AlphaMeasure(alpha)
    sigmas = window(bounds, points)
    values = [eval_bound_ap_even(mu, s, p).value for s in sigmas]
    return _fit_report("eval_even_exponent", sigmas, values, (2 + alpha) / p, tol, residual_max,
                       {"alpha": alpha, "p": p})


@timed
def general_bound_profile(alpha: float, p: float, bounds: Tuple[float, float], points: int,
                          factor: float) -> VerificationReport:
    """
    The infimum bound stays within a constant factor of (sigma / (2 sigma - 1))^{(2 + alpha)/p};
    only the shape is checked, the fitted constant is reported.
    """
    mu = AlphaMeasure(alpha)
    sigmas = window(bounds, points)
    exponent = (2 + alpha) / p
    ratios = np.array([eval_bound_ap_general(mu, s, p).value / (s / (2 * s - 1)) ** exponent for s in sigmas])
    spread = float(ratios.max() / ratios.min())
    parameters = {"alpha": alpha, "p": p, "sigmas": sigmas, "ratios": ratios,
                  "constant": float(np.exp(np.mean(np.log(ratios))))}
    return compare("general_bound_profile", max(spread, 1.0), 1.0, factor - 1.0, parameters)


@timed
def dirichlet_log_growth(bounds: Tuple[float, float], points: int, tol: float, residual_max: float) -> VerificationReport:
    """At p = 2, alpha = 0 the D^p bound grows like 2^{1/2} |log(2 sigma - 1)| / 2."""
    mu = AlphaMeasure(0.0)
    sigmas = window(bounds, points)
    values = [eval_bound_dp(mu, s, 2.0).value for s in sigmas]
    fit = fit_log_law(2 * sigmas - 1, values)
    expected = math.sqrt(2) / 2
    return compare("dirichlet_log_growth", fit.exponent, expected, tol * expected,
                   {"sigmas": sigmas, "values": np.asarray(values), "fit": fit.to_dict(), "expected_slope": expected},
                   {"residual": fit.residual <= residual_max})


@timed
def dirichlet_power_growth(alpha: float, bounds: Tuple[float, float], points: int, tol: float,
                           residual_max: float) -> VerificationReport:
    """For alpha > p - 2 (p = 2) the D^p bound grows like (2 sigma - 1)^{-((2 + alpha)/2 - 1)}."""
    mu = AlphaMeasure(alpha)
    sigmas = window(bounds, points)
    values = [eval_bound_dp(mu, s, 2.0).value for s in sigmas]
    return _fit_report("dirichlet_power_growth", sigmas, values, (2 + alpha) / 2 - 1, tol, residual_max,
                       {"alpha": alpha, "p": 2.0})


@timed
def disk_profile(radii: Sequence[float], ps: Sequence[float], constant: float) -> VerificationReport:
    """Unweighted disk bound times (1 - |z|^2)^{2/p} stays below constant; at p = 2 it dominates 1/(1 - |z|^2)."""
    rows = []
    dominates = True
    for p in ps:
        for r in radii:
            bound = disk_eval_bound(None, r, p).value
            rows.append({"p": p, "radius": r, "scaled": bound * (1 - r * r) ** (2 / p)})
            if p == 2:
                dominates &= bound >= 1 / (1 - r * r) * (1 - 1e-12)
    worst = max(row["scaled"] for row in rows)
    return compare("disk_profile", max(worst - constant, 0.0), 0.0, 0.0, {"rows": rows, "constant": constant},
                   {"dominates_exact_norm": dominates})


def asymptotics_suite(cfg: SuiteConfig) -> List:
    checks = [lambda m=m: divisor_asymptotic(m, cfg.divisor_sigmas, cfg.divisor_n, cfg.euler_p_max,
                                               cfg.divisor_cross_sigmas, cfg.divisor_ratio_sigma,
                                               cfg.divisor_ratio_band.get(m, 0.2))
              for m in cfg.divisor_ms]
    checks += [lambda m=m, tol=tol: zeta_power_h2(m, cfg.zeta_power_window, cfg.fit_points, tol, cfg.fit_residual_max,
                                         cfg.euler_p_max)
               for m, tol in sorted(cfg.zeta_power_tol.items())]
    checks += [lambda m=m: injection_blowup(m, cfg.blowup_window, cfg.blowup_points, cfg.blowup_tol,
                                            cfg.fit_residual_max, cfg.blowup_p_max)
               for m in (1, 2)]
    checks += [
        lambda: eval_sharpness([0.0, 1.0], cfg.eval_sharpness_sigma, cfg.eval_sharpness_tol),
        lambda: eval_even_exponent(0.0, cfg.eval_even_p, cfg.eval_even_window, cfg.fit_points, cfg.eval_even_tol,
                                   cfg.fit_residual_max),
        lambda: general_bound_profile(0.0, cfg.general_bound_p, cfg.general_bound_window, cfg.general_bound_points,
                                      cfg.general_bound_factor),
        lambda: dirichlet_log_growth(cfg.dp_log_window, cfg.fit_points, cfg.dp_log_tol, cfg.fit_residual_max),
        lambda: dirichlet_power_growth(1.0, cfg.dp_power_window, cfg.fit_points, cfg.dp_power_tol,
                                       cfg.fit_residual_max),
        lambda: disk_profile(cfg.disk_radii, cfg.disk_ps, cfg.disk_constant),
    ]
    return checks
