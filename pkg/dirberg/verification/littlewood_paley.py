"""
Littlewood-Paley identities reduced to Dirichlet polynomials: each compares a norm or
weight with a sigma-integral of |f'|^2 data, computed by independent quadrature.
"""
import logging
import math
from typing import Callable, List, Sequence

import numpy as np
from scipy import integrate as scipy_integrate

from dirberg import APP_NAME
from dirberg.dirichlet_poly.polynomial import DirichletPolynomial, log_table
from dirberg.measures.measures import AlphaMeasure, MeasureSpec, bergman_weight, beta_h, integrate_with_error
from dirberg.norms.norms import b2_norm, d2_norm
from dirberg.number_theory.arithmetic import divisor_count_table
from dirberg.services.config import SuiteConfig
from dirberg.services.errors import DomainError
from dirberg.verification.random_model import random_polynomials
from dirberg.verification.report import VerificationReport, compare, timed

logger = logging.getLogger(APP_NAME)


def _half_line(integrand: Callable[[float], float]) -> float:
    value, _ = scipy_integrate.quad(integrand, 0.0, np.inf, limit=400, epsabs=1e-15, epsrel=1e-12)
    return value


def _check_ns(ns: Sequence[float]) -> np.ndarray:
    ns = np.asarray(ns, dtype=float)
    if np.any(ns < 2):
        raise DomainError("the identity holds for n >= 2 only (log^2 1 = 0 while w_1 = 1)")
    return ns


@timed
def lp_weight_identity(mu: MeasureSpec, ns: Sequence[float], tol: float = 1e-8) -> VerificationReport:
    """w_h(n) = 4 log^2(n) integral of n^{-2 sigma} beta_h(sigma) d sigma."""
    ns = _check_ns(ns)
    rows = []
    for n in ns:
        log_n = math.log(n)
        rhs = 4 * log_n ** 2 * _half_line(lambda s: math.exp(-2 * s * log_n) * beta_h(mu, s))
        rows.append({"n": float(n), "weight": bergman_weight(mu, n), "integral": rhs})
    worst = max(abs(row["weight"] - row["integral"]) for row in rows)
    return compare("lp_weight_identity", worst, 0.0, tol, {"measure": mu.describe(), "rows": rows})


@timed
def lp_b2_identity(ns: Sequence[float], tol: float = 1e-10) -> VerificationReport:
    """integral of sigma n^{-2 sigma} d sigma = 1 / (4 log^2 n), n real >= 2 (n = e^2 included)."""
    ns = _check_ns(list(ns) + [math.e ** 2])
    gaps, scaled = [], []
    for n in ns:
        log_n = math.log(n)
        value = _half_line(lambda s: s * math.exp(-2 * s * log_n))
        gaps.append(abs(value - 1 / (4 * log_n ** 2)))
        scaled.append(value * log_n ** 2)
    spread = max(scaled) - min(scaled)
    return compare("lp_b2_identity", max(gaps), 0.0, tol, {"n": ns, "scaled_spread": spread},
                   {"scaling": spread <= 4 * tol * max(np.log(ns)) ** 2})


def _squares(f: DirichletPolynomial) -> np.ndarray:
    return np.abs(f.as_complex()) ** 2


def lp_dirichlet_identity(mu: MeasureSpec, f: DirichletPolynomial, tol: float = 1e-8) -> VerificationReport:
    """||f||^2_{D^2_mu} = |a_1|^2 + integral of ||(f')_sigma||^2_{H^2} d mu(sigma)."""
    squares = _squares(f)
    logs = log_table(f.N)
    slope = squares * logs ** 2

    def derivative_norm(sigma):
        if np.ndim(sigma) == 0:
            return float(np.dot(slope, np.exp(-2 * sigma * logs)))
        return np.exp(-2 * np.multiply.outer(np.asarray(sigma), logs)) @ slope

    method = "adaptive" if isinstance(mu, AlphaMeasure) else "auto"
    rhs = squares[0] + integrate_with_error(mu, derivative_norm, method).value
    lhs = d2_norm(f, mu).value ** 2
    return compare("lp_dirichlet_identity", lhs, rhs, tol * max(1.0, rhs), {"measure": mu.describe(), "N": f.N})


def lp_b2_polynomial(f: DirichletPolynomial, tol: float = 1e-8) -> VerificationReport:
    """||f||^2_{B^2} = |a_1|^2 + 4 integral of sigma sum |a_n|^2 log^2 n n^{-2 sigma} / d(n) d sigma."""
    squares = _squares(f)
    logs = log_table(f.N)
    weighted = squares * logs ** 2 / divisor_count_table(f.N)
    rhs = squares[0] + 4 * _half_line(lambda s: s * float(np.dot(weighted, np.exp(-2 * s * logs))))
    lhs = b2_norm(f).value ** 2
    return compare("lp_b2_polynomial", lhs, rhs, tol * max(1.0, rhs), {"N": f.N})


def _worst(name: str, reports: Sequence[VerificationReport], parameters: dict) -> VerificationReport:
    worst = max(reports, key=lambda r: abs(r.lhs - r.rhs) / max(r.tolerance, 1e-300))
    parameters = dict(parameters, checked=len(reports), failed=sum(not r.passed for r in reports))
    return compare(name, worst.lhs, worst.rhs, worst.tolerance, parameters,
                   {"all_passed": all(r.passed for r in reports)})


@timed
def lp_dirichlet_trials(alphas: Sequence[float], seed: int, trials: int = 20) -> VerificationReport:
    fs = random_polynomials(seed, trials, (1, 40), stream=3)
    reports = [lp_dirichlet_identity(AlphaMeasure(alpha), f) for alpha in alphas for f in fs]
    return _worst("lp_dirichlet_identity", reports, {"alphas": list(alphas), "trials": trials})


@timed
def lp_b2_trials(seed: int, trials: int = 20) -> VerificationReport:
    reports = [lp_b2_polynomial(f) for f in random_polynomials(seed, trials, (1, 40), stream=4)]
    return _worst("lp_b2_polynomial", reports, {"trials": trials})


def littlewood_paley_suite(cfg: SuiteConfig) -> List:
    ns = np.unique(np.geomspace(2, cfg.lp_n_max, cfg.lp_n_points).round())
    checks = [lambda alpha=alpha: lp_weight_identity(AlphaMeasure(alpha), ns, cfg.lp_tol) for alpha in cfg.lp_alphas]
    checks += [lambda: lp_b2_identity(ns, cfg.lp_b2_tol)]
    checks += [lambda: lp_dirichlet_trials(cfg.lp_alphas, cfg.seed), lambda: lp_b2_trials(cfg.seed)]
    return checks
