"""Constants of the Bohr dilation P_r on B^p and the separation of the prime basis in B^p."""
import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate as scipy_integrate

from dirberg import APP_NAME
from dirberg.dirichlet_poly.polynomial import DirichletPolynomial, required_primes
from dirberg.norms.norms import b2_norm, sample_power_means
from dirberg.norms.sampling import SamplerConfig
from dirberg.number_theory.primes import nth_prime
from dirberg.services.config import SuiteConfig
from dirberg.services.errors import DomainError
from dirberg.verification.fitting import _design
from dirberg.verification.report import VerificationReport, compare, timed, violation

logger = logging.getLogger(APP_NAME)

CIRCLE_POINTS = 64


def r0_profile(j_max: int) -> Tuple[Fraction, dict]:
    """
    inf over 1 <= j <= j_max of (2 / (j + 2))^{1/j}. x -> log(2 / (x + 2)) / x is increasing
    because N(x) = log((x + 2) / 2) - x / (x + 2) is positive (N(0) = 0, N' > 0), so the
    infimum sits at j = 1 and equals 2/3.
    """
    j = np.arange(1, j_max + 1, dtype=float)
    values = np.exp(np.log(2 / (j + 2)) / j)
    certificate = np.log((j + 2) / 2) - j / (j + 2)
    first = int(np.argmin(values)) + 1
    r0 = Fraction(2, 3) if first == 1 else Fraction(float(values[first - 1]))
    return r0, {"argmin": first, "certificate_positive": bool(np.all(certificate > 0)),
                "increasing": bool(np.all(np.diff(values) > 0))}


def dilation_sup(r: Fraction, j_max: int = 200) -> Fraction:
    """sup over 0 <= j <= j_max of r^{2j} (j + 2)^2 / 4 in exact arithmetic."""
    r = Fraction(r)
    return max(r ** (2 * j) * Fraction((j + 2) ** 2, 4) for j in range(j_max + 1))


def dilation_tail(r: Fraction, j_max: int = 200) -> Optional[Tuple[int, Fraction]]:
    """
    First j <= j_max where the term ratio r^2 ((j + 3) / (j + 2))^2 of r^{2j} (j + 2)^2 / 4 drops
    below 1, with that ratio. The ratio decreases in j, so the terms decrease from there on and
    the sup over all j is the max over j <= that index. None if it never drops below 1.
    """
    r = Fraction(r)
    for j in range(j_max + 1):
        ratio = r ** 2 * Fraction(j + 3, j + 2) ** 2
        if ratio < 1:
            return j, ratio
    return None


def b1_norm_linear(a: float) -> float:
    """||1 + a z||_{B^1} on the disk with normalized area measure (radial quad, periodic trapezoid in theta)."""
    theta = 2 * np.pi * np.arange(CIRCLE_POINTS) / CIRCLE_POINTS
    circle = np.exp(1j * theta)
    value, _ = scipy_integrate.quad(lambda r: 2 * r * float(np.mean(np.abs(1 + a * r * circle))), 0.0, 1.0,
                                    epsabs=1e-15, epsrel=1e-13, limit=200)
    return value


def quadratic_coefficient(a_list: Sequence[float]) -> Tuple[float, float]:
    """Intercept and slope of (||1 + a z||_{B^1} - 1) / a^2 against a^2."""
    a = np.asarray(a_list, dtype=float)
    x, y = _design(a ** 2, [(b1_norm_linear(v) - 1) / v ** 2 for v in a])
    slope, intercept = np.polyfit(x, y, 1)
    return float(intercept), float(slope)


@timed
def multiplier_constants(j_max: int = 10_000, a_list: Sequence[float] = (0.02, 0.04, 0.06, 0.08, 0.1),
                         coefficient_tol: float = 0.03, radii: Sequence[float] = (0.5, 2 / 3, 0.9)) -> VerificationReport:
    r0, certificate = r0_profile(j_max)
    sup_at_r0 = dilation_sup(Fraction(2, 3))
    tail = dilation_tail(Fraction(2, 3))
    sup_beyond = max(0.71 ** (2 * j) * (j + 2) ** 2 / 4 for j in range(201))
    intercept, slope = quadratic_coefficient(a_list)
    dilation_gap = max(abs(b2_norm(DirichletPolynomial(np.array([1.0, a * r], dtype=complex))).value ** 2
                           - (1 + (a * r) ** 2 / 2))
                       for a in a_list for r in radii)
    parameters = {"j_max": j_max, **certificate, "sup_at_two_thirds": sup_at_r0, "tail_start": tail[0] if tail else None,
                  "tail_ratio": tail[1] if tail else None, "sup_at_0.71": sup_beyond,
                  "quadratic_coefficient": intercept, "quartic_coefficient": slope, "dilation_b2_gap": dilation_gap}
    conditions = {
        "infimum_at_j1": certificate["argmin"] == 1,
        "certificate": certificate["certificate_positive"] and certificate["increasing"],
        "contraction_at_two_thirds": sup_at_r0 <= 1 and tail is not None,
        "fails_at_0.71": sup_beyond > 1,
        "b1_expansion": abs(intercept - 0.125) <= coefficient_tol * 0.125,
        "b2_dilation": dilation_gap <= 1e-12,
    }
    return compare("multiplier_constants", r0, Fraction(2, 3), 0.0, parameters, conditions)


@timed
def basis_separation(p: float, pairs: Sequence[Tuple[int, int]], samples: int, seed: int) -> VerificationReport:
    """
    ||e_{p_n} - e_{p_m}||_{B^p} >= ||e_{p_n}||_{B^p} = (2 / (p + 2))^{1/p}, a finite witness that the
    prime basis is not a Schauder basis with small constant; reported as a surrogate.
    """
    if any(n == m for n, m in pairs):
        raise DomainError("basis separation needs distinct prime indices")
    threshold = (2 / (p + 2)) ** (1 / p)
    fs = []
    for n, m in pairs:
        pn, pm = nth_prime(n), nth_prime(m)
        fs.append(DirichletPolynomial.from_terms({pn: 1.0, pm: -1.0}))
    cfg = SamplerConfig(K=max(required_primes(f) for f in fs), samples=samples, seed=seed, domain="polydisk")
    estimates = [row[0] for row in sample_power_means(fs, [p], cfg)]
    margins = [threshold - 2 * e.std_error - e.value for e in estimates]
    radial, _ = scipy_integrate.quad(lambda r: r ** p * 2 * r, 0.0, 1.0, epsabs=1e-14, epsrel=1e-13)
    conditions = {"single_variable": abs(radial - 2 / (p + 2)) <= 1e-10}
    if p == 2:
        conditions["exact_p2"] = all(abs(b2_norm(f).value - 1.0) <= 1e-12 for f in fs)
    parameters = {"p": p, "pairs": [list(pair) for pair in pairs], "threshold": threshold,
                  "estimates": [e.to_dict() for e in estimates], **cfg.describe()}
    return violation("basis_separation", margins, parameters, conditions, surrogate=True)


def multipliers_suite(cfg: SuiteConfig) -> List:
    pairs = [(1, 2), (1, 5), (3, 10)]
    return [
        lambda: multiplier_constants(cfg.multiplier_j_max, cfg.multiplier_a_list, cfg.multiplier_coef_tol),
        lambda: basis_separation(2.0, pairs, cfg.samples, cfg.seed),
        lambda: basis_separation(4.0, pairs, cfg.samples, cfg.seed),
    ]
