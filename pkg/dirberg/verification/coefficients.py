"""
Weighted coefficient norms against space norms. With c_n = w_n^{1/p} |a_n| on A^p_mu and
c_n = |a_n| / d(n)^{1/p} on B^p:

    ||c||_{l^p'} <= ||f||     for 1 <= p <= 2
    ||f|| <= ||c||_{l^p'}     for p >= 2
"""
import logging
from typing import List, Optional, Sequence

import numpy as np

from dirberg import APP_NAME
from dirberg.dirichlet_poly.polynomial import DirichletPolynomial, required_primes
from dirberg.measures.measures import AlphaMeasure, MeasureSpec
from dirberg.measures.weights import weight_sequence
from dirberg.norms.norms import ap_norm, even_bp_norm, sample_power_means
from dirberg.norms.sampling import NormEstimate, SamplerConfig
from dirberg.number_theory.arithmetic import divisor_count_table
from dirberg.services.config import SuiteConfig
from dirberg.services.errors import DomainError
from dirberg.verification.random_model import random_polynomials
from dirberg.verification.report import VerificationReport, timed, violation

logger = logging.getLogger(APP_NAME)

SPACES = ("A", "B")
EQUALITY_TOL = 1e-12


def _is_even(p: float) -> bool:
    return p == int(p) and int(p) % 2 == 0


def coefficient_norm(f: DirichletPolynomial, space: str, p: float, mu: Optional[MeasureSpec] = None) -> float:
    """||c||_{l^p'} of the weighted coefficients; p' = inf at p = 1."""
    a = np.abs(f.as_complex())
    if space == "A":
        c = weight_sequence(mu).values(f.N) ** (1.0 / p) * a
    else:
        c = a / divisor_count_table(f.N) ** (1.0 / p)
    if p == 1:
        return float(np.max(c))
    q = p / (p - 1)
    return float(np.sum(c ** q) ** (1.0 / q))


def space_norms(fs: Sequence[DirichletPolynomial], space: str, p: float, mu: Optional[MeasureSpec],
                samples: int, seed: int) -> List[NormEstimate]:
    """Exact norms at even p, otherwise paired Monte Carlo on one sample set."""
    if _is_even(p):
        if space == "A":
            return [ap_norm(f, mu, p) for f in fs]
        return [even_bp_norm(f, p) for f in fs]
    domain = "torus" if space == "A" else "polydisk"
    cfg = SamplerConfig(K=max(required_primes(f) for f in fs), samples=samples, seed=seed, domain=domain)
    return [row[0] for row in sample_power_means(fs, [p], cfg, mu if space == "A" else None)]


@timed
def coefficient_inequalities(space: str, p: float, trials: int = 200, max_degree: int = 30, samples: int = 20_000,
                             seed: int = 0, mu: Optional[MeasureSpec] = None) -> VerificationReport:
    """
    Coefficient norm <= norm for p <= 2 and norm <= coefficient norm for p >= 2, within two
    standard errors where the norm is sampled; at p = 2 both sides must agree to 1e-12.
    """
    if space not in SPACES:
        raise DomainError(f"space must be one of {SPACES}, got {space}")
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    mu = AlphaMeasure(0.0) if (space == "A" and mu is None) else mu
    fs = random_polynomials(seed, trials, (1, max_degree), stream=16)
    norms = space_norms(fs, space, p, mu, samples, seed)
    coefficients = [coefficient_norm(f, space, p, mu) for f in fs]
    margins = []
    for c, estimate in zip(coefficients, norms):
        slack = 2 * estimate.std_error + EQUALITY_TOL * max(1.0, c)
        if p <= 2:
            margins.append(c - estimate.value - slack)
        if p >= 2:
            margins.append(estimate.value - c - slack)
    conditions = {}
    if p == 2:
        conditions["equality"] = all(abs(c - e.value) <= EQUALITY_TOL * max(1.0, c) for c, e in zip(coefficients, norms))
    direction = "both" if p == 2 else ("coefficients_below_norm" if p < 2 else "norm_below_coefficients")
    parameters = {"space": space, "p": p, "direction": direction, "trials": trials, "max_degree": max_degree,
                  "seed": seed, "samples": 0 if _is_even(p) else samples,
                  "measure": mu.describe() if mu is not None else None}
    logger.debug(f"coefficient inequalities {space}, p={p}: worst margin {max(margins):.3g}")
    return violation(f"coefficient_inequality_{space}_p{p:g}", margins, parameters, conditions)


def coefficients_suite(cfg: SuiteConfig) -> List:
    mu = AlphaMeasure(cfg.contraction_alpha)
    ps = sorted(set(cfg.coefficient_ps) | {2.0})
    return [lambda space=space, p=p: coefficient_inequalities(space, p, cfg.coefficient_trials, cfg.coefficient_max_degree,
                                                              cfg.coefficient_samples, cfg.seed, mu if space == "A" else None)
            for space in SPACES for p in ps]
