"""Point evaluation checks on B^p and A^p_mu, and consistency of evaluation norms across exponents."""
import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from dirberg import APP_NAME
from dirberg.dirichlet_poly.polynomial import evaluate, required_primes
from dirberg.evaluation.annexe import annexe_compare, power_identity_gap
from dirberg.evaluation.evaluation import (
    bp_kernel_witness,
    eval_lower_ap,
    eval_norm_a2,
    eval_norm_bp,
    eval_norm_hp,
    eval_norm_polydisk,
    kernel_bp,
)
from dirberg.evaluation.zeta import zeta
from dirberg.measures.measures import AlphaMeasure, MeasureSpec
from dirberg.norms.norms import sample_power_means
from dirberg.norms.sampling import SamplerConfig
from dirberg.number_theory.arithmetic import prime_power_tail
from dirberg.number_theory.primes import primes_up_to
from dirberg.services.config import SuiteConfig
from dirberg.services.errors import DomainError
from dirberg.verification.random_model import random_polynomials
from dirberg.verification.report import VerificationReport, compare, timed, violation

logger = logging.getLogger(APP_NAME)


@timed
def bp_evaluation(sigmas: Sequence[float], prime_bound: int = 100_000, max_exponent: int = 40,
                  fraction: float = 0.9, polynomials: int = 50, samples: int = 100_000, seed: int = 0,
                  ps: Sequence[float] = (1.0, 2.0, 3.0)) -> VerificationReport:
    """
    ||delta_sigma||_{(B^p)*} = zeta(2 sigma)^{2/p}: the smooth-number kernel witness reaches
    fraction of it at p = 2, and |f(sigma)| never exceeds the bound applied to the Monte
    Carlo norm plus two standard errors.
    """
    fs = random_polynomials(seed, polynomials, (1, 30), stream=15)
    cfg = SamplerConfig(K=max(required_primes(f) for f in fs), samples=samples, seed=seed, domain="polydisk")
    estimates = sample_power_means(fs, ps, cfg)
    margins, witnesses, conditions = [], [], {}
    for sigma in sigmas:
        witness = bp_kernel_witness(sigma, prime_bound, max_exponent)
        witnesses.append(witness)
        conditions[f"witness_sigma_{sigma}"] = witness["ratio"] >= fraction
        if sigma >= 1.0:
            truncated = math.sqrt(kernel_bp(sigma, sigma).value.real) / zeta(2 * sigma)
            conditions[f"truncated_kernel_sigma_{sigma}"] = truncated >= fraction
        for f, row in zip(fs, estimates):
            value = abs(evaluate(f, sigma))
            for p, estimate in zip(ps, row):
                margins.append(value - eval_norm_bp(sigma, p).value * (estimate.value + 2 * estimate.std_error))
    parameters = {"sigma": list(sigmas), "p": list(ps), "witnesses": witnesses, "polynomials": polynomials,
                  **cfg.describe()}
    return violation("bp_evaluation", margins, parameters, conditions)


@timed
def polydisk_evaluation(sigma: float, p: float, P_max: int = 100_000, tol: float = 0.05) -> VerificationReport:
    """
    The product prod_{q <= P} (1 - q^{-2 sigma})^{-2/p} at z_j = p_j^{-sigma} falls short of
    zeta(2 sigma)^{2/p} by a log-gap of about (2/p) sum_{q > P} q^{-2 sigma}.
    """
    if not sigma > 0.5:
        raise DomainError(f"sigma must be > 1/2, got {sigma}")
    primes = primes_up_to(P_max).astype(float)
    truncated = eval_norm_polydisk(primes ** -sigma, p).value
    exact = eval_norm_bp(sigma, p).value
    gap = math.log(exact) - math.log(truncated)
    predicted = 2.0 / p * prime_power_tail(P_max, 2 * sigma)
    parameters = {"sigma": sigma, "p": p, "P_max": P_max, "truncated": truncated, "exact": exact}
    return compare("polydisk_evaluation", gap, predicted, tol * predicted, parameters, {"below_limit": truncated <= exact})


@timed
def eval_lower_check(mu: MeasureSpec, sigma: float = 0.8, N: int = 10_000, fraction: float = 0.9,
                     growth_sigma: float = 0.6, growth_ns: Sequence[int] = (1_000, 10_000)) -> VerificationReport:
    """
    Lower bounds of ||delta_sigma|| on A^2_mu from truncated test functions reach fraction of
    the exact value at sigma, and at growth_sigma grow with N without passing it.
    """
    exact = eval_norm_a2(mu, sigma).value
    ratio = eval_lower_ap(mu, sigma, 2.0, N).value / exact
    growth_exact = eval_norm_a2(mu, growth_sigma).value
    growth = [eval_lower_ap(mu, growth_sigma, 2.0, n).value for n in sorted(growth_ns)]
    parameters = {"measure": mu.describe(), "sigma": sigma, "N": N, "growth_sigma": growth_sigma,
                  "growth_N": sorted(growth_ns), "growth_ratios": [v / growth_exact for v in growth]}
    conditions = {"increasing_in_N": bool(np.all(np.diff(growth) > 0)),
                  "below_exact": max(growth) <= growth_exact * (1 + 1e-12)}
    return compare("eval_lower_ap", min(ratio, 1.0), 1.0, 1.0 - fraction, parameters, conditions)


@timed
def annexe_relations(sigmas: Sequence[float], ps: Sequence[float], N: int = 2000,
                     mu: Optional[MeasureSpec] = None, tol: float = 1e-12) -> VerificationReport:
    """
    N_pm = N_p^{1/m} on H^p and B^p to tol, and the product, monotone and power relations
    (with the A^p lower/upper sandwich) not contradicted at any sigma.
    """
    mu = AlphaMeasure(0.0) if mu is None else mu
    gaps = []
    for space, norm in (("Hp", eval_norm_hp), ("Bp", eval_norm_bp)):
        for sigma in sigmas:
            for p in (1.0, 2.0):
                for m in (2, 3):
                    gaps.append(power_identity_gap(space, sigma, p, m) / norm(sigma, p * m).value)
    conditions, checks = {}, []
    for sigma in sigmas:
        for space, exponents in (("Hp", [1.0, 2.0, 4.0]), ("Bp", [1.0, 2.0, 4.0]), ("Ap", list(ps))):
            result = annexe_compare(space, sigma, exponents, mu if space == "Ap" else None, N)
            conditions[f"{space}_sigma_{sigma}"] = result.passed
            checks.extend(dict(check, space=space, sigma=sigma) for check in result.checks if not check["passed"])
    parameters = {"sigma": list(sigmas), "p": list(ps), "N": N, "measure": mu.describe(), "failed": checks[:10]}
    return compare("annexe_relations", max(gaps), 0.0, tol, parameters, conditions)


def point_evaluation_suite(cfg: SuiteConfig) -> List:
    mu = AlphaMeasure(cfg.contraction_alpha)
    checks = [
        lambda: bp_evaluation(cfg.witness_sigmas, cfg.witness_prime_bound, cfg.witness_max_exponent,
                              cfg.witness_fraction, cfg.mc_polynomials, cfg.samples, cfg.seed),
        lambda: eval_lower_check(mu, cfg.eval_lower_sigma, cfg.eval_lower_n, cfg.eval_lower_fraction,
                                 growth_ns=(cfg.eval_lower_n // 10, cfg.eval_lower_n)),
        lambda: annexe_relations(cfg.annexe_sigmas, cfg.annexe_ps, cfg.annexe_n, mu),
    ]
    checks += [lambda sigma=sigma: polydisk_evaluation(sigma, 2.0, cfg.polydisk_p_max, cfg.polydisk_tol)
               for sigma in cfg.polydisk_sigmas]
    return checks
