"""
Norms of Dirichlet polynomials in H^p, A^p_mu, B^p and D^p_mu.

p = 2 and even p are exact coefficient formulas (through f^m for p = 2m); everything else
is Monte Carlo on the truncated polytorus or polydisk, with the sigma-integral of A^p_mu
done by quadrature on the same samples.
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from dirberg import APP_NAME
from dirberg.dirichlet_poly.polynomial import DirichletPolynomial, derivative, exponent_matrix, log_table, power, required_primes
from dirberg.measures.measures import AlphaMeasure, DiracAtZero, MeasureSpec, integrate_with_error, quadrature_rule
from dirberg.measures.weights import weight_sequence
from dirberg.norms.sampling import NormEstimate, SamplerConfig, map_blocks, power_mean_estimate
from dirberg.number_theory.arithmetic import divisor_count_table
from dirberg.services import constants
from dirberg.services.errors import DomainError

logger = logging.getLogger(APP_NAME)

CHUNK = 65536


def _squares(f: DirichletPolynomial) -> np.ndarray:
    a = f.as_complex()
    return (a * np.conj(a)).real


def _even_order(p: float) -> int:
    if p < 2 or p != int(p) or int(p) % 2:
        raise DomainError(f"p must be an even integer >= 2, got {p}")
    return int(p) // 2


def h2_norm(f: DirichletPolynomial) -> NormEstimate:
    return NormEstimate(math.sqrt(float(np.sum(_squares(f)))))


def a2_norm(f: DirichletPolynomial, mu: MeasureSpec) -> NormEstimate:
    weights = weight_sequence(mu).values(f.N)
    method = "exact" if isinstance(mu, (AlphaMeasure, DiracAtZero)) else "quadrature"
    return NormEstimate(math.sqrt(float(np.dot(_squares(f), weights))), method=method)


def b2_norm(f: DirichletPolynomial) -> NormEstimate:
    return NormEstimate(math.sqrt(float(np.sum(_squares(f) / divisor_count_table(f.N)))))


def d2_norm(f: DirichletPolynomial, mu: MeasureSpec) -> NormEstimate:
    """(|a_1|^2 + sum |a_n|^2 log^2 n w_n)^{1/2}."""
    squares = _squares(f)
    weights = weight_sequence(mu).values(f.N)
    value = squares[0] + float(np.dot(squares, log_table(f.N) ** 2 * weights))
    method = "exact" if isinstance(mu, (AlphaMeasure, DiracAtZero)) else "quadrature"
    return NormEstimate(math.sqrt(value), method=method)


def even_hp_norm(f: DirichletPolynomial, p: float, budget: Optional[int] = None) -> NormEstimate:
    """||f||_{H^{2m}} = ||f^m||_{H^2}^{1/m}; refuses f^m beyond the coefficient budget."""
    m = _even_order(p)
    return NormEstimate(h2_norm(power(f, m, budget)).value ** (1.0 / m))


def even_bp_norm(f: DirichletPolynomial, p: float, budget: Optional[int] = None) -> NormEstimate:
    m = _even_order(p)
    return NormEstimate(b2_norm(power(f, m, budget)).value ** (1.0 / m))


def even_ap_norm(f: DirichletPolynomial, mu: MeasureSpec, p: float, budget: Optional[int] = None) -> NormEstimate:
    m = _even_order(p)
    inner = a2_norm(power(f, m, budget), mu)
    return NormEstimate(inner.value ** (1.0 / m), method=inner.method)


@dataclass
class _Target:
    exponents: np.ndarray
    coeffs: np.ndarray
    p: float
    sigma_weights: Optional[np.ndarray] = None

    def integrand(self, logs: np.ndarray) -> np.ndarray:
        monomials = np.exp(logs @ self.exponents.T)
        values = monomials @ self.coeffs
        if self.sigma_weights is None:
            return np.abs(values) ** self.p
        return (np.abs(values) ** self.p) @ self.sigma_weights


def _prepare(f: DirichletPolynomial, p: float, cfg: SamplerConfig, mu: Optional[MeasureSpec] = None,
             nodes: int = constants.AP_QUAD_NODES) -> _Target:
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    support = f.support()
    if len(support) == 0:
        support = np.array([1])
    exponents = exponent_matrix(support, cfg.K).astype(float)
    coeffs = f.as_complex()[support - 1]
    if mu is None:
        return _Target(exponents, coeffs, p)
    sigma, weights = quadrature_rule(mu, nodes)
    translated = coeffs[:, None] * np.exp(-np.multiply.outer(np.log(support.astype(float)), sigma))
    return _Target(exponents, translated, p, weights)


def paired_estimates(targets: Sequence[_Target], cfg: SamplerConfig) -> List[NormEstimate]:
    values = map_blocks(cfg, lambda logs: np.stack([t.integrand(logs) for t in targets], axis=1))
    return [power_mean_estimate(values[:, j], t.p, cfg) for j, t in enumerate(targets)]


def _check_domain(cfg: SamplerConfig, domain: str) -> None:
    if cfg.domain != domain:
        raise DomainError(f"this norm samples the {domain}, sampler is configured for {cfg.domain}")


def mc_hp_norm(f: DirichletPolynomial, p: float, cfg: SamplerConfig) -> NormEstimate:
    _check_domain(cfg, "torus")
    return paired_estimates([_prepare(f, p, cfg)], cfg)[0]


def _integrated_norm(b: DirichletPolynomial, mu: MeasureSpec, m: int) -> NormEstimate:
    """(integral of ||b_sigma||_{H^2}^2 d mu)^{1/(2m)} by quadrature in sigma."""
    squares = _squares(b)
    support = np.flatnonzero(squares)
    logs = log_table(b.N)[support]
    weights = squares[support]

    def inner(sigma):
        if np.ndim(sigma) == 0:
            return float(np.dot(weights, np.exp(-2 * sigma * logs)))
        sigma = np.asarray(sigma)
        total = np.zeros(len(sigma))
        for start in range(0, len(logs), CHUNK):
            total += np.exp(-2 * np.multiply.outer(sigma, logs[start:start + CHUNK])) @ weights[start:start + CHUNK]
        return total

    result = integrate_with_error(mu, inner)
    return NormEstimate(max(result.value, 0.0) ** (1.0 / (2 * m)), method="quadrature")


def ap_norm(f: DirichletPolynomial, mu: MeasureSpec, p: float, cfg: Optional[SamplerConfig] = None,
            budget: Optional[int] = None) -> NormEstimate:
    """
    (integral of ||f_sigma||_{H^p}^p d mu(sigma))^{1/p}. Even p = 2m reduces to the A^2 norm
    of f^m: closed-form weights for mu_alpha and the Dirac mass, quadrature in sigma for
    densities. Other p need a torus sampler.
    """
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    if p == int(p) and int(p) % 2 == 0:
        m = int(p) // 2
        b = power(f, m, budget) if m > 1 else f
        if isinstance(mu, (AlphaMeasure, DiracAtZero)):
            return NormEstimate(a2_norm(b, mu).value ** (1.0 / m))
        return _integrated_norm(b, mu, m)
    if cfg is None:
        raise DomainError(f"A^p norms with p={p} need a sampler configuration")
    _check_domain(cfg, "torus")
    return paired_estimates([_prepare(f, p, cfg, mu)], cfg)[0]


def bp_norm_mc(f: DirichletPolynomial, p: float, cfg: SamplerConfig) -> NormEstimate:
    _check_domain(cfg, "polydisk")
    return paired_estimates([_prepare(f, p, cfg)], cfg)[0]


def dirichlet_space_norm(f: DirichletPolynomial, mu: MeasureSpec, p: float,
                         cfg: Optional[SamplerConfig] = None) -> NormEstimate:
    """(|f(+inf)|^p + ||f'||_{A^p_mu}^p)^{1/p}."""
    constant = abs(complex(f.value_at_infinity))
    slope = derivative(f)
    if not np.any(slope.coeffs):
        return NormEstimate(constant)
    inner = ap_norm(slope, mu, p, cfg)
    value = (constant ** p + inner.value ** p) ** (1.0 / p)
    std_error = (inner.value / value) ** (p - 1) * inner.std_error if value > 0 else 0.0
    return NormEstimate(value, std_error, inner.samples, inner.method, inner.seed)


def sample_power_means(fs: Sequence[DirichletPolynomial], ps: Sequence[float], cfg: SamplerConfig,
                       mu: Optional[MeasureSpec] = None) -> List[List[NormEstimate]]:
    """
    Estimates for every (f, p) pair on one sample set: out[i][j] is the norm of fs[i] at
    ps[j] (H^p or B^p by cfg.domain, A^p_mu when mu is given).
    """
    if mu is not None:
        _check_domain(cfg, "torus")
    targets = [_prepare(f, p, cfg, mu) for f in fs for p in ps]
    flat = paired_estimates(targets, cfg)
    return [flat[i * len(ps):(i + 1) * len(ps)] for i in range(len(fs))]


def sampler_for(f: DirichletPolynomial, samples: int = 100_000, seed: int = 0, domain: str = "torus",
                K: Optional[int] = None) -> SamplerConfig:
    """SamplerConfig with K defaulting to the primes needed by f."""
    return SamplerConfig(K=K or required_primes(f), samples=samples, seed=seed, domain=domain)
