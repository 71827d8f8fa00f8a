"""
Embeddings between H^p, A^p_mu and B^p: the exact B^4 <= H^2 contraction, Monte Carlo
contractions, estimator correctness, the compactness surrogate, the T_eps experiment and
the rotation, exponent and translation symmetries of the norms.
"""
import logging
import math
from fractions import Fraction
from typing import List, Sequence, Tuple

import numpy as np
from scipy import integrate as scipy_integrate
from scipy.stats import norm as normal

from dirberg import APP_NAME
from dirberg.dirichlet_poly.polynomial import Character, DirichletPolynomial, required_primes, translate, twist
from dirberg.measures.measures import AlphaMeasure, MeasureSpec, bergman_weight
from dirberg.measures.weights import weight_sequence
from dirberg.norms.norms import (
    a2_norm,
    ap_norm,
    b2_norm,
    even_bp_norm,
    even_hp_norm,
    h2_norm,
    mc_hp_norm,
    sample_power_means,
)
from dirberg.norms.sampling import SamplerConfig
from dirberg.number_theory.arithmetic import divisor_count_table
from dirberg.services.config import SuiteConfig
from dirberg.services.errors import DomainError
from dirberg.verification.fitting import fit_power_law
from dirberg.verification.random_model import random_gaussian_integers, random_polynomials, trial_generator
from dirberg.verification.report import VerificationReport, compare, timed, violation

logger = logging.getLogger(APP_NAME)

# two-sided false-alarm level of a single three-standard-error test
THREE_SIGMA_LEVEL = 2 * normal.sf(3.0)


def b4_gap(re: np.ndarray, im: np.ndarray) -> Tuple[Fraction, int]:
    """
    ||f^2||_{B^2}^2 = sum |b_n|^2 / d(n) and ||f||_{H^2}^4 for Gaussian-integer coefficients,
    both exact. b = f^2 is accumulated in int64, the weighted sum grouped by d(n).
    """
    re, im = np.asarray(re, dtype=np.int64), np.asarray(im, dtype=np.int64)
    if re.shape != im.shape or re.ndim != 1 or len(re) == 0:
        raise DomainError("real and imaginary parts must be non-empty vectors of one length")
    N = len(re)
    n = np.arange(1, N + 1)
    index = np.multiply.outer(n, n).ravel() - 1
    b_re = np.zeros(N * N, dtype=np.int64)
    b_im = np.zeros(N * N, dtype=np.int64)
    np.add.at(b_re, index, (np.multiply.outer(re, re) - np.multiply.outer(im, im)).ravel())
    np.add.at(b_im, index, (np.multiply.outer(re, im) + np.multiply.outer(im, re)).ravel())
    squares = b_re.astype(object) ** 2 + b_im.astype(object) ** 2
    d = divisor_count_table(N * N)
    lhs = Fraction(0)
    for k in np.unique(d[b_re.astype(bool) | b_im.astype(bool)]):
        lhs += Fraction(int(np.sum(squares[d == k])), int(k))
    rhs = int(np.sum(re.astype(object) ** 2 + im.astype(object) ** 2)) ** 2
    return lhs, rhs


@timed
def b4_contraction(trials: int = 1000, max_degree: int = 200, seed: int = 0) -> VerificationReport:
    """||f||_{B^4}^4 = ||f^2||_{B^2}^2 <= ||f||_{H^2}^4 in exact arithmetic on random trials."""
    rng = trial_generator(seed, stream=11)
    margins, failures = [], 0
    for _ in range(trials):
        lhs, rhs = b4_gap(*random_gaussian_integers(rng, (1, max_degree)))
        failures += lhs > rhs
        margins.append(float(lhs / rhs) - 1.0)
    binomial, _ = b4_gap(np.array([1, 1]), np.array([0, 0]))
    prime, _ = b4_gap(np.array([0, 1]), np.array([0, 0]))
    parameters = {"trials": trials, "max_degree": max_degree, "seed": seed, "exact_failures": failures,
                  "one_plus_two": binomial, "prime_monomial": prime}
    conditions = {"exact": failures == 0, "one_plus_two": binomial == Fraction(10, 3), "prime_monomial": prime == Fraction(1, 3)}
    return violation("b4_contraction", margins, parameters, conditions)


def _combined(a, b) -> float:
    return math.hypot(a.std_error, b.std_error)


@timed
def contractions(mu: MeasureSpec, ps: Sequence[float], trials: int, max_degree: int, samples: int,
                 seed: int) -> VerificationReport:
    """
    ||f||_{A^p_mu} <= ||f||_{H^p} and ||f||_{B^{2p}} <= ||f||_{H^p}. p = 2 is exact; other p
    are Monte Carlo within two combined standard errors, H^p and A^p_mu on one sample set.
    """
    fs = random_polynomials(seed, trials, (1, max_degree), stream=12)
    margins = {"bergman": [], "polydisk": []}
    exact_ps = [p for p in ps if p == 2]
    mc_ps = [p for p in ps if p != 2]
    for f in fs:
        for _ in exact_ps:
            hardy = h2_norm(f).value
            margins["bergman"].append(a2_norm(f, mu).value - hardy - 1e-12 * hardy)
            margins["polydisk"].append(even_bp_norm(f, 4).value - hardy - 1e-12 * hardy)
    if mc_ps:
        K = max(required_primes(f) for f in fs)
        torus = SamplerConfig(K=K, samples=samples, seed=seed, domain="torus")
        polydisk = SamplerConfig(K=K, samples=samples, seed=seed, domain="polydisk")
        hardy = sample_power_means(fs, mc_ps, torus)
        bergman = sample_power_means(fs, mc_ps, torus, mu)
        doubled = sample_power_means(fs, [2 * p for p in mc_ps], polydisk)
        for i in range(len(fs)):
            for j in range(len(mc_ps)):
                h, a, b = hardy[i][j], bergman[i][j], doubled[i][j]
                slack = 2 * _combined(a, h) + 1e-12 * h.value
                margins["bergman"].append(a.value - h.value - slack)
                margins["polydisk"].append(b.value - h.value - 2 * _combined(b, h) - 1e-12 * h.value)
    worst = {key: max(values) for key, values in margins.items()}
    parameters = {"measure": mu.describe(), "p": list(ps), "trials": trials, "max_degree": max_degree,
                  "samples": samples, "seed": seed, "worst_bergman": worst["bergman"], "worst_polydisk": worst["polydisk"]}
    return violation("contractions", margins["bergman"] + margins["polydisk"], parameters)


def hardy_linear_norm(a: float, p: float) -> float:
    """||1 + a z||_{H^p} on the circle by adaptive quadrature in theta."""
    value, _ = scipy_integrate.quad(lambda t: abs(1 + a * complex(math.cos(t), math.sin(t))) ** p, 0.0, 2 * math.pi,
                                    epsabs=1e-14, epsrel=1e-13, limit=200)
    return (value / (2 * math.pi)) ** (1.0 / p)


@timed
def mc_correctness(samples: int = 1_000_000, polynomials: int = 50, seed: int = 0,
                   polynomial_samples: int = 100_000) -> VerificationReport:
    """
    mc_hp_norm of 1 + 2^{-s}/2 at p = 3 against the circle quadrature (three standard
    errors, standard error below 1%), and bp_norm_mc at p = 2 against b2_norm on random
    polynomials, with the three-sigma level shared across the family.
    """
    f = DirichletPolynomial(np.array([1.0, 0.5], dtype=complex))
    estimate = mc_hp_norm(f, 3.0, SamplerConfig(K=1, samples=samples, seed=seed, domain="torus"))
    oracle = hardy_linear_norm(0.5, 3.0)
    fs = random_polynomials(seed, polynomials, (1, 30), stream=13)
    cfg = SamplerConfig(K=max(required_primes(g) for g in fs), samples=polynomial_samples, seed=seed, domain="polydisk")
    scores = [abs(row[0].value - b2_norm(g).value) / row[0].std_error
              for g, row in zip(fs, sample_power_means(fs, [2.0], cfg)) if row[0].std_error > 0]
    family_limit = float(normal.isf(THREE_SIGMA_LEVEL / (2 * max(1, len(scores)))))
    parameters = {"estimate": estimate.to_dict(), "oracle": oracle, "polynomials": polynomials,
                  "polynomial_samples": polynomial_samples, "worst_z": max(scores, default=0.0),
                  "family_limit": family_limit}
    conditions = {"relative_std_error": estimate.std_error < 0.01 * estimate.value,
                  "polydisk_b2": all(z <= family_limit for z in scores)}
    return compare("mc_correctness", estimate.value, oracle, 3 * estimate.std_error, parameters, conditions)


@timed
def eigenvalue_decay(ns: Sequence[int], mu: MeasureSpec = AlphaMeasure(0.0)) -> VerificationReport:
    """
    The H^2 -> A^2_mu inclusion is diagonal in (n^{-s}) with singular values w_n^{1/2};
    the sup beyond N decreases to 0 as N grows. Compactness itself is not a finite check.
    """
    ns = sorted(int(n) for n in ns)
    if not ns or ns[0] < 1:
        raise DomainError("eigenvalue decay needs positive truncation points")
    tails = [a2_norm(DirichletPolynomial.from_terms({n + 1: 1.0}), mu).value for n in ns]
    weights = weight_sequence(mu).values(ns[-1] + 1)
    closed = math.sqrt(bergman_weight(mu, ns[-1] + 1))
    sup_beyond = [float(np.sqrt(np.max(weights[n:]))) for n in ns]
    parameters = {"measure": mu.describe(), "N": ns, "singular_values": tails}
    conditions = {"decreasing": bool(np.all(np.diff(tails) < 0)),
                  "monotone_weights": bool(np.allclose(tails, sup_beyond, rtol=1e-12, atol=0.0))}
    return compare("eigenvalue_decay", tails[-1], closed, 1e-12, parameters, conditions, surrogate=True)


@timed
def t_epsilon_experiment(mu: MeasureSpec, eps_list: Sequence[float], trials: int = 200, max_degree: int = 500,
                         samples: int = 4096, seed: int = 0, growth: float = 0.25) -> VerificationReport:
    """
    ||T_eps f||_{A^2_mu} / ||f||_{A^1_mu} over random polynomials. Passes when, at every eps,
    the ratio has no power growth in the degree beyond growth, is non-increasing in eps,
    and equals 1 at f = 1.
    """
    if any(eps <= 0 for eps in eps_list):
        raise DomainError(f"eps must be > 0, got {list(eps_list)}")
    eps_list = sorted(eps_list)
    fs = random_polynomials(seed, trials, (1, max_degree), stream=14)
    cfg = SamplerConfig(K=max(required_primes(f) for f in fs), samples=samples, seed=seed, domain="torus")
    denominators = np.array([row[0].value for row in sample_power_means(fs, [1.0], cfg, mu)])
    degrees = np.array([f.N for f in fs], dtype=float)
    ratios = np.array([[a2_norm(translate(f, eps), mu).value for f in fs] for eps in eps_list]) / denominators
    fits, maxima = {}, {}
    for eps, row in zip(eps_list, ratios):
        maxima[eps] = float(np.max(row))
        if len(np.unique(degrees)) > 2:
            fits[eps] = fit_power_law(degrees, row).exponent
    one = DirichletPolynomial.constant(1.0)
    unit = a2_norm(translate(one, eps_list[0]), mu).value / ap_norm(one, mu, 1.0, SamplerConfig(K=1, samples=16, seed=seed)).value
    parameters = {"measure": mu.describe(), "eps": eps_list, "trials": trials, "max_degree": max_degree,
                  "samples": samples, "seed": seed, "max_ratio": maxima, "degree_exponent": fits}
    conditions = {"decreasing_in_eps": bool(np.all(np.diff(ratios, axis=0) <= 1e-12)),
                  "constant_ratio_one": abs(unit - 1.0) <= 1e-12}
    margins = [exponent - growth for exponent in fits.values()]
    return violation("t_epsilon_experiment", margins, parameters, conditions)


def _even_norms(f: DirichletPolynomial, mu: MeasureSpec) -> np.ndarray:
    """||f||_{H^2}, ||f||_{H^4}, ||f||_{A^2_mu}, ||f||_{A^4_mu}, all exact."""
    return np.array([h2_norm(f).value, even_hp_norm(f, 4).value, a2_norm(f, mu).value, ap_norm(f, mu, 4).value])


@timed
def norm_symmetries(mu: MeasureSpec, ps: Sequence[float], trials: int, max_degree: int, samples: int, seed: int,
                    shifts: Sequence[float] = (0.25, 1.0)) -> VerificationReport:
    """
    Three structural facts on random polynomials: twisting by a character of the polytorus
    leaves the H^p and A^p_mu norms unchanged (p = 2, 4 exact); H^p estimates on one sample
    set are non-decreasing in p; T_eps contracts H^p and A^p_mu (p = 2, 4 exact).
    """
    if any(eps < 0 for eps in shifts):
        raise DomainError(f"shifts must be >= 0, got {list(shifts)}")
    ps = sorted(ps)
    fs = random_polynomials(seed, trials, (1, max_degree), stream=18)
    rng = trial_generator(seed, stream=19)
    rotation, translation = [], []
    for f in fs:
        base = _even_norms(f, mu)
        chi = Character(np.exp(2j * np.pi * rng.random(required_primes(f))))
        rotation.append(float(np.max(np.abs(_even_norms(twist(f, chi), mu) - base) / base)))
        for eps in shifts:
            translation.append(float(np.max(_even_norms(translate(f, eps), mu) - base * (1 + 1e-12))))
    cfg = SamplerConfig(K=max(required_primes(f) for f in fs), samples=samples, seed=seed, domain="torus")
    holder = []
    for row in sample_power_means(fs, ps, cfg):
        values = np.array([estimate.value for estimate in row])
        holder.extend(values[:-1] - values[1:] * (1 + 1e-12))
    worst_rotation = max(rotation)
    parameters = {"measure": mu.describe(), "p": ps, "shifts": list(shifts), "trials": trials, "max_degree": max_degree,
                  "samples": samples, "seed": seed, "worst_rotation": worst_rotation,
                  "worst_holder": float(max(holder, default=0.0)), "worst_translation": max(translation)}
    conditions = {"rotation_invariant": worst_rotation <= 1e-10}
    return violation("norm_symmetries", holder + translation, parameters, conditions)


def embeddings_suite(cfg: SuiteConfig) -> List:
    mu = AlphaMeasure(cfg.contraction_alpha)
    return [
        lambda: b4_contraction(cfg.contraction_trials, cfg.contraction_max_degree, cfg.seed),
        lambda: contractions(mu, cfg.embedding_ps, cfg.embedding_trials, cfg.embedding_max_degree,
                             cfg.embedding_samples, cfg.seed),
        lambda: mc_correctness(cfg.mc_samples, cfg.mc_polynomials, cfg.seed, cfg.samples),
        lambda: eigenvalue_decay(cfg.decay_ns, mu),
        lambda: norm_symmetries(mu, cfg.embedding_ps, cfg.embedding_trials, cfg.embedding_max_degree,
                                cfg.embedding_samples, cfg.seed),
        lambda: t_epsilon_experiment(mu, cfg.t_epsilon_list, cfg.t_epsilon_trials, cfg.t_epsilon_max_degree,
                                     cfg.t_epsilon_samples, cfg.seed, cfg.t_epsilon_growth),
    ]
