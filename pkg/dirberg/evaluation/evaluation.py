"""
Point evaluation on H^p, A^p_mu, B^p, D^p_mu and the weighted disk spaces: exact
evaluation norms where a reproducing kernel or a product formula exists, and upper/lower
bounds elsewhere. Every quantity depends on s only through Re s.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate as scipy_integrate

from dirberg import APP_NAME
from dirberg.dirichlet_poly.polynomial import DirichletPolynomial, evaluate, log_table
from dirberg.evaluation.zeta import log_weighted_tail, log_weighted_zeta, zeta, zeta_minus_one
from dirberg.measures.measures import AlphaMeasure, DiracAtZero, MeasureSpec, mass_below
from dirberg.measures.weights import weight_sequence
from dirberg.norms.norms import ap_norm
from dirberg.norms.sampling import SamplerConfig
from dirberg.number_theory.arithmetic import ArithmeticSequence, dirichlet_power, divisor_count_table, zeta_power_coeffs
from dirberg.number_theory.primes import primes_up_to
from dirberg.services import constants
from dirberg.services.errors import DivergentTailError, DomainError, QuadratureError

logger = logging.getLogger(APP_NAME)

EULER_GAMMA = 0.5772156649015329
ETA_FLOOR = 1e-4
KINDS = ("exact", "upper-bound", "lower-bound")


@dataclass(frozen=True)
class EvalBound:
    value: float
    kind: str
    space: str
    parameters: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown bound kind {self.kind}")

    def to_dict(self) -> dict:
        return {"value": self.value, "kind": self.kind, "space": self.space, "parameters": self.parameters}


@dataclass(frozen=True)
class KernelSum:
    value: complex
    tail_bound: float
    N: int

    def to_dict(self) -> dict:
        return {"value": self.value, "tail_bound": self.tail_bound, "N": self.N}


def _real_part(s) -> float:
    sigma = complex(s).real
    if not sigma > 0.5:
        raise DomainError(f"point evaluation needs Re(s) > 1/2, got Re(s)={sigma}")
    return sigma


def _conjugate_exponent(p: float) -> float:
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    return math.inf if p == 1 else p / (p - 1)


def _describe(mu: Optional[MeasureSpec]) -> Optional[dict]:
    return None if mu is None else mu.describe()


def eta_grid(width: float, points: int = constants.ETA_GRID_SIZE) -> np.ndarray:
    """points log-spaced values in (0, width) plus the midpoint width / 2."""
    if not width > 0:
        raise DomainError(f"the eta interval must be non-empty, got width {width}")
    grid = width * np.geomspace(ETA_FLOOR, 1 - ETA_FLOOR, points)
    return np.unique(np.append(grid, width / 2))


### Hardy and polydisk spaces ###

def eval_norm_hp(s: complex, p: float) -> EvalBound:
    """||delta_s||_{(H^p)*} = zeta(2 Re s)^{1/p}."""
    sigma = _real_part(s)
    _conjugate_exponent(p)
    return EvalBound(zeta(2 * sigma) ** (1.0 / p), "exact", "Hp", {"sigma": sigma, "p": p})


def eval_norm_bp(s: complex, p: float) -> EvalBound:
    """||delta_s||_{(B^p)*} = zeta(2 Re s)^{2/p}."""
    sigma = _real_part(s)
    _conjugate_exponent(p)
    return EvalBound(zeta(2 * sigma) ** (2.0 / p), "exact", "Bp", {"sigma": sigma, "p": p})


def eval_norm_polydisk(z: Sequence[complex], p: float) -> EvalBound:
    """prod (1 - |z_j|^2)^{-2/p} at a point of the polydisk."""
    _conjugate_exponent(p)
    moduli = np.abs(np.asarray(z, dtype=complex)) ** 2
    if np.any(moduli >= 1):
        raise DomainError("the point must lie in the open polydisk")
    value = float(np.exp(-2.0 / p * np.sum(np.log1p(-moduli))))
    return EvalBound(value, "exact", "Bp", {"coordinates": len(moduli), "p": p})


def kernel_bp(s: complex, w: complex, N: int = constants.KERNEL_N) -> KernelSum:
    """B^2 kernel sum d(n) n^{-w - conj(s)} over n <= N."""
    x = _real_part(s) + _real_part(w)
    exponent = complex(w) + complex(s).conjugate()
    logs = log_table(N)
    value = complex(np.sum(divisor_count_table(N) * np.exp(-exponent * logs)))
    # sum over n > N of d(n) n^{-x} against the mean order log t + 2 gamma
    tail = N ** (1 - x) * ((math.log(N) + 2 * EULER_GAMMA) / (x - 1) + 1 / (x - 1) ** 2)
    return KernelSum(value, tail, N)


def bp_kernel_witness(sigma: float, prime_bound: int = 100_000, max_exponent: int = 40) -> dict:
    """
    Normalized B^2 kernel restricted to prime_bound-smooth n with exponents <= max_exponent.
    Its value at sigma divided by its norm is sqrt(prod_p sum_k (k + 1) p^{-2 sigma k}),
    to be compared with ||delta_sigma||_{(B^2)*} = zeta(2 sigma).
    """
    _real_part(sigma)
    primes = primes_up_to(prime_bound).astype(float)
    k = np.arange(max_exponent + 1, dtype=float)
    local = np.exp(-2 * sigma * np.multiply.outer(np.log(primes), k)) @ (k + 1)
    attained = float(np.exp(0.5 * np.sum(np.log(local))))
    bound = zeta(2 * sigma)
    return {"sigma": sigma, "prime_bound": prime_bound, "max_exponent": max_exponent,
            "attained": attained, "bound": bound, "ratio": attained / bound}


### Bergman spaces A^p_mu ###

def kernel_a2(mu: MeasureSpec, s: complex, w: complex, N: int = constants.KERNEL_N) -> KernelSum:
    """
    A^2_mu kernel sum n^{-w - conj(s)} / w_n over n <= N. The tail bound uses
    w_n >= mu([0, c]) n^{-2c} with c = (x - 1) / 4, x = Re(s) + Re(w).
    """
    x = _real_part(s) + _real_part(w)
    exponent = complex(w) + complex(s).conjugate()
    inverse_weights = 1.0 / weight_sequence(mu).values(N)
    value = complex(np.sum(inverse_weights * np.exp(-exponent * log_table(N))))
    if isinstance(mu, DiracAtZero):
        tail = log_weighted_tail(x, 0.0, N)
    elif isinstance(mu, AlphaMeasure):
        tail = log_weighted_tail(x, 1 + mu.alpha, N)
    else:
        c = (x - 1) / 4
        tail = N ** (1 - x + 2 * c) / ((x - 1 - 2 * c) * mass_below(mu, c))
    return KernelSum(value, tail, N)


def _kernel_diagonal(mu: MeasureSpec, sigma: float) -> float:
    """K_mu(sigma, sigma) = sum n^{-2 sigma} / w_n."""
    if isinstance(mu, DiracAtZero):
        return zeta(2 * sigma)
    if isinstance(mu, AlphaMeasure):
        return log_weighted_zeta(2 * sigma, 1 + mu.alpha)
    kernel = kernel_a2(mu, sigma, sigma)
    if kernel.tail_bound > 1e-6 * kernel.value.real:
        logger.warning(f"A^2 kernel at sigma={sigma} truncated at N={kernel.N} with tail bound {kernel.tail_bound:.3g}")
    return kernel.value.real


def _kernel_diagonal_zero(mu: MeasureSpec, sigma: float) -> float:
    """K_mu(sigma, sigma) - 1, summed from n = 2."""
    if isinstance(mu, DiracAtZero):
        return zeta_minus_one(2 * sigma)
    if isinstance(mu, AlphaMeasure):
        return log_weighted_zeta(2 * sigma, 1 + mu.alpha, from_two=True)
    return max(_kernel_diagonal(mu, sigma) - 1, 0.0)


def eval_norm_a2(mu: MeasureSpec, s: complex) -> EvalBound:
    sigma = _real_part(s)
    value = math.sqrt(_kernel_diagonal(mu, sigma))
    return EvalBound(value, "exact", "Ap_mu", {"sigma": sigma, "p": 2.0, "measure": _describe(mu)})


def eval_bound_ap_even(mu: MeasureSpec, s: complex, p: float) -> EvalBound:
    """||delta_s||_{(A^p_mu)*} <= ||delta_s||_{(A^2_mu)*}^{2/p} for even p."""
    if p < 2 or p != int(p) or int(p) % 2:
        raise DomainError(f"p must be an even integer, got {p}")
    base = eval_norm_a2(mu, s)
    kind = "exact" if p == 2 else "upper-bound"
    return EvalBound(base.value ** (2.0 / p), kind, "Ap_mu", dict(base.parameters, p=p))


def hardy_eval(t: float, p: float) -> float:
    """Delta_p(t) = zeta(2t)^{1/p}."""
    return zeta(2 * t) ** (1.0 / p)


def hardy_eval_zero(t: float, p: float) -> float:
    """
    Upper bound for evaluation at t on the zero-constant-coefficient subspace of H^p:
    min of zeta(2t)^{1/p}, (zeta(2t) - 1)^{1/2} for p >= 2, and zeta(t) - 1 for t > 1.
    """
    z2 = zeta(2 * t)
    candidates = [z2 ** (1.0 / p)]
    if p >= 2:
        candidates.append(math.sqrt(zeta_minus_one(2 * t)))
    if t > 1:
        candidates.append(zeta_minus_one(t))
    return min(candidates)


def _lp_mass_integral(mu: MeasureSpec, g: Callable[[float], float], c: float) -> float:
    if isinstance(mu, DiracAtZero):
        return g(0.0)
    if isinstance(mu, AlphaMeasure):
        log_c = (mu.alpha + 1) * math.log(2.0) - math.lgamma(mu.alpha + 1)
        value, error = scipy_integrate.quad(lambda e: math.exp(log_c - 2 * e) * g(e), 0.0, c,
                                            weight="alg", wvar=(mu.alpha, 0.0), limit=200, epsrel=1e-8)
    else:
        top = min(c, mu.cutoff)
        value, error = scipy_integrate.quad(lambda e: mu._scalar_h(e) * g(e), 0.0, top, limit=200, epsrel=1e-8)
        if c > mu.cutoff:
            value += mu.tail_mass * g(c)
    if not math.isfinite(value):
        raise QuadratureError(f"L^p' integral over [0, {c}] did not converge")
    return value


def _quotient(mu: MeasureSpec, sigma: float, p: float, eta: float, delta: Callable[[float, float], float]) -> float:
    c = sigma - 0.5 - eta
    mass = mass_below(mu, c)
    if mass <= 0:
        return math.inf
    q = _conjugate_exponent(p)
    if math.isinf(q):
        # delta is non-increasing, so the sup over [0, c] sits at the right end
        return delta(sigma - c, p) / mass
    integral = _lp_mass_integral(mu, lambda e: delta(sigma - e, p) ** q, c)
    return integral ** (1.0 / q) / mass


def _infimum(mu, sigma, p, grid, delta) -> tuple:
    grid = np.asarray(grid, dtype=float)
    if len(grid) == 0:
        raise DomainError("the eta grid is empty")
    if np.any(grid <= 0) or np.any(grid >= sigma - 0.5):
        raise DomainError(f"eta values must lie in (0, {sigma - 0.5})")
    values = [_quotient(mu, sigma, p, float(eta), delta) for eta in grid]
    best = int(np.argmin(values))
    return values[best], float(grid[best])


def eval_bound_ap_general(mu: MeasureSpec, s: complex, p: float, grid: Optional[Sequence[float]] = None,
                          eta_points: int = constants.ETA_GRID_SIZE) -> EvalBound:
    """
    inf over eta of ||Delta_p(Re s - .)||_{L^{p'}([0, Re s - 1/2 - eta], mu)} / mu([0, Re s - 1/2 - eta]).
    """
    sigma = _real_part(s)
    _conjugate_exponent(p)
    grid = eta_grid(sigma - 0.5, eta_points) if grid is None else grid
    value, eta = _infimum(mu, sigma, p, grid, hardy_eval)
    return EvalBound(value, "upper-bound", "Ap_mu", {"sigma": sigma, "p": p, "eta": eta, "measure": _describe(mu)})


def eval_bound_ap_zero(mu: MeasureSpec, t: float, p: float, grid: Optional[Sequence[float]] = None,
                       eta_points: int = constants.ETA_GRID_SIZE) -> EvalBound:
    """Evaluation at t on the subspace of A^p_mu with vanishing constant coefficient."""
    sigma = _real_part(t)
    _conjugate_exponent(p)
    if p == 2:
        value = math.sqrt(_kernel_diagonal_zero(mu, sigma))
        return EvalBound(value, "exact", "Ap_mu_zero", {"sigma": sigma, "p": p, "measure": _describe(mu)})
    grid = eta_grid(sigma - 0.5, eta_points) if grid is None else grid
    value, eta = _infimum(mu, sigma, p, grid, hardy_eval_zero)
    return EvalBound(value, "upper-bound", "Ap_mu_zero", {"sigma": sigma, "p": p, "eta": eta, "measure": _describe(mu)})


def eval_lower_ap(mu: MeasureSpec, sigma: float, p: float, N: int = 2000, cfg: Optional[SamplerConfig] = None) -> EvalBound:
    """
    Lower bound |F(sigma)| / ||F||_{A^p_mu} over the test functions 1, the partial sum of
    zeta_sigma^{2/p} and the partial sum of (K_sigma)^{2/p}. Monte Carlo norms (p not even)
    are inflated by two standard errors.
    """
    _real_part(sigma)
    if p < 1:
        raise DomainError(f"p must be >= 1, got {p}")
    shift = np.exp(-sigma * log_table(N))
    zeta_part = np.asarray(zeta_power_coeffs(2.0 / p, N).values, dtype=float) * shift
    kernel_coeffs = shift / weight_sequence(mu).values(N)
    kernel_part = np.real(np.asarray(dirichlet_power(ArithmeticSequence(kernel_coeffs.astype(complex)), 2.0 / p).values)) \
        if p != 2 else kernel_coeffs
    best, best_name, std_error = 1.0, "constant", 0.0
    for name, coeffs in (("zeta_power", zeta_part), ("kernel_power", kernel_part)):
        F = DirichletPolynomial(np.asarray(coeffs, dtype=complex))
        norm = ap_norm(F, mu, p, cfg)
        quotient = abs(evaluate(F, sigma)) / (norm.value + 2 * norm.std_error)
        logger.debug(f"eval_lower_ap candidate {name}: quotient {quotient:.6g}")
        if quotient > best:
            best, best_name, std_error = quotient, name, norm.std_error
    parameters = {"sigma": sigma, "p": p, "N": N, "test_function": best_name, "measure": _describe(mu),
                  "norm_std_error": std_error}
    if cfg is not None:
        parameters.update(samples=cfg.samples, seed=cfg.seed)
    return EvalBound(best, "lower-bound", "Ap_mu", parameters)


### Dirichlet spaces D^p_mu ###

def _panels(start: float, stop: float) -> np.ndarray:
    """Edges geometric in the distance to 1/2, so that a blow-up at 1/2 is resolved."""
    distance = start - 0.5
    count = max(2, int(math.ceil(math.log2((stop - 0.5) / distance))) + 1)
    return 0.5 + distance * np.geomspace(1.0, (stop - 0.5) / distance, count)


def eval_bound_dp(mu: MeasureSpec, s: complex, p: float, eta_points: int = 8) -> EvalBound:
    """2^{1/p'} max(1, integral from Re s to infinity of ||delta_t|| on the zero-constant A^p_mu)."""
    sigma = _real_part(s)
    q = _conjugate_exponent(p)

    def integrand(t: float) -> float:
        return eval_bound_ap_zero(mu, t, p, eta_points=eta_points).value

    total, error = 0.0, 0.0
    edges = _panels(sigma, sigma + 1.0)
    for left, right in zip(edges[:-1], edges[1:]):
        value, err = scipy_integrate.quad(integrand, left, right, limit=100, epsrel=1e-7)
        total, error = total + value, error + err
    value, err = scipy_integrate.quad(integrand, sigma + 1.0, np.inf, limit=100, epsrel=1e-7)
    total, error = total + value, error + err
    if not math.isfinite(total) or error > 1e-3 * max(1.0, total):
        logger.warning(f"D^p evaluation tail at sigma={sigma}, p={p}: integral {total:.6g} with error {error:.3g}")
        raise DivergentTailError(f"integral of the evaluation norm on [{sigma}, inf) does not converge (error {error:.3g})")
    factor = 1.0 if math.isinf(q) else 2 ** (1.0 / q)
    return EvalBound(factor * max(1.0, total), "upper-bound", "Dp",
                     {"sigma": sigma, "p": p, "integral": total, "measure": _describe(mu)})


### Weighted disk spaces ###

def _unit_weight(r):
    return np.ones_like(np.asarray(r, dtype=float))


def _disk_quotient(weight: Callable, rho: float, p: float, eta: float) -> float:
    start = rho + eta
    mass, _ = scipy_integrate.quad(lambda r: float(weight(r)), start, 1.0, limit=200)
    if mass <= 0:
        return math.inf
    q = _conjugate_exponent(p)
    if math.isinf(q):
        return 1.0 / (1 - (rho / start) ** 2) / mass
    integral, _ = scipy_integrate.quad(lambda r: (1 - (rho / r) ** 2) ** (-q / p) * float(weight(r)), start, 1.0,
                                       limit=200, epsrel=1e-8)
    return integral ** (1.0 / q) / mass


def disk_eval_bound(weight: Optional[Callable], z: complex, p: float, grid: Optional[Sequence[float]] = None,
                    eta_points: int = constants.ETA_GRID_SIZE) -> EvalBound:
    """
    inf over eta of ||r -> (1 - (|z|/r)^2)^{-1/p}||_{L^{p'}([|z| + eta, 1], weight(r) dr)} / S([|z| + eta, 1]).
    weight defaults to 1 (the classical Bergman space).
    """
    rho = abs(complex(z))
    if rho >= 1:
        raise DomainError(f"z must lie in the open unit disk, got |z|={rho}")
    _conjugate_exponent(p)
    weight = _unit_weight if weight is None else weight
    grid = eta_grid(1 - rho, eta_points) if grid is None else np.asarray(grid, dtype=float)
    if len(grid) == 0:
        raise DomainError("the eta grid is empty")
    values = [_disk_quotient(weight, rho, p, float(eta)) for eta in grid]
    best = int(np.argmin(values))
    return EvalBound(values[best], "upper-bound", "disk", {"radius": rho, "p": p, "eta": float(grid[best])})


def disk_dirichlet_eval_bound(weight: Optional[Callable], z: complex, p: float,
                              eta_points: int = 16) -> EvalBound:
    """2^{1/p'} max(1, integral over [0, |z|] of the weighted Bergman evaluation bound)."""
    rho = abs(complex(z))
    if rho >= 1:
        raise DomainError(f"z must lie in the open unit disk, got |z|={rho}")
    q = _conjugate_exponent(p)
    total = 0.0
    if rho > 0:
        total, _ = scipy_integrate.quad(lambda r: disk_eval_bound(weight, r, p, eta_points=eta_points).value,
                                        0.0, rho, limit=100, epsrel=1e-6)
    factor = 1.0 if math.isinf(q) else 2 ** (1.0 / q)
    return EvalBound(factor * max(1.0, total), "upper-bound", "disk", {"radius": rho, "p": p, "integral": total})


def bergman_disk_kernel_norm(z: complex) -> float:
    """||delta_z|| on the unweighted Bergman space A^2(D): 1 / (1 - |z|^2)."""
    rho = abs(complex(z))
    if rho >= 1:
        raise DomainError(f"z must lie in the open unit disk, got |z|={rho}")
    return 1.0 / (1 - rho * rho)
