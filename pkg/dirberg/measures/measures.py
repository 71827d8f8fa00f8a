"""
Probability measures on (0, inf) with 0 in their support, and quadrature against them.

    AlphaMeasure(alpha)   d mu = 2^(alpha+1) / Gamma(alpha+1) sigma^alpha exp(-2 sigma) d sigma
    DiracAtZero()         the point mass at 0 (Bergman weights collapse to the Hardy space)
    Density(h, cutoff, tail_mass)
                          a user density with an effective support (0, cutoff] and a
                          certificate tail_mass >= mu((cutoff, inf))
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple, Union

import numpy as np
from scipy import integrate as scipy_integrate
from scipy.special import erfc, gammainc, gammaincc, gammaln, roots_genlaguerre

from dirberg import APP_NAME
from dirberg.services import constants
from dirberg.services.config import MeasureConfig
from dirberg.services.errors import DomainError, QuadratureError

logger = logging.getLogger(APP_NAME)

NEAR_ZERO = (1e-6, 1e-4, 1e-2)


@dataclass(frozen=True)
class AlphaMeasure:
    alpha: float = 0.0

    def __post_init__(self):
        if not self.alpha > -1:
            raise DomainError(f"alpha must be > -1, got {self.alpha}")

    def density(self, sigma):
        sigma = np.asarray(sigma, dtype=float)
        log_c = (self.alpha + 1) * np.log(2.0) - gammaln(self.alpha + 1)
        with np.errstate(divide="ignore"):
            return np.where(sigma > 0, np.exp(log_c + self.alpha * np.log(np.where(sigma > 0, sigma, 1.0)) - 2 * sigma), 0.0)

    def describe(self) -> dict:
        return {"type": constants.MEASURE_ALPHA, "alpha": self.alpha}


@dataclass(frozen=True)
class DiracAtZero:

    def describe(self) -> dict:
        return {"type": constants.MEASURE_DIRAC}


@dataclass(frozen=True, eq=False)
class Density:
    h: Callable
    cutoff: float
    tail_mass: float
    name: str = "density"
    # value identity for densities built from a family and its parameters
    key: Optional[tuple] = None

    def __eq__(self, other):
        if self.key is None or not isinstance(other, Density):
            return self is other
        return self.key == other.key

    def __hash__(self):
        return hash(self.key) if self.key is not None else id(self)

    def __post_init__(self):
        if not self.cutoff > 0:
            raise DomainError(f"density cutoff must be > 0, got {self.cutoff}")
        if not 0 <= self.tail_mass < 1:
            raise DomainError(f"tail mass certificate must lie in [0, 1), got {self.tail_mass}")
        mass, error = scipy_integrate.quad(self._scalar_h, 0.0, self.cutoff, limit=200, epsabs=1e-13, epsrel=1e-12)
        if abs(mass + self.tail_mass - 1) > constants.MASS_TOL + self.tail_mass + error:
            raise DomainError(f"density {self.name} has mass {mass} on (0, {self.cutoff}] with tail {self.tail_mass}")
        if not any(self._scalar_h(x) > 0 for x in NEAR_ZERO if x < self.cutoff):
            raise DomainError(f"density {self.name} vanishes near 0; 0 must lie in the support")

    def _scalar_h(self, sigma: float) -> float:
        return float(np.asarray(self.h(np.asarray(sigma, dtype=float))))

    def density(self, sigma):
        return np.asarray(self.h(np.asarray(sigma, dtype=float)), dtype=float)

    def describe(self) -> dict:
        return {"type": constants.MEASURE_DENSITY, "name": self.name, "cutoff": self.cutoff, "tail_mass": self.tail_mass}


MeasureSpec = Union[AlphaMeasure, DiracAtZero, Density]


def gamma_density(shape: float, rate: float, cutoff: float) -> Density:
    log_c = shape * np.log(rate) - gammaln(shape)

    def h(sigma):
        sigma = np.asarray(sigma, dtype=float)
        safe = np.where(sigma > 0, sigma, 1.0)
        return np.where(sigma > 0, np.exp(log_c + (shape - 1) * np.log(safe) - rate * sigma), 0.0)

    return Density(h, cutoff, float(gammaincc(shape, rate * cutoff)), name=f"gamma({shape}, {rate})",
                   key=("gamma", shape, rate, cutoff))


def uniform_density(scale: float) -> Density:
    return Density(lambda sigma: np.where((np.asarray(sigma) >= 0) & (np.asarray(sigma) <= scale), 1.0 / scale, 0.0),
                   scale, 0.0, name=f"uniform(0, {scale})", key=("uniform", scale))


def half_normal_density(scale: float, cutoff: float) -> Density:
    c = np.sqrt(2.0 / np.pi) / scale
    return Density(lambda sigma: np.where(np.asarray(sigma) >= 0, c * np.exp(-0.5 * (np.asarray(sigma) / scale) ** 2), 0.0),
                   cutoff, float(erfc(cutoff / (scale * np.sqrt(2.0)))), name=f"half_normal({scale})",
                   key=("half_normal", scale, cutoff))


def measure_from_config(config: MeasureConfig) -> MeasureSpec:
    if config.type == constants.MEASURE_ALPHA:
        return AlphaMeasure(config.alpha)
    if config.type == constants.MEASURE_DIRAC:
        return DiracAtZero()
    if config.family == "gamma":
        return gamma_density(config.shape, config.rate, config.cutoff)
    if config.family == "uniform":
        return uniform_density(config.scale)
    return half_normal_density(config.scale, config.cutoff)


def density(mu: MeasureSpec, sigma):
    if isinstance(mu, DiracAtZero):
        raise DomainError("the Dirac measure at 0 has no density")
    return mu.density(sigma)


@lru_cache(maxsize=64)
def laguerre_rule(alpha: float, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes sigma_k and weights of mu_alpha: generalized Gauss-Laguerre in t = 2 sigma,
    weights divided by Gamma(alpha + 1) so that they sum to 1.
    """
    t, w = roots_genlaguerre(nodes, alpha)
    weights = w / np.exp(gammaln(alpha + 1))
    sigma = t / 2
    sigma.setflags(write=False)
    weights.setflags(write=False)
    return sigma, weights


@lru_cache(maxsize=16)
def _legendre_panels(cutoff: float, panels: int, order: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    # geometric grading toward 0 resolves n^{-2 sigma} for large n
    edges = cutoff * np.concatenate([[0.0], np.geomspace(1e-7, 1.0, panels)])
    left, right = edges[:-1, None], edges[1:, None]
    nodes = (0.5 * (right - left) * x[None, :] + 0.5 * (right + left)).ravel()
    weights = (0.5 * (right - left) * w[None, :]).ravel()
    return nodes, weights


def quadrature_rule(mu: MeasureSpec, nodes: int = constants.AP_QUAD_NODES) -> Tuple[np.ndarray, np.ndarray]:
    """(sigma nodes, weights) integrating smooth g against mu; weights sum to ~1."""
    if isinstance(mu, AlphaMeasure):
        return laguerre_rule(float(mu.alpha), nodes)
    if isinstance(mu, DiracAtZero):
        return np.zeros(1), np.ones(1)
    sigma, weights = _legendre_panels(float(mu.cutoff), constants.LEGENDRE_PANELS, nodes)
    return sigma, weights * mu.density(sigma)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    nodes: int = 0


def integrate_with_error(mu: MeasureSpec, g: Callable, method: str = "auto", tol: float = constants.QUAD_TOL) -> QuadratureResult:
    """
    Integral of g against mu. g must accept numpy arrays (Gauss-Laguerre) and floats
    (adaptive quadrature). method: auto | laguerre | adaptive.
    """
    if isinstance(mu, DiracAtZero):
        return QuadratureResult(float(np.real(g(0.0))), 0.0, 1)
    if isinstance(mu, AlphaMeasure) and method in ("auto", "laguerre"):
        return _laguerre_adaptive(mu, g, tol)
    if isinstance(mu, AlphaMeasure):
        value, error = _alpha_adaptive(mu, g, tol)
    else:
        value, error = scipy_integrate.quad(lambda x: float(np.real(g(x))) * float(mu.density(x)), 0.0, mu.cutoff,
                                            limit=400, epsabs=tol * 1e-3, epsrel=1e-12)
    if error > tol:
        logger.warning(f"Adaptive quadrature error {error:.3g} above tolerance {tol:.3g}")
        raise QuadratureError(f"adaptive quadrature did not converge: error estimate {error:.3g} > {tol:.3g}")
    if isinstance(mu, Density) and mu.tail_mass > 0:
        # tail contribution estimated at the cutoff, assuming |g| non-increasing beyond it
        edge = float(np.real(g(mu.cutoff)))
        value += edge * mu.tail_mass
        error += abs(edge) * mu.tail_mass
    return QuadratureResult(value, error)


def _alpha_adaptive(mu: AlphaMeasure, g: Callable, tol: float) -> Tuple[float, float]:
    # sigma^alpha on [0, 1] goes into QUADPACK's algebraic weight
    c = np.exp((mu.alpha + 1) * np.log(2.0) - gammaln(mu.alpha + 1))
    head, head_error = scipy_integrate.quad(lambda x: c * float(np.real(g(x))) * np.exp(-2 * x), 0.0, 1.0,
                                            weight="alg", wvar=(mu.alpha, 0.0), limit=400, epsabs=tol * 1e-3, epsrel=1e-12)
    tail, tail_error = scipy_integrate.quad(lambda x: float(np.real(g(x))) * float(mu.density(x)), 1.0, np.inf,
                                            limit=400, epsabs=tol * 1e-3, epsrel=1e-12)
    return head + tail, head_error + tail_error


def _laguerre_adaptive(mu: AlphaMeasure, g: Callable, tol: float) -> QuadratureResult:
    nodes = constants.LAGUERRE_START_NODES
    sigma, weights = laguerre_rule(float(mu.alpha), nodes)
    previous = float(np.real(np.dot(weights, g(sigma))))
    while nodes < constants.LAGUERRE_MAX_NODES:
        nodes *= 2
        sigma, weights = laguerre_rule(float(mu.alpha), nodes)
        current = float(np.real(np.dot(weights, g(sigma))))
        if abs(current - previous) <= tol * max(1.0, abs(current)):
            return QuadratureResult(current, abs(current - previous), nodes)
        previous = current
    logger.warning(f"Gauss-Laguerre did not settle within {constants.LAGUERRE_MAX_NODES} nodes for alpha={mu.alpha}")
    raise QuadratureError(f"Gauss-Laguerre quadrature did not converge to {tol:.3g} for alpha={mu.alpha}")


def integrate(mu: MeasureSpec, g: Callable, method: str = "auto") -> float:
    return integrate_with_error(mu, g, method).value


def mass_below(mu: MeasureSpec, c: float) -> float:
    """mu([0, c])."""
    if c < 0:
        return 0.0
    if isinstance(mu, DiracAtZero):
        return 1.0
    if isinstance(mu, AlphaMeasure):
        return float(gammainc(mu.alpha + 1, 2 * c))
    top = min(c, mu.cutoff)
    mass = scipy_integrate.quad(mu._scalar_h, 0.0, top, limit=200, epsabs=1e-13)[0]
    if c > mu.cutoff:
        mass += scipy_integrate.quad(mu._scalar_h, mu.cutoff, c, limit=200)[0]
    return mass


def bergman_weight(mu: MeasureSpec, n: float) -> float:
    """w_n = integral of n^{-2 sigma} d mu(sigma); n may be any real >= 1."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if isinstance(mu, DiracAtZero):
        return 1.0
    log_n = float(np.log(n))
    if isinstance(mu, AlphaMeasure):
        return float((1 + log_n) ** (-1 - mu.alpha))
    return integrate_with_error(mu, lambda s: np.exp(-2 * s * log_n)).value


def bergman_weight_quadrature(mu: MeasureSpec, n: float, method: str = "laguerre") -> QuadratureResult:
    """w_n by quadrature even where a closed form exists (cross-validation path)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    log_n = float(np.log(n))
    return integrate_with_error(mu, lambda s: np.exp(-2 * s * log_n), method)


def tilde_weight(mu: MeasureSpec, n: float) -> float:
    """w~_n = integral of n^{-sigma} d mu(sigma)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if isinstance(mu, DiracAtZero):
        return 1.0
    log_n = float(np.log(n))
    if isinstance(mu, AlphaMeasure):
        return float((1 + log_n / 2) ** (-1 - mu.alpha))
    return integrate_with_error(mu, lambda s: np.exp(-s * log_n)).value


def beta_h(mu: MeasureSpec, sigma: float) -> float:
    """beta_h(sigma) = integral over [0, sigma] of (sigma - u) h(u) du."""
    if isinstance(mu, DiracAtZero):
        raise DomainError("beta_h needs a measure with a density")
    if sigma < 0:
        raise DomainError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return 0.0
    if isinstance(mu, AlphaMeasure):
        a = mu.alpha
        return float(sigma * gammainc(a + 1, 2 * sigma) - 0.5 * (a + 1) * gammainc(a + 2, 2 * sigma))
    value, _ = scipy_integrate.quad(lambda u: (sigma - u) * mu._scalar_h(u), 0.0, sigma, limit=200, epsabs=1e-14, epsrel=1e-12)
    return value
