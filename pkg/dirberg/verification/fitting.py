"""Least-squares fits of the asymptotic laws y ~ C x^e and y ~ a |log x| + b."""
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from dirberg.services.errors import DomainError


@dataclass(frozen=True)
class PowerFit:
    exponent: float
    constant: float
    residual: float

    def to_dict(self) -> dict:
        return {"exponent": self.exponent, "constant": self.constant, "residual": self.residual}


def _design(x: Sequence[float], y: Sequence[float]):
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    if x.shape != y.shape or len(x) < 2:
        raise DomainError(f"need at least two paired points, got {x.shape} and {y.shape}")
    return x, y


def fit_power_law(x: Sequence[float], y: Sequence[float], linear_correction: bool = False) -> PowerFit:
    """
    OLS of log y on log x; residual is the RMS of the log residuals. linear_correction adds
    a term b x to the model (y ~ C x^e (1 + b x)), for windows where the next order matters.
    """
    x, y = _design(x, y)
    if np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("power-law fits need positive data")
    lx, ly = np.log(x), np.log(y)
    columns = [lx, np.ones_like(lx)] + ([x] if linear_correction else [])
    design = np.stack(columns, axis=1)
    if len(x) <= design.shape[1]:
        raise DomainError(f"need more than {design.shape[1]} points for this fit, got {len(x)}")
    coef, *_ = np.linalg.lstsq(design, ly, rcond=None)
    residual = float(np.sqrt(np.mean((ly - design @ coef) ** 2)))
    return PowerFit(float(coef[0]), float(np.exp(coef[1])), residual)


def fit_log_law(x: Sequence[float], y: Sequence[float]) -> PowerFit:
    """y = a |log x| + b; exponent holds a, constant b, residual the relative RMS."""
    x, y = _design(x, y)
    lx = np.abs(np.log(x))
    slope, intercept = np.polyfit(lx, y, 1)
    residual = float(np.sqrt(np.mean(((y - (slope * lx + intercept)) / y) ** 2)))
    return PowerFit(float(slope), float(intercept), residual)


def blowup_fit(sigmas: Sequence[float], values: Sequence[float], linear_correction: bool = False) -> PowerFit:
    """values ~ C (2 sigma - 1)^{-e}: the returned exponent is e."""
    fit = fit_power_law(2 * np.asarray(sigmas, dtype=float) - 1, values, linear_correction)
    return PowerFit(-fit.exponent, fit.constant, fit.residual)


def window(bounds: Sequence[float], points: int, geometric_about: float = 0.5) -> np.ndarray:
    """points sigmas in [lo, hi], geometric in the distance to geometric_about."""
    lo, hi = bounds
    if not geometric_about < lo < hi:
        raise DomainError(f"window must satisfy {geometric_about} < lo < hi, got {bounds}")
    return geometric_about + np.geomspace(lo - geometric_about, hi - geometric_about, points)
