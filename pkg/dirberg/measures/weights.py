import logging
import threading
from functools import lru_cache

import numpy as np

from dirberg import APP_NAME
from dirberg.measures.measures import AlphaMeasure, DiracAtZero, MeasureSpec, quadrature_rule
from dirberg.services import constants
from dirberg.services.errors import DomainError

logger = logging.getLogger(APP_NAME)

CHUNK = 4096


class WeightSequence:
    """
    n -> w_n (and w~_n) for a fixed measure. The table grows on demand; extension is
    serialized so that concurrent readers always see a consistent prefix.
    """

    def __init__(self, source: MeasureSpec):
        self.source = source
        self._lock = threading.Lock()
        self._weights = np.ones(1)
        self._tilde = np.ones(1)

    def _compute(self, ns: np.ndarray, exponent: float) -> np.ndarray:
        logs = np.log(ns.astype(float))
        mu = self.source
        if isinstance(mu, DiracAtZero):
            return np.ones(len(ns))
        if isinstance(mu, AlphaMeasure):
            return (1 + exponent * logs / 2) ** (-1 - mu.alpha)
        sigma, weights = quadrature_rule(mu, constants.LEGENDRE_ORDER)
        out = np.empty(len(ns))
        for start in range(0, len(ns), CHUNK):
            block = logs[start:start + CHUNK]
            out[start:start + CHUNK] = np.exp(-exponent * np.multiply.outer(block, sigma)) @ weights
        # certified tail mass beyond the cutoff, weighted at the cutoff
        out += mu.tail_mass * np.exp(-exponent * logs * mu.cutoff)
        return out

    def _extend(self, N: int) -> None:
        with self._lock:
            have = len(self._weights)
            if N <= have:
                return
            target = max(N, 2 * have)
            ns = np.arange(have + 1, target + 1)
            weights = np.concatenate([self._weights, self._compute(ns, 2.0)])
            tilde = np.concatenate([self._tilde, self._compute(ns, 1.0)])
            weights.setflags(write=False)
            tilde.setflags(write=False)
            self._weights, self._tilde = weights, tilde

    def values(self, N: int) -> np.ndarray:
        if N < 1:
            raise DomainError(f"N must be >= 1, got {N}")
        if N > len(self._weights):
            self._extend(N)
        return self._weights[:N]

    def tilde_values(self, N: int) -> np.ndarray:
        if N < 1:
            raise DomainError(f"N must be >= 1, got {N}")
        if N > len(self._tilde):
            self._extend(N)
        return self._tilde[:N]

    def __getitem__(self, n: int) -> float:
        return float(self.values(n)[n - 1])

    def slow_decay_witness(self, epsilon: float, N: int) -> dict:
        """Location and trend of min over n <= N of w_n n^epsilon."""
        scaled = self.values(N) * np.arange(1, N + 1, dtype=float) ** epsilon
        tail = scaled[-max(2, N // 100):]
        return {
            "epsilon": epsilon,
            "argmin": int(np.argmin(scaled)) + 1,
            "min": float(scaled.min()),
            "increasing_at_end": bool(np.all(np.diff(tail) >= 0)),
        }


@lru_cache(maxsize=32)
def weight_sequence(mu: MeasureSpec) -> WeightSequence:
    """Shared WeightSequence per measure value; densities without a family key are shared per object."""
    return WeightSequence(mu)
