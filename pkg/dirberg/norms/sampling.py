"""
Reproducible sampling on the truncated polytorus T^K (Haar measure) and polydisk D^K
(product of normalized area measures).

Sample i lives in block i // MC_BLOCK. Block b is drawn from a Philox generator keyed by
the seed with counter word b, so (seed, K, i) -> sample is a pure function and blocks can be
evaluated by any number of threads without changing a single bit of the result.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from dirberg import APP_NAME
from dirberg.dirichlet_poly.polynomial import Character
from dirberg.services import constants
from dirberg.services.errors import DomainError

logger = logging.getLogger(APP_NAME)

TWO_PI = 2 * np.pi
DOMAINS = ("torus", "polydisk")


@dataclass(frozen=True)
class SamplerConfig:
    K: int
    samples: int = 100_000
    seed: int = 0
    domain: str = "torus"
    block: int = field(default_factory=lambda: constants.MC_BLOCK)

    def __post_init__(self):
        if self.K < 1:
            raise DomainError(f"K must be >= 1, got {self.K}")
        if self.samples < 1:
            raise DomainError(f"samples must be >= 1, got {self.samples}")
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.domain not in DOMAINS:
            raise DomainError(f"domain must be one of {DOMAINS}, got {self.domain}")

    @property
    def blocks(self) -> int:
        return math.ceil(self.samples / self.block)

    def describe(self) -> dict:
        return {"K": self.K, "samples": self.samples, "seed": self.seed, "domain": self.domain}


@dataclass(frozen=True)
class NormEstimate:
    value: float
    std_error: float = 0.0
    samples: int = 0
    method: str = "exact"
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        out = {"value": self.value, "std_error": self.std_error, "samples": self.samples, "method": self.method}
        if self.method == "monte-carlo":
            out["seed"] = self.seed
        return out


def block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, block]))


def log_coordinates(cfg: SamplerConfig, block: int) -> np.ndarray:
    """log z for every sample of a block, shape (block size, K)."""
    rng = block_generator(cfg.seed, block)
    if cfg.domain == "polydisk":
        u = np.maximum(rng.random((cfg.block, cfg.K)), np.finfo(float).tiny)
        theta = rng.random((cfg.block, cfg.K))
        return 0.5 * np.log(u) + 1j * TWO_PI * theta
    theta = rng.random((cfg.block, cfg.K))
    return 1j * TWO_PI * theta


def sample_character(cfg: SamplerConfig, stream_index: int) -> Character:
    if stream_index < 0:
        raise DomainError(f"stream index must be >= 0, got {stream_index}")
    block, row = divmod(stream_index, cfg.block)
    coords = np.exp(log_coordinates(cfg, block)[row])
    if cfg.domain == "torus":
        # exact unit modulus
        coords = coords / np.abs(coords)
    return Character(coords, mode=cfg.domain)


def map_blocks(cfg: SamplerConfig, worker: Callable[[np.ndarray], np.ndarray], threads: Optional[int] = None) -> np.ndarray:
    """
    Apply worker to the log-coordinates of every block (the last one cut to size) and
    stack the per-sample results in sample order.
    """
    threads = constants.THREADS if threads is None else threads

    def run(block: int) -> np.ndarray:
        count = min(cfg.block, cfg.samples - block * cfg.block)
        return worker(log_coordinates(cfg, block)[:count])

    if threads > 1 and cfg.blocks > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts: List[np.ndarray] = list(pool.map(run, range(cfg.blocks)))
    else:
        parts = [run(block) for block in range(cfg.blocks)]
    return np.concatenate(parts)


def power_mean_estimate(values: np.ndarray, p: float, cfg: SamplerConfig) -> NormEstimate:
    """p-th root of the sample mean of |F|^p with a delta-method standard error."""
    n = len(values)
    mean = float(np.mean(values))
    spread = float(np.std(values, ddof=1)) if n > 1 else 0.0
    se_mean = spread / math.sqrt(n)
    value = mean ** (1.0 / p)
    std_error = value / (p * mean) * se_mean if mean > 0 else 0.0
    return NormEstimate(value, std_error, n, "monte-carlo", cfg.seed)


def character_mean(cfg: SamplerConfig, coordinate: int = 0) -> complex:
    total = map_blocks(cfg, lambda logs: np.exp(logs[:, coordinate]))
    return complex(np.mean(total))
