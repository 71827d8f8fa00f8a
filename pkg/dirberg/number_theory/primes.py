import logging
import math
import threading

import numpy as np

from dirberg import APP_NAME
from dirberg.services.errors import DomainError

logger = logging.getLogger(APP_NAME)

SEGMENT = 1 << 20
# Largest table kept in memory; prime positions beyond it are counted segment by segment.
STORE_LIMIT = 20_000_000

_lock = threading.Lock()
_primes = np.array([2, 3, 5, 7], dtype=np.int64)
_limit = 10
_large = {}


def _simple_sieve(limit: int) -> np.ndarray:
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def _segments(low: int, limit: int, base: np.ndarray):
    """Yield the primes of [low, limit] one window of SEGMENT integers at a time."""
    while low <= limit:
        high = min(low + SEGMENT, limit + 1)
        window = np.ones(high - low, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= high:
                break
            start = max(p * p, ((low + p - 1) // p) * p)
            window[start - low::p] = False
        yield np.flatnonzero(window).astype(np.int64) + low
        low = high


def _segmented_sieve(limit: int) -> np.ndarray:
    base = _simple_sieve(math.isqrt(limit) + 1)
    head = base[base <= limit]
    low = int(base[-1]) + 1 if len(base) else 2
    return np.concatenate([head] + list(_segments(low, limit, base)))


def _extend(limit: int) -> None:
    global _primes, _limit
    with _lock:
        if limit <= _limit:
            return
        target = min(max(limit, 2 * _limit), max(limit, STORE_LIMIT))
        logger.debug(f"Extending prime table to {target}")
        table = _segmented_sieve(target)
        table.setflags(write=False)
        _primes = table
        _limit = target


def primes_up_to(n: int) -> np.ndarray:
    """Read-only array of the primes <= n, served from the shared cached table."""
    if n > _limit:
        _extend(n)
    table = _primes
    return table[: int(np.searchsorted(table, n, side="right"))]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in primes_up_to(math.isqrt(n)):
        if n % int(p) == 0:
            return False
    return True


def _count_beyond_table(p: int) -> int:
    base = _simple_sieve(math.isqrt(p) + 1)
    return sum(len(chunk) for chunk in _segments(_limit + 1, p, base))


def nth_prime(k: int) -> int:
    """The k-th prime, 1-based (nth_prime(1) == 2)."""
    if k < 1:
        raise DomainError(f"prime index must be >= 1, got {k}")
    if k in _large:
        return _large[k]
    bound = 15 if k < 6 else int(k * (math.log(k) + math.log(math.log(k)))) + 1
    if len(_primes) < k:
        if bound > STORE_LIMIT:
            raise DomainError(f"prime index {k} lies beyond the sieve bound {STORE_LIMIT}")
        _extend(bound)
    return int(_primes[k - 1])


def prime_index(p: int) -> int:
    """Position of the prime p in the sequence 2, 3, 5, ... (1-based)."""
    if p > _limit and p <= STORE_LIMIT:
        _extend(p)
    if p <= _limit:
        table = _primes
        position = int(np.searchsorted(table, p))
        if position >= len(table) or table[position] != p:
            raise DomainError(f"{p} is not prime")
        return position + 1
    if not _is_prime(p):
        raise DomainError(f"{p} is not prime")
    _extend(STORE_LIMIT)
    index = len(_primes) + _count_beyond_table(p)
    with _lock:
        _large[index] = p
    return index


def first_primes(k: int) -> np.ndarray:
    if k < 1:
        return np.array([], dtype=np.int64)
    nth_prime(k)
    return _primes[:k]
