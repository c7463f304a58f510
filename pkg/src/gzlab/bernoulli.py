"""Bernoulli numbers, exact and floating.

The first 64 are produced by the defining recursion
B_m = -1/(m+1) * sum_{j<m} C(m+1,j) B_j and cached as exact rationals; they
are shared by the log-gamma series, the digamma jets and the zeta tail.
Higher even indices (needed only by very-high-precision cross-check runs)
come from tangent numbers via an integer zigzag recurrence, still exact.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction

import gmpy2

from .hp import context

EXACT_RECURSION_LIMIT = 64

_lock = threading.Lock()
_recursion_cache: list[Fraction] = [Fraction(1)]
_tangent_cache: list[int] = []
_mpfr_cache: dict[int, object] = {}

LOG2_2PI = math.log2(2 * math.pi)


def _extend_recursion(upto: int) -> None:
    cache = _recursion_cache
    while len(cache) <= upto:
        m = len(cache)
        acc = Fraction(0)
        for j, bj in enumerate(cache):
            if bj:
                acc += math.comb(m + 1, j) * bj
        cache.append(-acc / (m + 1))


def _extend_tangent(count: int) -> None:
    """Tangent numbers T_1..T_count by the in-place zigzag recurrence."""
    cache = _tangent_cache
    if len(cache) >= count:
        return
    n = max(count, 8)
    t = [0] * (n + 1)
    t[1] = 1
    for k in range(2, n + 1):
        t[k] = (k - 1) * t[k - 1]
    for k in range(2, n + 1):
        for j in range(k, n + 1):
            t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
    cache[:] = t[1:]


def bernoulli_fraction(k: int) -> Fraction:
    """Exact Bernoulli number B_k (convention B_1 = -1/2)."""
    if k < 0:
        raise ValueError("negative Bernoulli index")
    if k > 1 and k % 2 == 1:
        return Fraction(0)
    with _lock:
        if k <= EXACT_RECURSION_LIMIT:
            _extend_recursion(k)
            return _recursion_cache[k]
        half = k // 2
        _extend_tangent(half)
        t = _tangent_cache[half - 1]
    num = t * k * (-1) ** (half - 1)
    den = (1 << k) * ((1 << k) - 1)
    return Fraction(num, den)


def bernoulli_mpfr(k: int, bits: int):
    """B_k rounded to the requested precision (cached per index)."""
    with _lock:
        hit = _mpfr_cache.get(k)
        if hit is not None and hit.precision >= bits:
            with context(bits):
                return gmpy2.mpfr(hit)
    frac = bernoulli_fraction(k)
    with context(bits):
        val = gmpy2.mpfr(frac)
    with _lock:
        prev = _mpfr_cache.get(k)
        if prev is None or prev.precision < bits:
            _mpfr_cache[k] = val
    return val


def log2_abs_bernoulli(k: int) -> float:
    """Cheap float estimate of log2 |B_k| for truncation planning."""
    if k == 0:
        return 0.0
    if k == 1:
        return -1.0
    if k % 2 == 1:
        return -math.inf
    # |B_2n| ~ 2 (2n)! / (2 pi)^(2n)
    return 1.0 + math.lgamma(k + 1) / math.log(2) - k * LOG2_2PI
