"""Zeroth-order Bessel function of the first kind and its zeros.

Three evaluation regimes, each accurate to a few ulp of O(1) absolute:

* ``|x| <= 8``: ascending power series;
* ``8 < |x| <= 25``: Miller's backward recurrence normalized by
  ``J0 + 2 sum_k J_2k = 1``;
* ``|x| > 25``: Hankel asymptotic expansion (error ~ exp(-2|x|)).
"""

from __future__ import annotations

import math
import threading

import numpy as np

from .errors import InvalidArgumentError

SERIES_LIMIT = 8.0
ASYMPTOTIC_LIMIT = 25.0

# Approximate positive zeros of J0, refined with j0 itself at import time.
_ZERO_GUESSES = (
    2.404825557695773, 5.520078110286311, 8.653727912911013, 11.79153443901428,
    14.93091770848779, 18.07106396791092, 21.21163662987926, 24.35247153074930,
    27.49347913204025, 30.63460646843198, 33.77582021357357, 36.91709835366404,
    40.05842576462824, 43.19979171317673, 46.34118837166181, 49.48260989739782,
    52.62405184111500, 55.76551075501998, 58.90698392608094, 62.04846919022717,
)


def _j0_series(x: float) -> float:
    q = -0.25 * x * x
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        term *= q / (k * k)
        total += term
        if abs(term) < 1e-18:
            return total


def _j0_miller(x: float) -> float:
    # start well above x so the recurrence has decayed into the minimal solution
    n0 = 2 * ((int(x) + 30 + int(math.sqrt(60.0 * x))) // 2)
    j_next = 0.0
    j_cur = 1e-300
    norm = 0.0
    for k in range(n0, 0, -1):
        j_prev = 2.0 * k / x * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        if (k - 1) % 2 == 0 and k - 1 > 0:
            norm += 2.0 * j_cur
        if abs(j_cur) > 1e250:
            j_cur *= 1e-250
            j_next *= 1e-250
            norm *= 1e-250
    norm += j_cur
    return j_cur / norm


def _j0_hankel(x: float) -> float:
    # a_k = prod_{j<=k} (2j-1)^2 / (k! 8^k)
    p = 0.0
    q = 0.0
    a = 1.0
    prev = math.inf
    k = 0
    while True:
        term = a / x**k
        if term > prev or term < 1e-17:
            break
        prev = term
        # for nu = 0 the odd coefficients pick up an extra minus: Q ~ -1/(8x)
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p += sign * term
        else:
            q -= sign * term
        k += 1
        a *= (2 * k - 1) ** 2 / (8.0 * k)
    chi = x - 0.25 * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def j0(x: float) -> float:
    """J0(x) for finite real ``x``; evaluated at ``|x|`` so evenness is exact."""
    x = float(x)
    if not math.isfinite(x):
        raise InvalidArgumentError(f"j0 needs a finite argument, got {x}")
    x = abs(x)
    if x <= SERIES_LIMIT:
        return _j0_series(x)
    if x <= ASYMPTOTIC_LIMIT:
        return _j0_miller(x)
    return _j0_hankel(x)


def j0_by_quadrature(a: float, nodes: int = 256) -> tuple[float, float]:
    """Trapezoidal value of ``(1/2pi) int_0^{2pi} exp(-i a sin(theta)) dtheta``.

    Returns ``(real part, imaginary part)``; the imaginary part should vanish
    and is returned only as a diagnostic.
    """
    if nodes < 16:
        raise InvalidArgumentError("quadrature needs at least 16 nodes")
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    value = np.exp(-1j * a * np.sin(theta)).mean()
    return float(value.real), float(value.imag)


def _refine_zero(guess: float) -> float:
    # secant on j0 inside a bracket that is known to contain one sign change
    lo, hi = guess - 1e-3, guess + 1e-3
    flo, fhi = j0(lo), j0(hi)
    if flo * fhi > 0:
        raise ArithmeticError(f"zero table entry {guess} is not bracketed")
    for _ in range(100):
        mid = hi - fhi * (hi - lo) / (fhi - flo)
        if not lo < mid < hi:
            mid = 0.5 * (lo + hi)
        fmid = j0(mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0:
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
        if hi - lo < 4e-16 * hi:
            break
        # Illinois modification keeps the secant from stalling on one side
        if flo * fmid > 0:
            fhi *= 0.5
        else:
            flo *= 0.5
    return lo if abs(flo) < abs(fhi) else hi


_ZEROS = tuple(_refine_zero(g) for g in _ZERO_GUESSES)


def j0_zero(k: int) -> float:
    """k-th positive zero of J0, ``1 <= k <= 20``."""
    if not 1 <= k <= len(_ZEROS):
        raise InvalidArgumentError(f"zero index must be in 1..{len(_ZEROS)}, got {k}")
    return _ZEROS[k - 1]


class BesselTable:
    """Cache of ``J0(a * z)`` keyed by ``(a, 2z)``.

    Staggered-magnetization eigenvalues take few distinct values, so inner
    loops look up instead of re-evaluating.  Insertions are serialized.
    """

    def __init__(self):
        self._values: dict[tuple[float, int], float] = {}
        self._lock = threading.Lock()

    def __call__(self, a: float, two_z: int) -> float:
        key = (float(a), int(two_z))
        value = self._values.get(key)
        if value is None:
            value = j0(key[0] * key[1] / 2)
            with self._lock:
                self._values.setdefault(key, value)
        return value

    def lookup(self, a: float, two_z: np.ndarray) -> np.ndarray:
        """Vectorized lookup over an integer array of ``2z`` values."""
        two_z = np.asarray(two_z)
        if two_z.size == 0:
            return np.zeros(0)
        lo = int(two_z.min())
        hi = int(two_z.max())
        table = np.array([self(a, v) for v in range(lo, hi + 1)])
        return table[two_z - lo]


BESSEL_TABLE = BesselTable()
