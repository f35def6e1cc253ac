"""Numerical Laplace inversion: Gaver-Stehfest and fixed-Talbot.

Both schemes are used in two roles. In double precision, Stehfest with a
modest order inverts the smooth, real-on-the-axis material transforms. In
``mpmath`` arbitrary precision, both schemes act as independent oracles for
the fundamental solution.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath as mp
import numpy as np

__all__ = [
    "stehfest_weights",
    "stehfest",
    "stehfest_mp",
    "talbot_mp",
]


@lru_cache(maxsize=None)
def _stehfest_fractions(n):
    if n < 2 or n % 2:
        raise ValueError(f"Stehfest order must be even and >= 2, got {n}")
    half = n // 2
    weights = []
    for k in range(1, n + 1):
        acc = Fraction(0)
        for j in range((k + 1) // 2, min(k, half) + 1):
            num = j ** half * math.factorial(2 * j)
            den = (math.factorial(half - j) * math.factorial(j) * math.factorial(j - 1)
                   * math.factorial(k - j) * math.factorial(2 * j - k))
            acc += Fraction(num, den)
        weights.append(acc if (k + half) % 2 == 0 else -acc)
    return tuple(weights)


def stehfest_weights(n, exact=False):
    """Gaver-Stehfest weights ``V_1 .. V_n``.

    Parameters
    ----------
    n : int
        Even order.
    exact : bool
        Return :class:`fractions.Fraction` values instead of floats.
    """
    w = _stehfest_fractions(int(n))
    return list(w) if exact else np.array([float(v) for v in w])


def stehfest(func, t, n=12):
    """Invert a real Laplace transform at ``t`` in double precision.

    ``func`` receives a 1-d array of real abscissae ``k ln 2 / t``.
    """
    t = float(t)
    if not t > 0.0:
        raise ValueError("t must be positive")
    a = math.log(2.0) / t
    s = a * np.arange(1, n + 1)
    return float(a * (stehfest_weights(n) @ np.asarray(func(s), dtype=float)))


def stehfest_mp(func, t, n, dps=None):
    """Gaver-Stehfest in ``mpmath`` with working precision matched to ``n``.

    Cancellation in the alternating sum costs roughly ``n`` decimal digits,
    so the default precision is ``1.1 n + 30``.
    """
    dps = int(1.1 * n + 30) if dps is None else int(dps)
    with mp.workdps(dps):
        t = mp.mpf(t)
        a = mp.log(2) / t
        total = mp.mpf(0)
        for k, v in enumerate(_stehfest_fractions(int(n)), start=1):
            total += mp.mpf(v.numerator) / v.denominator * func(k * a)
        return a * total


def talbot_mp(func, t, m=64, dps=50, shift=0.0):
    """Fixed-Talbot inversion (Abate-Valko contour) in ``mpmath``.

    The contour ``s = r th (cot th + i)`` with ``r = 2m / (5t)`` wraps the
    negative real axis, so ``func`` may have a branch cut there.
    ``shift`` moves the contour to the right; it is used as a perturbation
    for self-checks.
    """
    with mp.workdps(int(dps)):
        t = mp.mpf(t)
        r = mp.mpf(2 * m) / (5 * t)
        shift = mp.mpf(shift)
        total = mp.mpf(0.5) * func(r + shift) * mp.exp((r + shift) * t)
        for k in range(1, m):
            th = k * mp.pi / m
            cot = mp.cot(th)
            s = r * th * (cot + 1j) + shift
            sigma = th + (th * cot - 1) * cot
            total += mp.re(mp.exp(t * s) * func(s) * (1 + 1j * sigma))
        return r / m * total
