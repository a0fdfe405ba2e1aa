"""Jitted quadrature engine for the non-power Young functions.

The generator integrals Phi(s) = int_0^s phi and PhiTilde(s) = int_0^s
phi^{-1} have closed forms only for the power family; the log families are
integrated with per-segment adaptive composite Simpson (relative tolerance
1e-10, at most 30 doubling levels) over the sorted evaluation points, so a
whole array costs one sweep.  Inversions inside the PhiTilde integrand are
Newton iterations warm-started from the previous segment endpoint; the
public ``phi_inv`` keeps its plain bracketed bisection.
"""

from __future__ import annotations

import numpy as np
from numba import njit

VAR_LOG_LINEAR = 1
VAR_LOG_POWER = 2

_RTOL = 1e-10
_MAX_LEVELS = 30


@njit(cache=True)
def _phi(var, c1, c2, q, s):
    if var == VAR_LOG_LINEAR:
        return np.log1p(c1 * s) + c2 * s
    if s == 0.0:
        return 0.0
    return np.log(s + c1) ** c2 * s ** (q - 1.0)


@njit(cache=True)
def _phi_prime(var, c1, c2, q, s):
    if var == VAR_LOG_LINEAR:
        return c1 / (1.0 + c1 * s) + c2
    lg = np.log(s + c1)
    return s ** (q - 2.0) * lg ** (c2 - 1.0) * (c2 * s / (s + c1) + (q - 1.0) * lg)


@njit(cache=True)
def _phi_inv_newton(var, c1, c2, q, y, guess):
    """phi^{-1}(y) by safeguarded Newton from ``guess`` (y >= 0)."""
    if y <= 0.0:
        return 0.0
    s = guess if guess > 0.0 else 1.0
    for _ in range(100):
        f = _phi(var, c1, c2, q, s) - y
        if abs(f) <= 1e-13 * (y + 1e-300):
            return s
        fp = _phi_prime(var, c1, c2, q, s)
        s_new = s - f / fp
        if not (s_new > 0.0 and np.isfinite(s_new)):
            s_new = 0.5 * s if f > 0.0 else 2.0 * s
        s = s_new
    return s


@njit(cache=True)
def _segment_phi(var, c1, c2, q, a, b, atol):
    """Adaptive Simpson of phi over [a, b] by trapezoid doubling."""
    if b <= a:
        return 0.0
    width = b - a
    trap = 0.5 * width * (_phi(var, c1, c2, q, a) + _phi(var, c1, c2, q, b))
    simpson_prev = 0.0
    panels = 1
    for level in range(1, _MAX_LEVELS + 1):
        panels *= 2
        step = width / panels
        acc = 0.0
        for j in range(1, panels, 2):
            acc += _phi(var, c1, c2, q, a + step * j)
        trap_new = 0.5 * trap + step * acc
        simpson = (4.0 * trap_new - trap) / 3.0
        trap = trap_new
        if level >= 3:
            err = abs(simpson - simpson_prev)
            if err <= _RTOL * abs(simpson) + atol:
                return simpson
        simpson_prev = simpson
    return simpson_prev


@njit(cache=True)
def _segment_phi_inv(var, c1, c2, q, a, b, s_lo, atol):
    """Adaptive Simpson of phi^{-1} over [a, b]; s_lo = phi^{-1}(a)."""
    if b <= a:
        return 0.0
    width = b - a
    f_hi = _phi_inv_newton(var, c1, c2, q, b, s_lo)
    trap = 0.5 * width * (s_lo + f_hi)
    simpson_prev = 0.0
    panels = 1
    for level in range(1, _MAX_LEVELS + 1):
        panels *= 2
        step = width / panels
        acc = 0.0
        warm = s_lo
        for j in range(1, panels, 2):
            warm = _phi_inv_newton(var, c1, c2, q, a + step * j, warm)
            acc += warm
        trap_new = 0.5 * trap + step * acc
        simpson = (4.0 * trap_new - trap) / 3.0
        trap = trap_new
        if level >= 3:
            err = abs(simpson - simpson_prev)
            if err <= _RTOL * abs(simpson) + atol:
                return simpson
        simpson_prev = simpson
    return simpson_prev


@njit(cache=True)
def big_phi_sorted(var, c1, c2, q, s_sorted):
    """Phi at each point of an ascending nonnegative array."""
    out = np.empty(s_sorted.shape[0])
    acc = 0.0
    prev = 0.0
    for i in range(s_sorted.shape[0]):
        atol = 1e-15 * (acc + 1e-30)
        acc += _segment_phi(var, c1, c2, q, prev, s_sorted[i], atol)
        out[i] = acc
        prev = s_sorted[i]
    return out


@njit(cache=True)
def big_phi_tilde_sorted(var, c1, c2, q, s_sorted):
    """PhiTilde at each point of an ascending nonnegative array."""
    out = np.empty(s_sorted.shape[0])
    acc = 0.0
    prev = 0.0
    s_lo = 0.0
    for i in range(s_sorted.shape[0]):
        atol = 1e-15 * (acc + 1e-30)
        acc += _segment_phi_inv(var, c1, c2, q, prev, s_sorted[i], s_lo, atol)
        out[i] = acc
        prev = s_sorted[i]
        s_lo = _phi_inv_newton(var, c1, c2, q, prev, s_lo)
    return out
