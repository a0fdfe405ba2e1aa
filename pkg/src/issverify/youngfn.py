"""Young functions with power-type growth control.

The catalog holds three families of generator functions ``phi`` (all
vanishing at zero, strictly increasing, with the ratio ``s*phi'(s)/phi(s)``
pinned between two exponents ``delta0 <= delta1``):

* ``power``:      phi(s) = s^(q-1),                         q > 1
* ``log-linear``: phi(s) = ln(1 + c1*s) + c2*s,             c1, c2 > 0
* ``log-power``:  phi(s) = (ln(s + c1))^c2 * s^(q-1),       c1 >= e, c2 > 0

From ``phi`` we build the convex primitive ``Phi(s) = int_0^s phi`` and its
complementary function ``PhiTilde(s) = int_0^s phi^{-1}``, the pair entering
the Young and Hoelder inequalities.  For the power family everything has a
closed form; the other families use adaptive Simpson quadrature and
bracketed bisection, and their growth exponents are estimated numerically
(then widened by 1% on each side as a safety margin, since a sampled
extremum can undershoot the true one).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _fastyoung
from .checks import CheckReport, ItemResult

__all__ = [
    "YoungFunction",
    "power",
    "log_linear",
    "log_power",
    "default_catalog",
    "phi",
    "phi_prime",
    "phi_inv",
    "big_phi",
    "big_phi_tilde",
    "tolksdorf_bounds",
    "young_eps_constant",
    "eps_young_constant",
    "check_lemma_phi",
    "check_lemma_inv",
]

_BRACKET_GROWTH = 4.0
_BRACKET_LIMIT = 1e300
_EXPONENT_MARGIN = 0.01


@dataclass(frozen=True)
class YoungFunction:
    """A catalog member together with its growth exponents.

    ``delta0``/``delta1`` bound ``s*phi'(s)/phi(s)``; exact ``q - 1`` for the
    power family, numeric estimates (widened by 1%) otherwise.  ``s_max``
    records the calibration range used for those estimates.
    """

    variant: str
    params: tuple
    delta0: float
    delta1: float
    s_max: float

    @property
    def is_power(self):
        return self.variant == "power"

    def to_dict(self):
        names = {"power": ("q",), "log-linear": ("c1", "c2"),
                 "log-power": ("c1", "c2", "q")}[self.variant]
        return {
            "variant": self.variant,
            "params": dict(zip(names, self.params)),
            "s_max": self.s_max,
        }

    @staticmethod
    def from_dict(spec):
        variant = spec["variant"]
        params = spec.get("params", spec)
        s_max = spec.get("s_max", 1e4)
        if variant == "power":
            return power(params["q"], s_max=s_max)
        if variant == "log-linear":
            return log_linear(params["c1"], params["c2"], s_max=s_max)
        if variant == "log-power":
            return log_power(params["c1"], params["c2"], params["q"], s_max=s_max)
        raise ValueError(f"unknown Young-function variant {variant!r}")

    def __repr__(self):
        inner = ", ".join(f"{v:g}" for v in self.params)
        return f"YoungFunction({self.variant}[{inner}], delta=[{self.delta0:.4g}, {self.delta1:.4g}])"


def power(q, s_max=1e4):
    """phi(s) = s^(q-1); exponents are exactly q - 1 on both sides."""
    if not q > 1:
        raise ValueError("power variant requires q > 1")
    d = float(q) - 1.0
    return YoungFunction("power", (float(q),), d, d, float(s_max))


def log_linear(c1, c2, s_max=1e4):
    if not (c1 > 0 and c2 > 0):
        raise ValueError("log-linear variant requires c1 > 0 and c2 > 0")
    return _with_estimated_exponents("log-linear", (float(c1), float(c2)), s_max)


def log_power(c1, c2, q, s_max=1e4):
    if not c1 >= math.e:
        raise ValueError("log-power variant requires c1 >= e")
    if not (c2 > 0 and q > 1):
        raise ValueError("log-power variant requires c2 > 0 and q > 1")
    return _with_estimated_exponents("log-power", (float(c1), float(c2), float(q)), s_max)


def default_catalog(s_max=1e4):
    """The members exercised by the property suites."""
    return (
        power(1.5, s_max=s_max),
        power(2.0, s_max=s_max),
        power(3.0, s_max=s_max),
        log_linear(1.0, 1.0, s_max=s_max),
        log_power(math.e, 1.0, 2.0, s_max=s_max),
    )


def _with_estimated_exponents(variant, params, s_max):
    probe = YoungFunction(variant, params, 1.0, 1.0, float(s_max))
    # widen the sampled range past s_max: the ratio extrema of the log
    # families sit at the ends of the range
    lo, hi = _estimate_exponents(probe, 1e-8, float(s_max) * 1e2, 2001)
    return YoungFunction(
        variant, params,
        lo * (1.0 - _EXPONENT_MARGIN),
        hi * (1.0 + _EXPONENT_MARGIN),
        float(s_max),
    )


def _estimate_exponents(Y, s_lo, s_hi, n):
    s = np.logspace(math.log10(s_lo), math.log10(s_hi), n)
    ratio = s * phi_prime(Y, s) / phi(Y, s)
    return float(ratio.min()), float(ratio.max())


# --------------------------------------------------------------------------
# generator, derivative, inverse
# --------------------------------------------------------------------------

def _require_nonnegative(s, what):
    if np.any(np.asarray(s) < 0):
        raise ValueError(f"{what} requires a nonnegative argument")


def phi(Y, s):
    """Evaluate the generator; accepts scalars or numpy arrays."""
    _require_nonnegative(s, "phi")
    s = np.asarray(s, dtype=float)
    if Y.variant == "power":
        (q,) = Y.params
        out = s ** (q - 1.0)
    elif Y.variant == "log-linear":
        c1, c2 = Y.params
        out = np.log1p(c1 * s) + c2 * s
    else:
        c1, c2, q = Y.params
        out = np.log(s + c1) ** c2 * s ** (q - 1.0)
    return out if out.ndim else float(out)


def phi_prime(Y, s):
    """Analytic derivative of the generator (s > 0 for power with q < 2)."""
    _require_nonnegative(s, "phi_prime")
    s = np.asarray(s, dtype=float)
    if Y.variant == "power":
        (q,) = Y.params
        out = (q - 1.0) * s ** (q - 2.0)
    elif Y.variant == "log-linear":
        c1, c2 = Y.params
        out = c1 / (1.0 + c1 * s) + c2
    else:
        c1, c2, q = Y.params
        lg = np.log(s + c1)
        out = s ** (q - 2.0) * lg ** (c2 - 1.0) * (c2 * s / (s + c1) + (q - 1.0) * lg)
    return out if out.ndim else float(out)


def phi_inv(Y, y):
    """Inverse generator: closed form for power, bracketed bisection otherwise."""
    _require_nonnegative(y, "phi_inv")
    scalar = np.isscalar(y) or np.asarray(y).ndim == 0
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if Y.variant == "power":
        (q,) = Y.params
        out = y ** (1.0 / (q - 1.0))
    else:
        out = _phi_inv_bisect(Y, y)
    return float(out[0]) if scalar else out


def _phi_inv_bisect(Y, y):
    out = np.zeros_like(y)
    active = y > 0.0
    if not np.any(active):
        return out
    ya = y[active]
    lo = np.zeros_like(ya)
    hi = np.ones_like(ya)
    grow = phi(Y, hi) < ya
    while np.any(grow):
        lo[grow] = hi[grow]
        hi[grow] *= _BRACKET_GROWTH
        if np.any(hi > _BRACKET_LIMIT):
            raise OverflowError("phi_inv bracket exceeded 1e300")
        grow = phi(Y, hi) < ya
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        high = phi(Y, mid) >= ya
        hi = np.where(high, mid, hi)
        lo = np.where(high, lo, mid)
        if np.all(hi - lo <= 1e-16 * hi):
            break
    out[active] = 0.5 * (lo + hi)
    return out


# --------------------------------------------------------------------------
# quadrature and the N-function pair
# --------------------------------------------------------------------------

def _jit_args(Y):
    if Y.variant == "log-linear":
        c1, c2 = Y.params
        return _fastyoung.VAR_LOG_LINEAR, c1, c2, 2.0
    c1, c2, q = Y.params
    return _fastyoung.VAR_LOG_POWER, c1, c2, q


def _sorted_apply(kernel, Y, s):
    """Evaluate a sorted-cumulative kernel on an arbitrary array."""
    uniq, inverse = np.unique(s, return_inverse=True)
    vals = kernel(*_jit_args(Y), uniq)
    return vals[inverse].reshape(s.shape)


def big_phi(Y, s):
    """Convex primitive Phi(s) = integral of phi over [0, s].

    Closed form for the power family; adaptive composite Simpson
    (relative tolerance 1e-10, at most 30 doubling levels) otherwise.
    """
    _require_nonnegative(s, "big_phi")
    scalar = np.isscalar(s) or np.asarray(s).ndim == 0
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if Y.variant == "power":
        (q,) = Y.params
        out = s ** q / q
    else:
        out = _sorted_apply(_fastyoung.big_phi_sorted, Y, s)
    return float(out[0]) if scalar else out


def big_phi_tilde(Y, s):
    """Complementary function PhiTilde(s) = integral of phi^{-1} over [0, s]."""
    _require_nonnegative(s, "big_phi_tilde")
    scalar = np.isscalar(s) or np.asarray(s).ndim == 0
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if Y.variant == "power":
        (q,) = Y.params
        qc = q / (q - 1.0)
        out = s ** qc / qc
    else:
        out = _sorted_apply(_fastyoung.big_phi_tilde_sorted, Y, s)
    return float(out[0]) if scalar else out


# --------------------------------------------------------------------------
# growth exponents and the weighted Young constant
# --------------------------------------------------------------------------

def tolksdorf_bounds(Y, s_lo, s_hi, n):
    """Min/max of s*phi'(s)/phi(s) over a log-spaced grid of ``n`` points."""
    if not (0 < s_lo < s_hi):
        raise ValueError("tolksdorf_bounds requires 0 < s_lo < s_hi")
    if n < 2:
        raise ValueError("tolksdorf_bounds requires n >= 2")
    return _estimate_exponents(Y, float(s_lo), float(s_hi), int(n))


def eps_young_constant(delta0, delta1, eps):
    """Split constant C in a*b <= eps*Phi(a) + C*PhiTilde(b).

    Accepts 0 < eps <= (1+delta1)/(1+delta0); for delta0 == delta1 this is
    the sharp constant eps^(-1/delta0) of the classical weighted Young
    inequality (and the upper eps endpoint degenerates to the plain one).
    For delta0 < delta1 the split is exact only up to the scaling envelope
    of the exponent pair; see the gain formulas that consume it.
    """
    if not (delta0 > 0 and delta1 >= delta0):
        raise ValueError("exponents must satisfy 0 < delta0 <= delta1")
    if not (0 < eps <= (1.0 + delta1) / (1.0 + delta0)):
        raise ValueError(
            "eps must lie in (0, (1+delta1)/(1+delta0)] "
            f"= (0, {(1.0 + delta1) / (1.0 + delta0):g}]"
        )
    front = delta1 * (1.0 + delta0) / (delta0 * (1.0 + delta1))
    base = (1.0 + delta0) / (1.0 + delta1) * eps
    expo = -(1.0 + delta0) / (delta0 * (1.0 + delta1))
    return front * base ** expo


def young_eps_constant(Y, eps):
    """C(eps) for this Young function; the lemma-level contract pins eps to (0, 1)."""
    if not (0 < eps < 1):
        raise ValueError("eps must lie in (0, 1)")
    return eps_young_constant(Y.delta0, Y.delta1, eps)


# --------------------------------------------------------------------------
# inequality check suites
# --------------------------------------------------------------------------

def _rel_slack(lower, upper):
    """Relative slack of ``lower <= upper``, elementwise."""
    scale = np.maximum(np.maximum(np.abs(lower), np.abs(upper)), 1.0)
    return (upper - lower) / scale


def _item_from_slacks(name, slacks, tol):
    slacks = np.atleast_1d(np.asarray(slacks, dtype=float))
    return ItemResult(
        name=name,
        n_checked=int(slacks.size),
        n_failed=int(np.count_nonzero(slacks < -tol)),
        worst_slack=float(slacks.min()) if slacks.size else 0.0,
    )


def _sample_log_uniform(rng, lo, hi, n):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), n))


def check_lemma_phi(Y, n_samples, seed, tol=1e-8):
    """Scaling and primitive-vs-generator inequalities for Phi.

    Checks, on random (k, s) pairs (k = 1 included so the scaling items hit
    their equality case):

    * generator scaling:  min(k^d0, k^d1)*phi(s) <= phi(k*s) <= max(...)*phi(s)
    * primitive pinch:    s*phi(s)/(1+d1) <= Phi(s) <= s*phi(s)/(1+d0)
    * primitive scaling:  the two-sided Phi(k*s) sandwich
    * convexity of Phi on random triples
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    d0, d1 = Y.delta0, Y.delta1
    s = _sample_log_uniform(rng, 1e-3, min(Y.s_max, 1e3), n_samples)
    k = _sample_log_uniform(rng, 1e-2, 1e2, n_samples)
    k[rng.random(n_samples) < 0.05] = 1.0

    report = CheckReport(name=f"lemma_phi[{Y.variant}]", seed=seed, tol=tol)

    phis = phi(Y, s)
    phiks = phi(Y, k * s)
    low = np.minimum(k ** d0, k ** d1) * phis
    high = np.maximum(k ** d0, k ** d1) * phis
    report.items.append(_item_from_slacks(
        "phi_scaling", np.minimum(_rel_slack(low, phiks), _rel_slack(phiks, high)), tol))

    bigs = big_phi(Y, s)
    low = s * phis / (1.0 + d1)
    high = s * phis / (1.0 + d0)
    report.items.append(_item_from_slacks(
        "phi_primitive_pinch",
        np.minimum(_rel_slack(low, bigs), _rel_slack(bigs, high)), tol))

    bigks = big_phi(Y, k * s)
    ratio01 = (1.0 + d0) / (1.0 + d1)
    low = ratio01 * np.minimum(k ** (1.0 + d0), k ** (1.0 + d1)) * bigs
    high = np.maximum(k ** (1.0 + d0), k ** (1.0 + d1)) / ratio01 * bigs
    report.items.append(_item_from_slacks(
        "big_phi_scaling",
        np.minimum(_rel_slack(low, bigks), _rel_slack(bigks, high)), tol))

    s2 = _sample_log_uniform(rng, 1e-3, min(Y.s_max, 1e3), n_samples)
    theta = rng.uniform(0.0, 1.0, n_samples)
    mix = big_phi(Y, theta * s + (1.0 - theta) * s2)
    chord = theta * bigs + (1.0 - theta) * big_phi(Y, s2)
    report.items.append(_item_from_slacks("convexity", _rel_slack(mix, chord), tol))
    return report


def check_lemma_inv(Y, n_samples, seed, tol=1e-8):
    """Inverse-generator growth, PhiTilde scaling, and the Young inequality.

    * inverse growth:   1/d1 <= s*(phi^{-1})'(s)/phi^{-1}(s) <= 1/d0
      (derivative by central differences)
    * PhiTilde scaling: two-sided sandwich with exponents 1 + 1/d_i
    * conjugacy:        PhiTilde(phi(s)) = s*phi(s) - Phi(s) <= d1*Phi(s)
    * Young:            a*b <= Phi(a) + PhiTilde(b)
    """
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    d0, d1 = Y.delta0, Y.delta1
    report = CheckReport(name=f"lemma_inv[{Y.variant}]", seed=seed, tol=tol)

    s = _sample_log_uniform(rng, 1e-3, 1e3, n_samples)
    step = 1e-5
    inv_mid = phi_inv(Y, s)
    inv_hi = phi_inv(Y, s * (1.0 + step))
    inv_lo = phi_inv(Y, s * (1.0 - step))
    ratio = s * (inv_hi - inv_lo) / (2.0 * s * step) / inv_mid
    report.items.append(_item_from_slacks(
        "inverse_growth",
        np.minimum(_rel_slack(1.0 / d1, ratio), _rel_slack(ratio, 1.0 / d0)), tol))

    k = _sample_log_uniform(rng, 1e-2, 1e2, n_samples)
    k[rng.random(n_samples) < 0.05] = 1.0
    tilde = big_phi_tilde(Y, s)
    tilde_k = big_phi_tilde(Y, k * s)
    front = d1 * (1.0 + d0) / (d0 * (1.0 + d1))
    low = np.minimum(k ** (1.0 + 1.0 / d0), k ** (1.0 + 1.0 / d1)) / front * tilde
    high = front * np.maximum(k ** (1.0 + 1.0 / d0), k ** (1.0 + 1.0 / d1)) * tilde
    report.items.append(_item_from_slacks(
        "tilde_scaling",
        np.minimum(_rel_slack(low, tilde_k), _rel_slack(tilde_k, high)), tol))

    s3 = _sample_log_uniform(rng, 1e-3, 1e2, n_samples)
    lhs = big_phi_tilde(Y, phi(Y, s3))
    identity = s3 * phi(Y, s3) - big_phi(Y, s3)
    ident_slack = -np.abs(_rel_slack(lhs, identity))
    report.items.append(_item_from_slacks("conjugacy_identity", ident_slack, tol))
    report.items.append(_item_from_slacks(
        "conjugacy_bound", _rel_slack(lhs, d1 * big_phi(Y, s3)), tol))

    a = _sample_log_uniform(rng, 1e-3, 1e2, n_samples)
    b = _sample_log_uniform(rng, 1e-3, 1e2, n_samples)
    report.items.append(_item_from_slacks(
        "young", _rel_slack(a * b, big_phi(Y, a) + big_phi_tilde(Y, b)), tol))
    return report
