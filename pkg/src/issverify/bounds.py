"""Closed-form right-hand sides of the stability estimates.

Every evaluator returns a TimeSeries of bound values on the caller's
checkpoint grid, with prefix semantics: the value at time T uses the
disturbance norms accumulated over (0, T) only.  The evaluators are pure
arithmetic on precomputed reduced series; composing those series from a
PdeProblem (boundary traces, weighted integrals, modulars) is the
verification harness's job.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import youngfn
from .norms import (
    BoundaryPair,
    TimeSeries,
    prefix_lq_norm,
    prefix_luxemburg_norm,
    prefix_sup,
)

__all__ = [
    "GainConstraintError",
    "GainParams",
    "BoundInputs",
    "ModularInputs",
    "holder_factor",
    "l1_bound",
    "l1_lq_bound",
    "gain_constants",
    "pick_gains",
    "l1_lq_bound_gained",
    "dirichlet_boundary_series",
    "orlicz_gain_constant",
    "lphi_l1_bound",
    "modular_bound",
    "weighted_modular_bound",
    "sign_changing_l1_bound",
    "cosine_weight",
    "Robin52Validity",
    "cosine_weighted_robin_bound",
]


class GainConstraintError(ValueError):
    pass


# --------------------------------------------------------------------------
# inputs
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundInputs:
    """Reduced data for the L^1-type estimates.

    ``d_series`` and ``f_series`` are the space-reduced disturbance
    magnitudes over time (boundary counting-measure sum resp. spatial L^1
    integral, possibly weighted); ``w0_norm`` is the matching norm of the
    initial state.  ``eval_times`` must lie on the series time grids.
    """

    eval_times: np.ndarray
    q: float
    w0_norm: float
    d_series: TimeSeries = None
    f_series: TimeSeries = None

    def __post_init__(self):
        object.__setattr__(
            self, "eval_times", np.asarray(self.eval_times, dtype=float))
        if self.w0_norm < 0:
            raise ValueError("w0_norm must be nonnegative")


@dataclass(frozen=True)
class ModularInputs:
    """Reduced data for the modular (Orlicz-class) estimates."""

    eval_times: np.ndarray
    q: float
    w0_modular: float
    d_modular_series: TimeSeries = None
    f_modular_series: TimeSeries = None
    w0_lux_norm: float = None

    def __post_init__(self):
        object.__setattr__(
            self, "eval_times", np.asarray(self.eval_times, dtype=float))
        if self.w0_modular < 0:
            raise ValueError("w0_modular must be nonnegative")


def _prefix_or_zero(series, q, eval_times):
    if series is None:
        return np.zeros(len(np.atleast_1d(eval_times)))
    return prefix_lq_norm(series, q, eval_times)


# --------------------------------------------------------------------------
# the Hoelder-in-time factor
# --------------------------------------------------------------------------

def holder_factor(cbar, q):
    """(1/(cbar*q'))^(1/q') with q' = q/(q-1); 1 at q = 1, 1/cbar at q = inf.

    The endpoint values are the analytic limits of the formula, so the gain
    is continuous across the whole range q in [1, inf].
    """
    if not cbar > 0:
        raise ValueError("cbar must be positive")
    if q == np.inf:
        return 1.0 / cbar
    if q < 1:
        raise ValueError("q must lie in [1, inf]")
    if q == 1:
        return 1.0
    qc = q / (q - 1.0)
    return (1.0 / (cbar * qc)) ** (1.0 / qc)


# --------------------------------------------------------------------------
# L^1-in-space family
# --------------------------------------------------------------------------

def l1_bound(inputs, cbar):
    """Plain L^1 estimate: decay of the initial mass plus raw L^1 gains.

    Valid for cbar >= 0 (no Hoelder factor; disturbances enter through
    their full L^1-in-time norms).
    """
    if cbar < 0:
        raise ValueError("cbar must be nonnegative")
    t = inputs.eval_times
    vals = (np.exp(-cbar * t) * inputs.w0_norm
            + _prefix_or_zero(inputs.d_series, 1.0, t)
            + _prefix_or_zero(inputs.f_series, 1.0, t))
    return TimeSeries(t, vals)


def l1_lq_bound(inputs, cbar, front=1.0, rate=None):
    """Exponential decay plus Hoelder-weighted L^q gains.

    ``front`` and ``rate`` generalize the plain estimate to the
    transformed variants (front = C_{k,l}, rate = the transformed decay
    constant); with the weighted series in ``inputs`` the same arithmetic
    serves the weighted Dirichlet estimates.
    """
    rate = cbar if rate is None else rate
    factor = holder_factor(rate, inputs.q)
    t = inputs.eval_times
    vals = front * (np.exp(-rate * t) * inputs.w0_norm
                    + factor * (_prefix_or_zero(inputs.d_series, inputs.q, t)
                                + _prefix_or_zero(inputs.f_series, inputs.q, t)))
    return TimeSeries(t, vals)


# --------------------------------------------------------------------------
# gain constants for the exponential-weight transform
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GainParams:
    """Constants (l, k) of the exponential weight k + e^{l x} and their data.

    ``dd`` is the domain radius max|x| over the two endpoints.  The k
    floors checked by ``gain_constants``:

    * always:             k > 2 l e^{l dd} / (l + b_under)
    * psi0 floor:         k > a_bar l e^{l dd} / psi0_under      (if given)
    * weight floor:       k > 2 a_bar l e^{l dd} p_prime_max/p0  (if given,
                          replaces the psi0 floor; Dirichlet route)
    * m-route (variant):  k > 2 l e^{l dd} m_bar
    """

    l: float
    k: float
    b_under: float
    a_bar: float
    a_under: float
    dd: float
    psi0_under: float = None
    m_bar: float = None
    p0_weight: float = None
    p_prime_max: float = None
    variant: str = "psi0-route"

    def to_dict(self):
        return {
            "l": self.l, "k": self.k, "b_under": self.b_under,
            "a_bar": self.a_bar, "a_under": self.a_under, "dd": self.dd,
            "psi0_under": self.psi0_under, "m_bar": self.m_bar,
            "p0_weight": self.p0_weight, "p_prime_max": self.p_prime_max,
            "variant": self.variant,
        }


def _k_floors(gp):
    e_pos = math.exp(gp.l * gp.dd)
    floors = [("2*l*e^(l*dd)/(l+b_under)", 2.0 * gp.l * e_pos / (gp.l + gp.b_under))]
    if gp.p0_weight is not None:
        if not gp.p0_weight > 0:
            raise GainConstraintError("weight floor requires p0 > 0")
        floors.append((
            "2*a_bar*l*e^(l*dd)*p_prime_max/p0",
            2.0 * gp.a_bar * gp.l * e_pos * gp.p_prime_max / gp.p0_weight))
    elif gp.psi0_under is not None:
        if not gp.psi0_under > 0:
            raise GainConstraintError("psi0 floor requires psi0_under > 0")
        floors.append(("a_bar*l*e^(l*dd)/psi0_under",
                       gp.a_bar * gp.l * e_pos / gp.psi0_under))
    if gp.variant == "m-route":
        if gp.m_bar is None:
            raise GainConstraintError("m-route requires m_bar")
        floors.append(("2*l*e^(l*dd)*m_bar", 2.0 * gp.l * e_pos * gp.m_bar))
    return floors


def gain_constants(gp):
    """Decay constant and overhead of the exponential-weight transform.

    Returns (c_hat, C_kl) after validating the l and k floors; a violated
    floor raises GainConstraintError naming it.
    """
    if not gp.a_under > 0 or gp.a_bar < gp.a_under:
        raise GainConstraintError("need 0 < a_under <= a_bar")
    if gp.dd < 0:
        raise GainConstraintError("dd must be nonnegative")
    l_floor = max(0.0, -gp.b_under)
    if not gp.l > l_floor:
        raise GainConstraintError(
            f"l must exceed max(0, -b_under) = {l_floor:g} (got {gp.l:g})")
    for name, floor in _k_floors(gp):
        if not gp.k > floor:
            raise GainConstraintError(
                f"k must exceed {name} = {floor:.10g} (got {gp.k:g})")
    e_pos = math.exp(gp.l * gp.dd)
    e_neg = math.exp(-gp.l * gp.dd)
    c_hat = (gp.a_under * gp.l * e_neg / (gp.k + e_pos)) * (
        gp.l + gp.b_under - 2.0 * gp.l * e_pos / gp.k)
    c_kl = (gp.k + e_pos) / (gp.k + e_neg)
    return c_hat, c_kl


def pick_gains(b_under, a_bar, a_under, dd, q, psi0_under=None, m_bar=None,
               p0_weight=None, p_prime_max=None):
    """Grid search for (l, k) minimizing C_kl * holder_factor(c_hat, q).

    l runs over max(0, -b_under) + logspace(-2, 1); k sits at fixed margins
    above its binding floor.  When ``m_bar`` is supplied both routes are
    evaluated and the smaller objective kept.  Deterministic tie-break:
    earlier route, then smaller l, then smaller k.
    """
    l_floor = max(0.0, -b_under)
    l_grid = l_floor + np.logspace(-2.0, 1.0, 46)
    margins = np.concatenate([
        np.arange(1.1, 2.0 + 1e-9, 0.1),
        np.arange(2.5, 10.0 + 1e-9, 0.5),
    ])
    variants = ["psi0-route"]
    if m_bar is not None:
        variants.append("m-route")
    best = None
    best_obj = math.inf
    for variant in variants:
        for l in l_grid:
            probe = GainParams(
                l=float(l), k=1.0, b_under=b_under, a_bar=a_bar,
                a_under=a_under, dd=dd, psi0_under=psi0_under, m_bar=m_bar,
                p0_weight=p0_weight, p_prime_max=p_prime_max, variant=variant)
            try:
                k_floor = max(floor for _, floor in _k_floors(probe))
            except GainConstraintError:
                continue
            for margin in margins:
                gp = replace(probe, k=float(margin * k_floor))
                try:
                    c_hat, c_kl = gain_constants(gp)
                except GainConstraintError:
                    continue
                if not c_hat > 0:
                    continue
                obj = c_kl * holder_factor(c_hat, q)
                if np.isfinite(obj) and obj < best_obj:
                    best, best_obj = gp, obj
    if best is None:
        raise GainConstraintError("empty feasible set for the gain search")
    return best


def l1_lq_bound_gained(inputs, gp):
    """The transformed L^q estimate with constants from ``gain_constants``."""
    c_hat, c_kl = gain_constants(gp)
    return l1_lq_bound(inputs, c_hat, front=c_kl, rate=c_hat)


# --------------------------------------------------------------------------
# weighted Dirichlet boundary series
# --------------------------------------------------------------------------

def dirichlet_boundary_series(times, d_left, d_right, psi2_inverse,
                              psi1_left, psi1_right, a_left, a_right,
                              p_prime_abs):
    """Boundary gain series a * |psi2^{-1}(d/psi1)| * |p'| summed over ends.

    ``psi2_inverse`` maps an array of boundary data to the inverted values;
    the psi1/a arguments are per-endpoint arrays over ``times`` (or
    scalars); ``p_prime_abs`` is a BoundaryPair of |p'| at the endpoints.
    """
    times = np.asarray(times, dtype=float)

    def term(d_vals, psi1, a_vals, pp):
        d_vals = np.broadcast_to(np.asarray(d_vals, dtype=float), times.shape)
        psi1 = np.broadcast_to(np.asarray(psi1, dtype=float), times.shape)
        a_vals = np.broadcast_to(np.asarray(a_vals, dtype=float), times.shape)
        inv = np.abs(np.asarray(psi2_inverse(d_vals / psi1), dtype=float))
        return a_vals * inv * abs(pp)

    vals = (term(d_left, psi1_left, a_left, p_prime_abs.left)
            + term(d_right, psi1_right, a_right, p_prime_abs.right))
    return TimeSeries(times, vals)


# --------------------------------------------------------------------------
# Orlicz-gain family
# --------------------------------------------------------------------------

def orlicz_gain_constant(cbar, Y):
    """Gain constant 2*max_i [ (1/cbar) d1^2/(d0(1+d1)) PhiTilde(1) ]^(1/(1+d_i))."""
    if not cbar > 0:
        raise ValueError("cbar must be positive")
    d0, d1 = Y.delta0, Y.delta1
    base = (1.0 / cbar) * d1 * d1 / (d0 * (1.0 + d1)) * youngfn.big_phi_tilde(Y, 1.0)
    return 2.0 * max(base ** (1.0 / (1.0 + d0)), base ** (1.0 / (1.0 + d1)))


def lphi_l1_bound(inputs, cbar, Y, front=1.0):
    """L^1 estimate with disturbances measured in the time-Luxemburg norm."""
    const = orlicz_gain_constant(cbar, Y)
    t = inputs.eval_times
    gains = np.zeros(len(t))
    for series in (inputs.d_series, inputs.f_series):
        if series is not None:
            gains = gains + prefix_luxemburg_norm(Y, series, t)
    vals = front * (np.exp(-cbar * t) * inputs.w0_norm + const * gains)
    return TimeSeries(t, vals)


def _eps_window(cbar, Y, eps, psi0_under):
    cap = cbar * (1.0 + Y.delta0)
    binding = "cbar*(1+delta0)"
    if psi0_under is not None:
        psi_cap = (1.0 + Y.delta0) / Y.delta1 * psi0_under
        if psi_cap < cap:
            cap, binding = psi_cap, "(1+delta0)/delta1 * psi0_under"
    if not 0 < eps < cap:
        raise ValueError(
            f"eps must lie in (0, {cap:g}); binding constraint: {binding}")
    return cbar * (1.0 + Y.delta0) - eps


def modular_bound(mi, cbar, Y, eps, psi0_under=None):
    """Modular estimate with the eps-shifted decay rate.

    Returns (modular_series, lux_norm_series); the second entry derives
    from the modular pinch on the Luxemburg norm and is None unless
    ``mi.w0_lux_norm`` is supplied.
    """
    lam = _eps_window(cbar, Y, eps, psi0_under)
    ceps = youngfn.eps_young_constant(Y.delta0, Y.delta1, eps)
    factor = holder_factor(lam, mi.q)
    t = mi.eval_times
    d_term = _prefix_or_zero(mi.d_modular_series, mi.q, t)
    f_term = _prefix_or_zero(mi.f_modular_series, mi.q, t)
    modular_vals = (np.exp(-lam * t) * mi.w0_modular
                    + ceps * factor * (d_term + f_term))
    modular_series = TimeSeries(t, modular_vals)
    if mi.w0_lux_norm is None:
        return modular_series, None

    d0, d1 = Y.delta0, Y.delta1
    ratio = (1.0 + d1) / (1.0 + d0)
    w0n = mi.w0_lux_norm
    norm_vals = np.zeros(len(t))
    for di in (d0, d1):
        inv = 1.0 / (1.0 + di)
        norm_vals = norm_vals + (
            np.exp(-lam * t / (1.0 + d1)) * ratio ** (2.0 * inv)
            * (w0n ** (1.0 + d0) + w0n ** (1.0 + d1)) ** inv
            + (ratio * ceps * factor) ** inv * d_term ** inv
            + (ratio * ceps * factor) ** inv * f_term ** inv)
    return modular_series, TimeSeries(t, norm_vals)


def weighted_modular_bound(mi, cbar, Y, eps):
    """Weighted modular estimate for the Dirichlet route.

    ``mi.d_modular_series`` must be the boundary series
    a * Phi(|psi2^{-1}(|d|/psi1)|) * |p'| summed over the endpoints, and
    ``mi.f_modular_series`` the weighted in-domain modular with the
    max_i |p|^(1+delta_i) factor inside the integral.
    """
    lam = _eps_window(cbar, Y, eps, None)
    ceps = youngfn.eps_young_constant(Y.delta0, Y.delta1, eps)
    factor = holder_factor(lam, mi.q)
    ratio = (1.0 + Y.delta1) / (1.0 + Y.delta0)
    t = mi.eval_times
    vals = (np.exp(-lam * t) * mi.w0_modular
            + factor * (_prefix_or_zero(mi.d_modular_series, mi.q, t)
                        + ceps * ratio * _prefix_or_zero(mi.f_modular_series, mi.q, t)))
    return TimeSeries(t, vals)


# --------------------------------------------------------------------------
# sign-changing reaction coefficient (elliptic transform route)
# --------------------------------------------------------------------------

def sign_changing_l1_bound(inputs, cbar_chosen, u_sup, structural_max=None):
    """L^1 estimate with prefactor e^{sup|u|} from the elliptic transform.

    ``structural_max``, when supplied, is the sampled maximum of
    c - b_x - mu; the chosen decay constant must exceed max(it, 0).
    """
    if structural_max is not None and not cbar_chosen > max(structural_max, 0.0):
        raise ValueError(
            "cbar_chosen must exceed max(c - b_x - mu) and 0 "
            f"(needs > {max(structural_max, 0.0):g}, got {cbar_chosen:g})")
    if not cbar_chosen > 0:
        raise ValueError("cbar_chosen must be positive")
    t = inputs.eval_times
    front = math.exp(u_sup)
    vals = front * (np.exp(-cbar_chosen * t) * inputs.w0_norm
                    + _prefix_or_zero(inputs.d_series, 1.0, t)
                    + _prefix_or_zero(inputs.f_series, 1.0, t))
    return TimeSeries(t, vals)


# --------------------------------------------------------------------------
# cosine-weighted Robin complement (constant coefficients)
# --------------------------------------------------------------------------

def cosine_weight(a, b, theta):
    """The weight beta(x) = e^{-b x / (2a)} cos(theta x) on [0, 1]."""
    def beta(x):
        return np.exp(-b * np.asarray(x, dtype=float) / (2.0 * a)) * np.cos(theta * np.asarray(x, dtype=float))
    return beta


@dataclass(frozen=True)
class Robin52Validity:
    cbar: float
    k0: float
    k1: float
    theta_ok: bool
    cbar_ok: bool
    k0_ok: bool
    k1_ok: bool

    @property
    def ok(self):
        return self.theta_ok and self.cbar_ok and self.k0_ok and self.k1_ok

    def items(self):
        return [
            ("theta in [0, pi/2)", self.theta_ok, None),
            ("c + a*theta^2 + b^2/(4a) > 0", self.cbar_ok, self.cbar),
            ("K0 = K - b/(2a) > 0", self.k0_ok, self.k0),
            ("K1 = K + b/(2a) + theta*tan(theta) > 0", self.k1_ok, self.k1),
        ]


def cosine_weighted_robin_bound(a, b, c, theta, K, eval_times,
                                w0_beta_norm, d0_series, d1_series,
                                f_beta_sup_series=None):
    """Weighted-L^1 estimate for constant-coefficient Robin problems.

    Checks the preconditions first and returns (validity, series); the
    series is None when any precondition fails.  ``d0_series``/``d1_series``
    are the raw endpoint signals and ``f_beta_sup_series`` the running
    integrand sup of beta*|f| over the domain.
    """
    if not a > 0:
        raise ValueError("a must be positive")
    cbar = c + a * theta * theta + b * b / (4.0 * a)
    k0 = K - b / (2.0 * a)
    k1 = K + b / (2.0 * a) + theta * math.tan(theta) if theta < math.pi / 2 else math.nan
    validity = Robin52Validity(
        cbar=cbar,
        k0=k0,
        k1=k1,
        theta_ok=0.0 <= theta < math.pi / 2,
        cbar_ok=cbar > 0,
        k0_ok=k0 > 0,
        k1_ok=(not math.isnan(k1)) and k1 > 0,
    )
    if not validity.ok:
        return validity, None
    t = np.asarray(eval_times, dtype=float)
    gain = (prefix_sup(d0_series, t)
            + math.exp(-b / (2.0 * a)) * prefix_sup(d1_series, t))
    if f_beta_sup_series is not None:
        gain = gain + prefix_sup(f_beta_sup_series, t)
    vals = np.exp(-cbar * t) * w0_beta_norm + gain / cbar
    return validity, TimeSeries(t, vals)
