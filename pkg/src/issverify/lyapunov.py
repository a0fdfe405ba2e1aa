"""C^2 smoothing of |s| and the Lyapunov functionals built from it.

``rho(tau, s)`` equals |s| outside (-tau, tau) and a matched quartic inside,
so it is convex, twice continuously differentiable, and sits within 3*tau/8
of |s| everywhere.  Integrating rho(w), p*rho(w), Phi(rho(w)) or
p*Phi(rho(w)) over the domain yields smooth stand-ins for the L^1, weighted
L^1, modular and weighted-modular functionals; each is within 3*tau/8 times
a fixed factor of its target, which keeps the approximation error auditable.

The quartic branch is evaluated in the scaled variable u = s/tau, which
makes the two branches agree exactly in floating point at |s| = tau.
"""

from __future__ import annotations

import numpy as np

from . import youngfn
from .checks import CheckReport, ItemResult
from .norms import GridFunction1D  # noqa: F401  (re-exported for callers)

__all__ = [
    "rho",
    "rho_prime",
    "rho_second",
    "seam_gaps",
    "check_rho_properties",
    "v_tau",
    "v_tau_weighted",
    "v_tau_phi",
    "v_tau_phi_weighted",
    "default_tau",
    "tau_slack",
]


def _require_tau(tau):
    if not np.all(np.asarray(tau) > 0):
        raise ValueError("tau must be positive")


def _inner(tau, s):
    u = s / tau
    u2 = u * u
    return tau * 0.125 * (3.0 + u2 * (6.0 - u2))


def _inner_prime(tau, s):
    u = s / tau
    return 0.5 * u * (3.0 - u * u)


def _inner_second(tau, s):
    u = s / tau
    return 1.5 * (1.0 - u * u) / tau


def rho(tau, s):
    """|s| outside (-tau, tau), the matched quartic inside."""
    _require_tau(tau)
    s = np.asarray(s, dtype=float)
    out = np.where(np.abs(s) >= tau, np.abs(s), _inner(tau, s))
    return out if out.ndim else float(out)


def rho_prime(tau, s):
    _require_tau(tau)
    s = np.asarray(s, dtype=float)
    out = np.where(np.abs(s) >= tau, np.sign(s), _inner_prime(tau, s))
    return out if out.ndim else float(out)


def rho_second(tau, s):
    _require_tau(tau)
    s = np.asarray(s, dtype=float)
    out = np.where(np.abs(s) >= tau, 0.0, _inner_second(tau, s))
    return out if out.ndim else float(out)


def seam_gaps(tau):
    """Branch mismatches of (rho, rho', rho'') at s = tau; all exactly 0."""
    _require_tau(tau)
    return (
        abs(_inner(tau, tau) - tau),
        abs(_inner_prime(tau, tau) - 1.0),
        abs(_inner_second(tau, tau) - 0.0),
    )


def check_rho_properties(tau, n_samples, seed, tol=1e-12):
    """Verify the defining pointwise relations on random samples.

    The checked chain is

        0 <= |s| <= rho(s),   |rho'(s)| <= 1,   rho''(s) >= 0,
        0 <= rho(s) - 3*tau/8 <= rho'(s)*s <= rho(s) <= |s| + 3*tau/8,

    together with rho'(0) = 0 and the seam continuity of all three
    derivatives.  These are rounding-exact identities, so ``tol`` is tiny.
    """
    _require_tau(tau)
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    n_near = n_samples // 2
    s = np.concatenate([
        rng.uniform(-3.0 * tau, 3.0 * tau, n_near),
        rng.standard_normal(n_samples - n_near) * max(tau, 1.0) * 10.0,
    ])

    r = rho(tau, s)
    rp = rho_prime(tau, s)
    rpp = rho_second(tau, s)
    offset = 0.375 * tau

    report = CheckReport(name=f"rho_properties[tau={tau:g}]", seed=seed, tol=tol)

    def add(name, slacks):
        slacks = np.atleast_1d(np.asarray(slacks, dtype=float))
        report.items.append(ItemResult(
            name=name,
            n_checked=int(slacks.size),
            n_failed=int(np.count_nonzero(slacks < -tol)),
            worst_slack=float(slacks.min()),
        ))

    add("prime_at_zero", -abs(rho_prime(tau, 0.0)))
    add("dominates_abs", r - np.abs(s))
    add("slope_bounded", 1.0 - np.abs(rp))
    add("convex", rpp)
    add("chain_offset_nonneg", r - offset)
    add("chain_offset_below_slope", rp * s - (r - offset))
    add("chain_slope_below_rho", r - rp * s)
    add("chain_rho_below_abs", np.abs(s) + offset - r)
    gaps = seam_gaps(tau)
    add("seam_c2", -max(gaps))
    return report


# --------------------------------------------------------------------------
# approximate Lyapunov functionals
# --------------------------------------------------------------------------

def v_tau(w, tau):
    """Trapezoid of rho(w): the smooth stand-in for the L^1 norm."""
    _require_tau(tau)
    return float(np.trapezoid(rho(tau, w.values), dx=w.h))


def v_tau_weighted(p, w, tau):
    _require_tau(tau)
    if not p.same_grid(w):
        raise ValueError("weight and field must share the grid")
    if np.any(p.values < 0):
        raise ValueError("weight must be nonnegative")
    return float(np.trapezoid(p.values * rho(tau, w.values), dx=w.h))


def v_tau_phi(Y, w, tau):
    """Trapezoid of Phi(rho(w)): smooth stand-in for the modular."""
    _require_tau(tau)
    return float(np.trapezoid(youngfn.big_phi(Y, rho(tau, w.values)), dx=w.h))


def v_tau_phi_weighted(Y, p, w, tau):
    _require_tau(tau)
    if not p.same_grid(w):
        raise ValueError("weight and field must share the grid")
    if np.any(p.values < 0):
        raise ValueError("weight must be nonnegative")
    return float(np.trapezoid(
        p.values * youngfn.big_phi(Y, rho(tau, w.values)), dx=w.h))


def default_tau(w0_sup):
    """Smoothing width used by verification runs: 1e-3 * (sup|w0| + 1)."""
    return 1e-3 * (float(w0_sup) + 1.0)


def tau_slack(tau, measure):
    """Gap budget |V_tau(w) - ||w||_1| <= 3*tau*|domain|/8."""
    return 0.375 * tau * measure
