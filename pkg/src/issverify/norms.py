"""Grid functions, time series, and the norms the stability bounds consume.

Spatial quadrature is composite trapezoid on the solver grid throughout, so
every norm is consistent (O(h^2)) with the finite-difference scheme.  The
boundary of a 1-D interval is the two endpoints with counting measure: the
boundary "integral" of a signal is ``|left| + |right|``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import youngfn

__all__ = [
    "GridFunction1D",
    "BoundaryPair",
    "TimeSeries",
    "trapezoid_integral",
    "l1_norm",
    "weighted_l1_norm",
    "sup_norm",
    "lq_norm",
    "orlicz_modular",
    "luxemburg_norm",
    "time_lq_norm",
    "time_luxemburg_norm",
    "holder_orlicz_check",
    "luxemburg_sandwich_check",
    "prefix_lq_norm",
    "prefix_luxemburg_norm",
    "prefix_sup",
]

# tighter than the 1e-10 the callers need, so equality cases resolve cleanly
_BISECT_RTOL = 1e-12


@dataclass(frozen=True)
class GridFunction1D:
    """Samples of a field at n >= 2 uniformly spaced nodes, endpoints included."""

    x_lo: float
    x_hi: float
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 1 or vals.size < 2:
            raise ValueError("values must be a 1-D array with at least 2 nodes")
        if not self.x_lo < self.x_hi:
            raise ValueError("need x_lo < x_hi")
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def n(self):
        return self.values.size

    @property
    def h(self):
        return (self.x_hi - self.x_lo) / (self.n - 1)

    @property
    def x(self):
        return np.linspace(self.x_lo, self.x_hi, self.n)

    @property
    def measure(self):
        return self.x_hi - self.x_lo

    def with_values(self, values):
        return GridFunction1D(self.x_lo, self.x_hi, values)

    def same_grid(self, other):
        return (
            self.n == other.n
            and np.isclose(self.x_lo, other.x_lo, rtol=0.0, atol=1e-12)
            and np.isclose(self.x_hi, other.x_hi, rtol=0.0, atol=1e-12)
        )


@dataclass(frozen=True)
class BoundaryPair:
    """Values attached to the two endpoints of the interval."""

    left: float
    right: float

    def __post_init__(self):
        if not (np.isfinite(self.left) and np.isfinite(self.right)):
            raise ValueError("boundary values must be finite")

    @property
    def l1(self):
        return abs(self.left) + abs(self.right)


@dataclass(frozen=True)
class TimeSeries:
    """A sampled signal on [0, T]; times start at 0 and increase strictly."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.array(self.times, dtype=float)
        v = np.array(self.values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or t.size < 1:
            raise ValueError("times and values must be matching 1-D arrays")
        if t[0] != 0.0:
            raise ValueError("times must start at 0")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise ValueError("times must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        t.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    @property
    def T(self):
        return float(self.times[-1])

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("t,value\n")
            for t, v in zip(self.times, self.values):
                fh.write(f"{t:.17g},{v:.17g}\n")

    @staticmethod
    def from_csv(path):
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return TimeSeries(data[:, 0], data[:, 1])


# --------------------------------------------------------------------------
# spatial norms
# --------------------------------------------------------------------------

def trapezoid_integral(w):
    """Composite trapezoid over the grid; exact for affine integrands."""
    return float(np.trapezoid(w.values, dx=w.h))


def l1_norm(w):
    return float(np.trapezoid(np.abs(w.values), dx=w.h))


def weighted_l1_norm(p, w):
    """Trapezoid of p*|w| for a nonnegative weight sharing the grid."""
    if not p.same_grid(w):
        raise ValueError("weight and field must share the grid")
    if np.any(p.values < 0):
        raise ValueError("weight must be nonnegative")
    return float(np.trapezoid(p.values * np.abs(w.values), dx=w.h))


def sup_norm(w):
    return float(np.max(np.abs(w.values)))


def lq_norm(w, q):
    if q == np.inf:
        return sup_norm(w)
    if q < 1:
        raise ValueError("q must lie in [1, inf]")
    return float(np.trapezoid(np.abs(w.values) ** q, dx=w.h) ** (1.0 / q))


def orlicz_modular(Y, w, complementary=False):
    """Trapezoid of Phi(|w|) (or PhiTilde(|w|) when ``complementary``)."""
    fn = youngfn.big_phi_tilde if complementary else youngfn.big_phi
    return float(np.trapezoid(fn(Y, np.abs(w.values)), dx=w.h))


def _bisect_norm(modular_at):
    """inf{k > 0 : modular(k) <= 1} for a strictly decreasing modular."""
    hi = 1.0
    while modular_at(hi) > 1.0:
        hi *= 2.0
        if hi > 1e300:
            raise OverflowError("Luxemburg bisection bracket exceeded 1e300")
    lo = 0.5 * hi
    while modular_at(lo) <= 1.0:
        hi = lo
        lo *= 0.5
        if lo < 1e-300:
            return 0.0
    while hi - lo > _BISECT_RTOL * hi:
        mid = 0.5 * (lo + hi)
        if modular_at(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def luxemburg_norm(Y, w, complementary=False):
    """inf{k > 0 : modular of w/k <= 1}; 0 for the zero field."""
    absw = np.abs(w.values)
    if not absw.any():
        return 0.0
    fn = youngfn.big_phi_tilde if complementary else youngfn.big_phi
    h = w.h

    def modular_at(k):
        return float(np.trapezoid(fn(Y, absw / k), dx=h))

    return _bisect_norm(modular_at)


# --------------------------------------------------------------------------
# time norms
# --------------------------------------------------------------------------

def time_lq_norm(g, q):
    """L^q norm in time by trapezoid; q = inf gives the sup of |g|."""
    if q == np.inf:
        return float(np.max(np.abs(g.values)))
    if q < 1:
        raise ValueError("q must lie in [1, inf]")
    if g.times.size < 2:
        return 0.0
    return float(np.trapezoid(np.abs(g.values) ** q, g.times) ** (1.0 / q))


def time_luxemburg_norm(Y, g):
    """Luxemburg norm of a time signal with the trapezoid modular."""
    absg = np.abs(g.values)
    if not absg.any() or g.times.size < 2:
        return 0.0
    times = g.times

    def modular_at(k):
        return float(np.trapezoid(youngfn.big_phi(Y, absg / k), times))

    return _bisect_norm(modular_at)


# --------------------------------------------------------------------------
# Orlicz duality checks
# --------------------------------------------------------------------------

def holder_orlicz_check(Y, u, v):
    """Slack of |int u*v| <= 2*||u||_Phi * ||v||_PhiTilde (must be >= -1e-9)."""
    if not u.same_grid(v):
        raise ValueError("u and v must share the grid")
    pairing = abs(float(np.trapezoid(u.values * v.values, dx=u.h)))
    bound = 2.0 * luxemburg_norm(Y, u) * luxemburg_norm(Y, v, complementary=True)
    return bound - pairing


def luxemburg_sandwich_check(Y, u):
    """Slacks of the modular pinch on the Luxemburg norm.

    Returns (norm - lower, upper - norm) for

        min_i [r01 * modular]^(1/(1+d_i)) <= ||u|| <= max_i [modular / r01]^(1/(1+d_i))

    with r01 = (1+d0)/(1+d1); both must be >= -1e-9.
    """
    modular = orlicz_modular(Y, u)
    norm = luxemburg_norm(Y, u)
    if modular == 0.0:
        return (norm, -norm)
    d0, d1 = Y.delta0, Y.delta1
    r01 = (1.0 + d0) / (1.0 + d1)
    exps = np.array([1.0 / (1.0 + d0), 1.0 / (1.0 + d1)])
    lower = np.min((r01 * modular) ** exps)
    upper = np.max((modular / r01) ** exps)
    return (norm - lower, upper - norm)


# --------------------------------------------------------------------------
# prefix (running) time norms used by the bound evaluators
# --------------------------------------------------------------------------

def _eval_indices(series, eval_times):
    eval_times = np.asarray(eval_times, dtype=float)
    idx = np.searchsorted(series.times, eval_times - 1e-12)
    idx = np.clip(idx, 0, series.times.size - 1)
    if not np.allclose(series.times[idx], eval_times, rtol=0.0, atol=1e-9):
        raise ValueError("eval times must lie on the series time grid")
    return idx


def prefix_lq_norm(series, q, eval_times):
    """||g||_{L^q(0, T_k)} for each requested T_k on the series grid."""
    idx = _eval_indices(series, eval_times)
    absv = np.abs(series.values)
    if q == np.inf:
        running = np.maximum.accumulate(absv)
        return running[idx]
    if q < 1:
        raise ValueError("q must lie in [1, inf]")
    power = absv ** q
    dt = np.diff(series.times)
    cum = np.concatenate(([0.0], np.cumsum(0.5 * dt * (power[1:] + power[:-1]))))
    return cum[idx] ** (1.0 / q)


def prefix_sup(series, eval_times):
    return prefix_lq_norm(series, np.inf, eval_times)


def prefix_luxemburg_norm(Y, series, eval_times):
    """Luxemburg norm in time over (0, T_k) for each requested T_k."""
    idx = _eval_indices(series, eval_times)
    out = np.empty(len(idx))
    for j, i in enumerate(idx):
        sub = TimeSeries(series.times[: i + 1], series.values[: i + 1])
        out[j] = time_luxemburg_norm(Y, sub)
    return out
