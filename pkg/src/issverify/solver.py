"""Method-of-lines integrator for 1-D parabolic problems with boundary inputs.

The PDE solved is

    w_t - (a w_x)_x + b w_x + c w + h(x,t,w,w_x) + m * d/dx[g(x,t,w)] = f

on an interval, closed either by a Robin/Neumann relation
``a dw/dnu + psi(x,t,w) = d(t)`` at each endpoint (ghost nodes, second
order) or by a nonlinear Dirichlet relation ``psi1(x,t) psi2(w) = d(t)``
(endpoint values pinned to ``psi2^{-1}(d/psi1)`` at every stage).  Space is
discretized with conservative second-order central differences (half-node
diffusion coefficients; optional first-order upwinding of the advection
term), time with classic RK4 under a diffusive CFL restriction.

Coefficients, nonlinearities, disturbances and initial data are expression
strings (see ``issverify.expr``); they are compiled once and interpreted
inside the jitted kernel, so presets and custom scenarios share one code
path and runs are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import _kernel
from .expr import Expr
from .norms import GridFunction1D, TimeSeries

__all__ = [
    "SolverError",
    "BlowUpError",
    "CoefficientError",
    "BracketError",
    "InvalidQError",
    "RobinBC",
    "DirichletBC",
    "PdeProblem",
    "SolverConfig",
    "Trajectory",
    "semidiscrete_rhs",
    "apply_robin_ghost",
    "psi2_invert",
    "dirichlet_boundary_values",
    "integrate",
    "solve_weight_p",
    "solve_elliptic_u",
    "edge_derivatives",
    "estimate_c_reaction_range",
    "estimate_cbar",
    "estimate_psi0",
    "estimate_cbar_orlicz",
    "estimate_psi0_orlicz",
]

_EMPTY_I32 = np.zeros(0, dtype=np.int32)
_EMPTY_F64 = np.zeros(0, dtype=np.float64)


class SolverError(RuntimeError):
    pass


class BlowUpError(SolverError):
    """The state left the finite range; ``t`` is the time of failure."""

    def __init__(self, t):
        super().__init__(f"solution blew up (non-finite state) near t = {t:g}")
        self.t = t


class CoefficientError(SolverError):
    pass


class BracketError(SolverError):
    pass


class InvalidQError(SolverError):
    pass


def _as_expr(value, allowed, what):
    if value is None:
        return None
    if isinstance(value, Expr):
        extra = value.variables - set(allowed)
        if extra:
            raise ValueError(f"{what} may not reference {sorted(extra)}")
        return value
    return Expr(value, allowed)


@dataclass(frozen=True)
class RobinBC:
    """a dw/dnu + psi(x, t, w) = d(t) at both endpoints."""

    psi: object

    def __post_init__(self):
        object.__setattr__(self, "psi", _as_expr(self.psi, ("x", "t", "w"), "psi"))


@dataclass(frozen=True)
class DirichletBC:
    """psi1(x, t) * psi2(w) = d(t); psi2 strictly increasing and continuous."""

    psi1: object
    psi2: object

    def __post_init__(self):
        object.__setattr__(self, "psi1", _as_expr(self.psi1, ("x", "t"), "psi1"))
        object.__setattr__(self, "psi2", _as_expr(self.psi2, ("s",), "psi2"))


@dataclass(frozen=True)
class PdeProblem:
    """Coefficients, nonlinearities, boundary spec and structural constants.

    Scalar fields are expression strings (or pre-parsed Expr values); absent
    nonlinearities stay None and cost nothing at run time.  ``cbar``,
    ``psi0bar`` and ``s0`` are the user-declared structural constants that
    the verification harness cross-checks against sampled estimates.
    """

    x_lo: float
    x_hi: float
    a: object
    b: object
    c: object
    mu: object
    boundary: object
    d_left: object
    d_right: object
    w0: object
    m: object = None
    h: object = None
    g: object = None
    g0: object = None
    f: object = None
    cbar: float = 0.0
    psi0bar: float = None
    s0: float = 1.0

    def __post_init__(self):
        if not self.x_lo < self.x_hi:
            raise ValueError("need x_lo < x_hi")
        if not self.s0 > 0:
            raise ValueError("s0 must be positive")
        xt = ("x", "t")
        for name in ("a", "b", "c", "mu", "m", "g0", "f"):
            object.__setattr__(self, name, _as_expr(getattr(self, name), xt, name))
        object.__setattr__(self, "h", _as_expr(self.h, ("x", "t", "w", "wx"), "h"))
        object.__setattr__(self, "g", _as_expr(self.g, ("x", "t", "w"), "g"))
        object.__setattr__(self, "d_left", _as_expr(self.d_left, ("t",), "d_left"))
        object.__setattr__(self, "d_right", _as_expr(self.d_right, ("t",), "d_right"))
        object.__setattr__(self, "w0", _as_expr(self.w0, ("x",), "w0"))
        if not isinstance(self.boundary, (RobinBC, DirichletBC)):
            raise TypeError("boundary must be RobinBC or DirichletBC")
        if self.m is None and self.g is not None:
            raise ValueError("g requires the transport coefficient m")

    @property
    def is_dirichlet(self):
        return isinstance(self.boundary, DirichletBC)

    @property
    def measure(self):
        return self.x_hi - self.x_lo

    def field(self, name, x, t):
        """Evaluate an (x, t) coefficient on an array of nodes."""
        fn = getattr(self, name)
        if fn is None:
            return np.zeros_like(np.asarray(x, dtype=float))
        out = fn(x=np.asarray(x, dtype=float), t=t)
        return np.broadcast_to(np.asarray(out, dtype=float), np.shape(x)).copy()


@dataclass(frozen=True)
class SolverConfig:
    n_x: int
    T: float
    cfl_safety: float = 0.4
    advection_scheme: str = "central"
    checkpoint_dt: float = None

    def __post_init__(self):
        if self.n_x < 3:
            raise ValueError("n_x must be >= 3")
        if not self.T > 0:
            raise ValueError("T must be positive")
        if not 0 < self.cfl_safety <= 1:
            raise ValueError("cfl_safety must lie in (0, 1]")
        if self.advection_scheme not in ("central", "upwind"):
            raise ValueError("advection_scheme must be 'central' or 'upwind'")
        if self.checkpoint_dt is None:
            object.__setattr__(self, "checkpoint_dt", self.T / 50.0)
        if not self.checkpoint_dt > 0:
            raise ValueError("checkpoint_dt must be positive")


@dataclass
class Trajectory:
    times: np.ndarray
    states: list
    d_record: tuple
    dt_used: float

    @property
    def final(self):
        return self.states[-1]

    def to_csv(self, path):
        """Long-format checkpoint export with header t,x,w."""
        with open(path, "w") as fh:
            fh.write("t,x,w\n")
            for t, state in zip(self.times, self.states):
                for x, w in zip(state.x, state.values):
                    fh.write(f"{t:.17g},{x:.17g},{w:.17g}\n")


# --------------------------------------------------------------------------
# program plumbing
# --------------------------------------------------------------------------

def _prog(e):
    if e is None:
        return (_EMPTY_I32, _EMPTY_I32, _EMPTY_F64)
    p = e.program
    return (p.code, p.args, p.consts)


def _grid(P, n):
    x = np.linspace(P.x_lo, P.x_hi, n)
    h = (P.x_hi - P.x_lo) / (n - 1)
    # half nodes for the conservative diffusion stencil; the two outermost
    # values are clamped to the endpoints so coefficient expressions are
    # never evaluated outside the closed domain
    x_half = np.empty(n + 1)
    x_half[1:-1] = 0.5 * (x[:-1] + x[1:])
    x_half[0] = x[0]
    x_half[-1] = x[-1]
    return x, x_half, h


def _coeff_arrays(P, x, x_half, t):
    a_half = P.field("a", x_half, t)
    if np.any(a_half <= 0):
        raise CoefficientError("diffusion coefficient must be positive")
    return (
        a_half,
        P.field("b", x, t),
        P.field("c", x, t),
        P.field("m", x, t),
    )


def _signal(e, times):
    if e is None:
        return np.zeros_like(times)
    out = e(t=times)
    return np.broadcast_to(np.asarray(out, dtype=float), times.shape).copy()


# --------------------------------------------------------------------------
# boundary closures
# --------------------------------------------------------------------------

def apply_robin_ghost(P, w, t, endpoint):
    """Ghost value at the requested endpoint from the Robin flux relation."""
    if P.is_dirichlet:
        raise ValueError("apply_robin_ghost requires a Robin problem")
    if endpoint not in ("left", "right"):
        raise ValueError("endpoint must be 'left' or 'right'")
    vals = w.values
    h = w.h
    if endpoint == "left":
        xb, wb, win, d_expr = P.x_lo, vals[0], vals[1], P.d_left
    else:
        xb, wb, win, d_expr = P.x_hi, vals[-1], vals[-2], P.d_right
    ab = float(P.a(x=xb, t=t))
    if ab <= 0:
        raise CoefficientError("diffusion coefficient must be positive")
    psi = float(P.boundary.psi(x=xb, t=t, w=wb))
    d = float(d_expr(t=t)) if d_expr is not None else 0.0
    return win + 2.0 * h * (d - psi) / ab


def psi2_invert(psi2, y):
    """Solve psi2(s) = y for a strictly increasing continuous psi2.

    Bracketed bisection with geometric expansion from [-1, 1] in both
    directions; the bracket growing past 1e300 raises BracketError.
    """
    lo, hi = -1.0, 1.0
    while psi2(lo) > y:
        lo *= 4.0
        if lo < -1e300:
            raise BracketError("psi2_invert bracket exceeded 1e300")
    while psi2(hi) < y:
        hi *= 4.0
        if hi > 1e300:
            raise BracketError("psi2_invert bracket exceeded 1e300")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if psi2(mid) < y:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, abs(lo), abs(hi)):
            break
    return 0.5 * (lo + hi)


def _psi2_invert_array(psi2_expr, y):
    """Vectorized counterpart of psi2_invert for stage-time boundary data."""
    y = np.asarray(y, dtype=float)

    def f(s):
        return np.broadcast_to(np.asarray(psi2_expr(s=s), dtype=float), s.shape)

    lo = np.full(y.shape, -1.0)
    hi = np.full(y.shape, 1.0)
    for arr, sign in ((lo, -1.0), (hi, 1.0)):
        for _ in range(600):
            bad = (f(arr) > y) if sign < 0 else (f(arr) < y)
            if not np.any(bad):
                break
            arr[bad] *= 4.0
            if np.any(np.abs(arr) > 1e300):
                raise BracketError("psi2_invert bracket exceeded 1e300")
        else:
            raise BracketError("psi2_invert bracket did not close")
    for _ in range(120):
        mid = 0.5 * (lo + hi)
        below = f(mid) < y
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


def dirichlet_boundary_values(P, times):
    """Pinned endpoint values psi2^{-1}(d / psi1) at the given times."""
    if not P.is_dirichlet:
        raise ValueError("dirichlet_boundary_values requires a Dirichlet problem")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    bc = P.boundary
    out = []
    for xb, d_expr in ((P.x_lo, P.d_left), (P.x_hi, P.d_right)):
        psi1 = np.broadcast_to(
            np.asarray(bc.psi1(x=xb, t=times), dtype=float), times.shape)
        if np.any(psi1 <= 0):
            raise CoefficientError("psi1 must be positive on the boundary")
        d = _signal(d_expr, times)
        out.append(_psi2_invert_array(bc.psi2, d / psi1))
    return out[0], out[1]


# --------------------------------------------------------------------------
# right-hand side and time integration
# --------------------------------------------------------------------------

def semidiscrete_rhs(P, w, t):
    """dw/dt of the spatial discretization at time ``t``.

    For Dirichlet problems the endpoint entries are 0 (those nodes are
    pinned by the boundary relation, not evolved).
    """
    x = w.x
    x_half = np.empty(w.n + 1)
    x_half[1:-1] = 0.5 * (x[:-1] + x[1:])
    x_half[0] = x[0]
    x_half[-1] = x[-1]
    a_half, b_arr, c_arr, m_arr = _coeff_arrays(P, x, x_half, t)
    if P.is_dirichlet:
        dl = dr = 0.0
        psi_prog = (_EMPTY_I32, _EMPTY_I32, _EMPTY_F64)
    else:
        dl = float(P.d_left(t=t)) if P.d_left is not None else 0.0
        dr = float(P.d_right(t=t)) if P.d_right is not None else 0.0
        psi_prog = _prog(P.boundary.psi)
    out = np.empty(w.n)
    _kernel.rhs_once(
        out, w.values.copy(), t, x, w.h, P.is_dirichlet, False,
        a_half, b_arr, c_arr, m_arr,
        P.h is not None, *_prog(P.h),
        P.g is not None, *_prog(P.g),
        P.f is not None, P.f is not None and not P.f.uses("x"), *_prog(P.f),
        not P.is_dirichlet, *psi_prog, dl, dr,
    )
    if not np.all(np.isfinite(out)):
        raise BlowUpError(t)
    return GridFunction1D(P.x_lo, P.x_hi, out)


def _stable_dt(P, cfg, x, x_half, h):
    t_samples = np.linspace(0.0, cfg.T, 5)
    max_a = 0.0
    max_speed = 0.0
    gw_max = 0.0
    if P.g is not None:
        sup_w0 = float(np.max(np.abs(P.field("w0", x, 0.0)))) if P.w0 else 1.0
        wr = max(1.0, 2.0 * sup_w0)
        ws = np.linspace(-wr, wr, 41)
        eps = 1e-4 * wr
        for t in t_samples:
            for xv in (P.x_lo, 0.5 * (P.x_lo + P.x_hi), P.x_hi):
                gp = (np.asarray(P.g(x=xv, t=t, w=ws + eps), dtype=float)
                      - np.asarray(P.g(x=xv, t=t, w=ws - eps), dtype=float)) / (2 * eps)
                gw_max = max(gw_max, float(np.max(np.abs(gp))))
    for t in t_samples:
        a_half = P.field("a", x_half, t)
        if np.any(a_half <= 0):
            raise CoefficientError("diffusion coefficient must be positive")
        max_a = max(max_a, float(a_half.max()))
        speed = np.abs(P.field("b", x, t)) + np.abs(P.field("m", x, t)) * gw_max
        max_speed = max(max_speed, float(speed.max()))
    dt_diff = h * h / (2.0 * max_a)
    dt_adv = h / max(max_speed, 1e-12)
    return cfg.cfl_safety * min(dt_diff, dt_adv)


def integrate(P, cfg):
    """Run RK4 from 0 to T, recording a checkpoint every ``checkpoint_dt``.

    Deterministic: identical problems and configs give bit-identical
    trajectories.  Raises BlowUpError if the state leaves the finite range
    and SolverError on time-step underflow.
    """
    x, x_half, h = _grid(P, cfg.n_x)
    dt_raw = _stable_dt(P, cfg, x, x_half, h)
    if dt_raw < 1e-13 * max(cfg.T, 1.0):
        raise SolverError("time step underflow")

    cp = cfg.checkpoint_dt
    n_cp = int(math.floor(cfg.T / cp + 1e-9))
    times = [k * cp for k in range(n_cp + 1)]
    if times[-1] < cfg.T - 1e-9 * max(cfg.T, 1.0):
        times.append(cfg.T)
    times = np.asarray(times)

    tdep = {name: getattr(P, name) is not None and getattr(P, name).uses("t")
            for name in ("a", "b", "c", "m")}
    a_half, b_arr, c_arr, m_arr = _coeff_arrays(P, x, x_half, 0.0)
    upwind = cfg.advection_scheme == "upwind"

    w = P.field("w0", x, 0.0)
    if P.is_dirichlet:
        bl0, br0 = dirichlet_boundary_values(P, np.array([0.0]))
        w[0], w[-1] = bl0[0], br0[0]
    states = [GridFunction1D(P.x_lo, P.x_hi, w)]
    dt_used = None

    for k in range(len(times) - 1):
        t0, t1 = float(times[k]), float(times[k + 1])
        m_steps = max(1, int(math.ceil((t1 - t0) / dt_raw - 1e-12)))
        dt = (t1 - t0) / m_steps
        if dt_used is None:
            dt_used = dt
        stage_times = t0 + 0.5 * dt * np.arange(2 * m_steps + 1)
        if P.is_dirichlet:
            bval_lo, bval_hi = dirichlet_boundary_values(P, stage_times)
            dl_stage = dr_stage = np.zeros(1)
            psi_prog = (_EMPTY_I32, _EMPTY_I32, _EMPTY_F64)
        else:
            dl_stage = _signal(P.d_left, stage_times)
            dr_stage = _signal(P.d_right, stage_times)
            bval_lo = bval_hi = np.zeros(1)
            psi_prog = _prog(P.boundary.psi)

        _kernel.rk4_interval(
            w, t0, dt, m_steps, x, x_half, h, P.is_dirichlet, upwind,
            a_half, b_arr, c_arr, m_arr,
            tdep["a"], *_prog(P.a),
            tdep["b"], *_prog(P.b),
            tdep["c"], *_prog(P.c),
            tdep["m"], *_prog(P.m),
            P.h is not None, *_prog(P.h),
            P.g is not None, *_prog(P.g),
            P.f is not None, P.f is not None and not P.f.uses("x"), *_prog(P.f),
            *psi_prog,
            dl_stage, dr_stage, bval_lo, bval_hi,
        )
        if not np.all(np.isfinite(w)):
            raise BlowUpError(t1)
        states.append(GridFunction1D(P.x_lo, P.x_hi, w))

    d_record = (
        TimeSeries(times, _signal(P.d_left, times)),
        TimeSeries(times, _signal(P.d_right, times)),
    )
    return Trajectory(times=times, states=states, d_record=d_record, dt_used=dt_used)


# --------------------------------------------------------------------------
# auxiliary elliptic solves
# --------------------------------------------------------------------------

def solve_weight_p(a_field, b_field, p0, x_lo, x_hi, n):
    """Nonnegative weight vanishing at the boundary.

    Solves (a p')' + b p' = -p0 with p = 0 at both endpoints by a
    second-order conservative tridiagonal discretization.  ``a_field`` and
    ``b_field`` are callables of a position array.
    """
    if p0 < 0:
        raise ValueError("p0 must be nonnegative")
    x = np.linspace(x_lo, x_hi, n)
    h = (x_hi - x_lo) / (n - 1)
    a_left = np.asarray(a_field(x[1:-1] - 0.5 * h), dtype=float)
    a_right = np.asarray(a_field(x[1:-1] + 0.5 * h), dtype=float)
    if np.any(a_left <= 0) or np.any(a_right <= 0):
        raise CoefficientError("diffusion coefficient must be positive")
    b_mid = np.broadcast_to(
        np.asarray(b_field(x[1:-1]), dtype=float), (n - 2,))

    ab = np.zeros((3, n))
    rhs = np.zeros(n)
    ab[1, 0] = 1.0
    ab[1, -1] = 1.0
    inv_h2 = 1.0 / (h * h)
    inv_2h = 0.5 / h
    ab[0, 2:] = a_right * inv_h2 + b_mid * inv_2h           # super-diagonal
    ab[1, 1:-1] = -(a_left + a_right) * inv_h2              # diagonal
    ab[2, :-2] = a_left * inv_h2 - b_mid * inv_2h           # sub-diagonal
    rhs[1:-1] = -float(p0)
    try:
        p = scipy.linalg.solve_banded((1, 1), ab, rhs)
    except scipy.linalg.LinAlgError as exc:
        raise SolverError(f"singular weight system: {exc}") from exc
    if np.min(p) < -1e-12:
        raise SolverError("weight solution is not nonnegative")
    return GridFunction1D(x_lo, x_hi, p)


def edge_derivatives(p):
    """One-sided second-order derivatives of a grid function at its endpoints."""
    v = p.values
    h = p.h
    left = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
    right = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h)
    return left, right


def solve_elliptic_u(Q, n):
    """Solve u'' = (u')^2 + Q(r) on (0, 1) with u'(0) = 0, u'(1) + u(1) = 0.

    The substitution v = exp(-u) linearizes the equation to v'' + Q v = 0
    with v'(0) = 0, so one RK4 integration fixes the solution up to the
    scale v(0); bisection on the boundary residual -v'(1)/v(1) - ln v(1)
    pins that scale.  Returns (u as a grid function, sup|u|).
    """
    if n < 5:
        raise ValueError("n must be >= 5")
    r = np.linspace(0.0, 1.0, n)
    h = 1.0 / (n - 1)
    q_nodes = np.broadcast_to(np.asarray(Q(r), dtype=float), r.shape)
    q_half = np.broadcast_to(
        np.asarray(Q(r[:-1] + 0.5 * h), dtype=float), (n - 1,))

    # v'' = -Q v integrated with v(0)=1, v'(0)=0; v is linear in v(0)
    v = np.empty(n)
    v[0] = 1.0
    vp = 0.0
    for i in range(n - 1):
        q0, qm, q1 = q_nodes[i], q_half[i], q_nodes[i + 1]
        k1v, k1p = vp, -q0 * v[i]
        k2v, k2p = vp + 0.5 * h * k1p, -qm * (v[i] + 0.5 * h * k1v)
        k3v, k3p = vp + 0.5 * h * k2p, -qm * (v[i] + 0.5 * h * k2v)
        k4v, k4p = vp + h * k3p, -q1 * (v[i] + h * k3v)
        v[i + 1] = v[i] + h * (k1v + 2.0 * (k2v + k3v) + k4v) / 6.0
        vp = vp + h * (k1p + 2.0 * (k2p + k3p) + k4p) / 6.0
    if np.min(v) <= 0.0:
        raise InvalidQError("v = exp(-u) crossed zero during shooting")
    alpha, gamma = v[-1], vp

    def residual(v0):
        return -gamma / alpha - math.log(alpha * v0)

    lo = hi = 1.0
    if residual(1.0) > 0.0:
        while residual(hi) > 0.0:
            hi *= 4.0
            if hi > 1e300:
                raise BracketError("shooting bracket exceeded 1e300")
        lo = hi / 4.0
    else:
        while residual(lo) < 0.0:
            lo /= 4.0
            if lo < 1e-300:
                raise BracketError("shooting bracket exceeded 1e-300")
        hi = lo * 4.0
    if residual(lo) < 0.0 or residual(hi) > 0.0:
        raise BracketError("no sign change of the shooting residual")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        res = residual(mid)
        if abs(res) <= 1e-10:
            lo = hi = mid
            break
        if res > 0.0:
            lo = mid
        else:
            hi = mid
    v0 = 0.5 * (lo + hi)
    u = -np.log(v0 * v)
    grid = GridFunction1D(0.0, 1.0, u)
    return grid, float(np.max(np.abs(u)))


# --------------------------------------------------------------------------
# structural-constant estimates
# --------------------------------------------------------------------------

def estimate_c_reaction_range(P, n_x, T, n_t):
    """Sampled (min, max) of c - b_x - mu over space and time (b_x numeric)."""
    x, _, h = _grid(P, n_x)
    lo, hi = math.inf, -math.inf
    for t in np.linspace(0.0, T, n_t):
        c = P.field("c", x, t)
        mu = P.field("mu", x, t)
        b = P.field("b", x, t)
        net = c - np.gradient(b, h, edge_order=2) - mu
        lo = min(lo, float(net.min()))
        hi = max(hi, float(net.max()))
    return lo, hi


def estimate_cbar(P, n_x, T, n_t):
    """Sampled minimum of c - b_x - mu over space and time (b_x numeric)."""
    return estimate_c_reaction_range(P, n_x, T, n_t)[0]


def estimate_cbar_orlicz(P, delta0, delta1, n_x, T, n_t):
    """Sampled minimum of c - mu - max_i(b_x / (1 + delta_i))."""
    x, _, h = _grid(P, n_x)
    worst = math.inf
    for t in np.linspace(0.0, T, n_t):
        c = P.field("c", x, t)
        mu = P.field("mu", x, t)
        bx = np.gradient(P.field("b", x, t), h, edge_order=2)
        div_term = np.maximum(bx / (1.0 + delta0), bx / (1.0 + delta1))
        worst = min(worst, float(np.min(c - mu - div_term)))
    return worst


def _boundary_ratio_min(P, s_samples, T, n_t, b_transform):
    if P.is_dirichlet:
        raise ValueError("boundary coefficient estimate requires a Robin problem")
    half = max(2, s_samples // 2)
    mag = np.logspace(-6, math.log10(max(10.0, 10.0 * P.s0)), half)
    s = np.concatenate([-mag[::-1], mag])
    worst = math.inf
    for xb, nu in ((P.x_lo, -1.0), (P.x_hi, 1.0)):
        for t in np.linspace(0.0, T, n_t):
            psi = np.broadcast_to(np.asarray(
                P.boundary.psi(x=xb, t=t, w=s), dtype=float), s.shape)
            bval = float(P.b(x=xb, t=t)) if P.b is not None else 0.0
            term = psi + s * b_transform(bval * nu)
            if P.g is not None:
                mval = float(P.m(x=xb, t=t)) if P.m is not None else 0.0
                gval = np.broadcast_to(np.asarray(
                    P.g(x=xb, t=t, w=s), dtype=float), s.shape)
                term = term + gval * mval * nu
            worst = min(worst, float(np.min(term / s)))
    return worst


def estimate_psi0(P, s_samples, T, n_t):
    """Sampled infimum of (psi + s b nu + g m nu)/s over the boundary."""
    return _boundary_ratio_min(P, s_samples, T, n_t, lambda bn: bn)


def estimate_psi0_orlicz(P, delta0, delta1, s_samples, T, n_t):
    """Variant with b nu replaced by min_i(b nu / (1 + delta_i)); g must vanish."""
    if P.g is not None:
        raise ValueError("the Orlicz-route boundary estimate requires g = 0")
    return _boundary_ratio_min(
        P, s_samples, T, n_t,
        lambda bn: min(bn / (1.0 + delta0), bn / (1.0 + delta1)))
