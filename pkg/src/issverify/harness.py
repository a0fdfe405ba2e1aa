"""End-to-end verification: simulate, measure, evaluate bounds, report.

``run_scenario`` validates the structural assumptions by sampling (each
check carries the tag of the assumption it probes), integrates the PDE,
builds the theorem-appropriate measured-norm series from the smoothing
functionals, evaluates the matching closed-form bound on a refined time
grid, and assembles a VerificationReport.  ``dissipation_check`` audits the
discrete decay inequality along a densely checkpointed trajectory, and
``run_property_suites`` batches the pointwise inequality suites over the
Young-function catalog.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bounds, lyapunov, norms, solver, youngfn
from .norms import BoundaryPair, GridFunction1D, TimeSeries
from .report import StructuralCheck, VerificationReport, scenario_hash

__all__ = [
    "ScenarioError",
    "structural_checks",
    "run_scenario",
    "DissipationReport",
    "dissipation_check",
    "PropertySuiteResult",
    "run_property_suites",
]

_SAMPLE_TOL = 1e-9


class ScenarioError(RuntimeError):
    pass


# --------------------------------------------------------------------------
# structural checks
# --------------------------------------------------------------------------

def _sample_times(T, n=9):
    return np.linspace(0.0, T, n)


def _signed_log_samples(hi, n=24):
    mag = np.logspace(-4, math.log10(hi), n // 2)
    return np.concatenate([-mag[::-1], mag])


def _needs_a23(theorem):
    return theorem in ("thm31i", "thm31ii", "thm32i", "thm32ii", "thm41", "thm42")


def structural_checks(s, p=None):
    """Sampled verdicts on the structural assumptions the theorem needs.

    ``p`` is the parabolic weight (required for the Dirichlet transport
    check).  Compatibility of the initial data with the boundary relation
    is reported as a warning only: violating it degrades early-time
    accuracy without invalidating the estimates.
    """
    P, cfg, theorem = s.problem, s.solver, s.theorem
    checks = []
    x = np.linspace(P.x_lo, P.x_hi, cfg.n_x)
    ts = _sample_times(cfg.T)

    a_min = math.inf
    for t in ts:
        a_min = min(a_min, float(P.field("a", x, t).min()))
    checks.append(StructuralCheck(
        "A1-1", "diffusion coefficient bounded below by a positive constant",
        a_min, a_min > 0))

    if P.h is not None:
        svals = _signed_log_samples(max(10.0, 10.0 * P.s0))
        worst = -math.inf
        for t in ts:
            mu = P.field("mu", x, t)[:, None]
            for eta in (-3.0, 0.0, 3.0):
                hv = np.asarray(P.h(x=x[:, None], t=t, w=svals[None, :], wx=eta),
                                dtype=float)
                hv = np.broadcast_to(hv, (x.size, svals.size))
                ratio = (-hv * svals[None, :] - mu * svals[None, :] ** 2) \
                    / svals[None, :] ** 2
                worst = max(worst, float(ratio.max()))
        checks.append(StructuralCheck(
            "A2-1", "-h(x,t,s,eta)*s dominated by mu*s^2 on samples",
            worst, worst <= _SAMPLE_TOL))

    if P.g is not None:
        if P.g0 is None:
            checks.append(StructuralCheck(
                "A2-2", "transport envelope g0 declared", None, False))
        else:
            svals = _signed_log_samples(P.s0)
            worst = -math.inf
            for t in ts:
                g0 = np.abs(P.field("g0", x, t))[:, None]
                gv = np.asarray(P.g(x=x[:, None], t=t, w=svals[None, :]),
                                dtype=float)
                gv = np.broadcast_to(gv, (x.size, svals.size))
                slack = (np.abs(gv) - g0 * np.abs(svals)[None, :]) \
                    / np.abs(svals)[None, :]
                worst = max(worst, float(slack.max()))
            checks.append(StructuralCheck(
                "A2-2", "|g(x,t,s)| <= |g0(x,t)| |s| for |s| <= s0 on samples",
                worst, worst <= _SAMPLE_TOL))

    if _needs_a23(theorem):
        est = solver.estimate_cbar(P, cfg.n_x, cfg.T, 9)
        checks.append(StructuralCheck(
            "A2-3", f"sampled min(c - b_x - mu) supports declared cbar={P.cbar:g}",
            est, est >= P.cbar - _SAMPLE_TOL and P.cbar >= 0))

    robin_decay = theorem in ("thm31i", "thm31ii", "thm41", "thm42")
    if robin_decay and P.g is not None:
        # transport divergence sign condition
        worst = -math.inf
        svals = _signed_log_samples(max(10.0, 10.0 * P.s0))
        h_grid = x[1] - x[0]
        for t in ts:
            m_arr = P.field("m", x, t)
            div_m = np.gradient(m_arr, h_grid, edge_order=2)
            gv = np.asarray(P.g(x=x[:, None], t=t, w=svals[None, :]), dtype=float)
            gv = np.broadcast_to(gv, (x.size, svals.size))
            worst = max(worst, float(
                (gv * svals[None, :] * div_m[:, None]).max()))
        checks.append(StructuralCheck(
            "A3-1", "g*s*div(m) <= 0 on samples", worst, worst <= _SAMPLE_TOL))

    if robin_decay:
        est = solver.estimate_psi0(P, 60, cfg.T, 9)
        declared = P.psi0bar if P.psi0bar is not None else 0.0
        checks.append(StructuralCheck(
            "A3-2", f"sampled boundary feedback ratio supports psi0bar={declared:g}",
            est, est >= declared - _SAMPLE_TOL and declared >= 0))

    if theorem in ("thm43", "thm44"):
        est = solver.estimate_cbar_orlicz(
            P, s.young.delta0, s.young.delta1, cfg.n_x, cfg.T, 9)
        checks.append(StructuralCheck(
            "A2-3'", f"sampled Orlicz-route reaction floor supports cbar={P.cbar:g}",
            est, est >= P.cbar - _SAMPLE_TOL and P.cbar > 0))
    if theorem == "thm43":
        est = solver.estimate_psi0_orlicz(
            P, s.young.delta0, s.young.delta1, 60, cfg.T, 9)
        declared = P.psi0bar if P.psi0bar is not None else 0.0
        checks.append(StructuralCheck(
            "A3-2'", f"sampled Orlicz-route boundary floor supports psi0bar={declared:g}",
            est, est >= declared - _SAMPLE_TOL and declared > 0))

    if P.is_dirichlet:
        svals = np.linspace(-max(4.0, 4.0 * P.s0), max(4.0, 4.0 * P.s0), 201)
        psi2_vals = np.asarray(P.boundary.psi2(s=svals), dtype=float)
        increasing = bool(np.all(np.diff(psi2_vals) > 0))
        psi1_min = math.inf
        for t in ts:
            for xb in (P.x_lo, P.x_hi):
                psi1_min = min(psi1_min, float(P.boundary.psi1(x=xb, t=t)))
        checks.append(StructuralCheck(
            "A3'-2", "psi2 strictly increasing and psi1 bounded below by > 0",
            psi1_min, increasing and psi1_min > 0))
        if P.g is not None and p is not None:
            worst = -math.inf
            svals = _signed_log_samples(max(10.0, 10.0 * P.s0))
            h_grid = x[1] - x[0]
            for t in ts:
                pm = p.values * P.field("m", x, t)
                div_pm = np.gradient(pm, h_grid, edge_order=2)
                gv = np.asarray(P.g(x=x[:, None], t=t, w=svals[None, :]),
                                dtype=float)
                gv = np.broadcast_to(gv, (x.size, svals.size))
                worst = max(worst, float(
                    (gv * svals[None, :] * div_pm[:, None]).max()))
            checks.append(StructuralCheck(
                "A3'-1", "g*s*div(p*m) <= 0 on samples", worst,
                worst <= _SAMPLE_TOL))

    if theorem == "prop51":
        lo, hi = solver.estimate_c_reaction_range(P, cfg.n_x, cfg.T, 9)
        checks.append(StructuralCheck(
            "P51-c",
            f"chosen decay constant {s.prop51_cbar:g} exceeds max(c - b_x - mu)",
            hi, s.prop51_cbar > max(hi, 0.0)))
        time_free = all(
            getattr(P, name) is None or not getattr(P, name).uses("t")
            for name in ("a", "b", "c", "mu"))
        checks.append(StructuralCheck(
            "P51-t", "a, b, c, mu time-independent and no transport term",
            None, time_free and P.g is None and (P.m is None or not P.m.uses("t"))))

    if theorem == "robin52":
        const_ok = all(
            getattr(P, name) is not None and not getattr(P, name).variables
            for name in ("a", "b", "c"))
        checks.append(StructuralCheck(
            "R52-const", "a, b, c constant", None, const_ok))
        checks.append(StructuralCheck(
            "R52-linear", "no h/g nonlinearities", None,
            P.h is None and P.g is None))
        svals = _signed_log_samples(10.0)
        worst = 0.0
        for t in ts:
            for xb in (P.x_lo, P.x_hi):
                psi = np.asarray(P.boundary.psi(x=xb, t=t, w=svals), dtype=float)
                psi = np.broadcast_to(psi, svals.shape)
                worst = max(worst, float(
                    np.max(np.abs(psi - s.robin52_K * svals))))
        checks.append(StructuralCheck(
            "R52-psi", f"boundary feedback equals K*w with K={s.robin52_K:g}",
            worst, worst <= _SAMPLE_TOL))

    # compatibility of the initial data with the boundary relation at t=0
    w0 = P.field("w0", x, 0.0)
    h_grid = x[1] - x[0]
    resid = 0.0
    for xb, side in ((P.x_lo, "left"), (P.x_hi, "right")):
        d_expr = P.d_left if side == "left" else P.d_right
        d0 = float(d_expr(t=0.0)) if d_expr is not None else 0.0
        if P.is_dirichlet:
            wb = w0[0] if side == "left" else w0[-1]
            bc_val = float(P.boundary.psi1(x=xb, t=0.0)) * float(
                P.boundary.psi2(s=wb))
        else:
            if side == "left":
                dnu = -(-3.0 * w0[0] + 4.0 * w0[1] - w0[2]) / (2.0 * h_grid)
                wb = w0[0]
            else:
                dnu = (3.0 * w0[-1] - 4.0 * w0[-2] + w0[-3]) / (2.0 * h_grid)
                wb = w0[-1]
            bc_val = float(P.a(x=xb, t=0.0)) * dnu + float(
                P.boundary.psi(x=xb, t=0.0, w=wb))
        resid = max(resid, abs(bc_val - d0))
    checks.append(StructuralCheck(
        "A4", "initial data compatible with the boundary relation at t=0",
        resid, resid <= 1e-6, warn_only=True))
    return checks


# --------------------------------------------------------------------------
# reduced series builders
# --------------------------------------------------------------------------

def _dense_times(cp_times, target=4000):
    """Refine the checkpoint grid so time quadrature is well resolved."""
    n_int = len(cp_times) - 1
    if n_int <= 0:
        return np.asarray(cp_times, dtype=float)
    r = max(1, int(math.ceil(target / n_int)))
    pieces = [np.linspace(cp_times[k], cp_times[k + 1], r + 1)[:-1]
              for k in range(n_int)]
    pieces.append(np.asarray([cp_times[-1]]))
    return np.concatenate(pieces)


def _abs_boundary_series(P, times):
    vals = np.zeros_like(times)
    for d_expr in (P.d_left, P.d_right):
        if d_expr is not None:
            vals = vals + np.abs(np.broadcast_to(
                np.asarray(d_expr(t=times), dtype=float), times.shape))
    return TimeSeries(times, vals)


def _f_matrix(P, x, times):
    fv = np.asarray(P.f(x=x[None, :], t=times[:, None]), dtype=float)
    return np.broadcast_to(fv, (times.size, x.size))


def _f_reduced_series(P, grid, times, weight=None, Y=None):
    """Spatial reduction of |f| per time: L^1, weighted L^1 or a modular."""
    if P.f is None:
        return None
    fv = np.abs(_f_matrix(P, grid.x, times))
    if Y is not None:
        fv = youngfn.big_phi(Y, fv)
    if weight is not None:
        fv = fv * weight[None, :]
    return TimeSeries(times, np.trapezoid(fv, dx=grid.h, axis=1))


def _boundary_signal(P, d_expr, times):
    if d_expr is None:
        return np.zeros_like(times)
    return np.broadcast_to(np.asarray(d_expr(t=times), dtype=float), times.shape)


def _dirichlet_series(P, p, times, Y=None):
    """Boundary gain series for the weighted Dirichlet estimates."""
    bc = P.boundary
    pl, pr = solver.edge_derivatives(p)
    total = np.zeros_like(times)
    for xb, d_expr, pp in ((P.x_lo, P.d_left, pl), (P.x_hi, P.d_right, pr)):
        d_vals = _boundary_signal(P, d_expr, times)
        psi1 = np.broadcast_to(
            np.asarray(bc.psi1(x=xb, t=times), dtype=float), times.shape)
        a_vals = np.broadcast_to(
            np.asarray(P.a(x=xb, t=times), dtype=float), times.shape)
        inv = np.abs(solver._psi2_invert_array(bc.psi2, d_vals / psi1))
        if Y is not None:
            inv = youngfn.big_phi(Y, inv)
        total = total + a_vals * inv * abs(pp)
    return TimeSeries(times, total)


def _phi_boundary_series(P, Y, times):
    vals = np.zeros_like(times)
    for d_expr in (P.d_left, P.d_right):
        vals = vals + youngfn.big_phi(
            Y, np.abs(_boundary_signal(P, d_expr, times)))
    return TimeSeries(times, vals)


# --------------------------------------------------------------------------
# gain resolution
# --------------------------------------------------------------------------

def _resolve_gains(s, p=None):
    if s.theorem not in ("thm31ii", "thm32ii", "thm42"):
        return None
    if isinstance(s.gains, dict):
        return bounds.GainParams(**s.gains)
    P, cfg = s.problem, s.solver
    x = np.linspace(P.x_lo, P.x_hi, cfg.n_x)
    h = x[1] - x[0]
    a_lo, a_hi, b_under = math.inf, -math.inf, math.inf
    for t in _sample_times(cfg.T):
        a_vals = P.field("a", x, t)
        b_vals = P.field("b", x, t)
        ax = np.gradient(a_vals, h, edge_order=2)
        a_lo = min(a_lo, float(a_vals.min()))
        a_hi = max(a_hi, float(a_vals.max()))
        b_under = min(b_under, float(((b_vals + ax) / a_vals).min()))
    dd = max(abs(P.x_lo), abs(P.x_hi))
    if s.theorem == "thm32ii":
        pp = np.gradient(p.values, p.h, edge_order=2)
        return bounds.pick_gains(
            b_under, a_hi, a_lo, dd, s.q,
            p0_weight=s.weight_p0, p_prime_max=float(np.max(np.abs(pp))))
    return bounds.pick_gains(b_under, a_hi, a_lo, dd, s.q,
                             psi0_under=s.problem.psi0bar)


# --------------------------------------------------------------------------
# the end-to-end run
# --------------------------------------------------------------------------

def _resolve_eps(s):
    if s.eps != "auto" and s.eps is not None:
        return float(s.eps)
    Y, P = s.young, s.problem
    cap = P.cbar * (1.0 + Y.delta0)
    if s.theorem == "thm43" and P.psi0bar is not None:
        cap = min(cap, (1.0 + Y.delta0) / Y.delta1 * P.psi0bar)
    return 0.5 * cap


def run_scenario(s):
    """Simulate, evaluate the selected bound, and report margins.

    Returns (trajectory, report).  Structural failures raise ScenarioError
    unless the scenario waives them; theorem/boundary mismatches and
    violated bound preconditions always raise.
    """
    P, cfg, theorem = s.problem, s.solver, s.theorem
    if theorem in ("thm43", "thm44") and P.g is not None:
        raise ScenarioError(f"{theorem} requires a problem with g = 0")

    p = None
    if P.is_dirichlet:
        p = solver.solve_weight_p(
            lambda xs: P.field("a", np.asarray(xs, dtype=float), 0.0),
            lambda xs: P.field("b", np.asarray(xs, dtype=float), 0.0),
            s.weight_p0, P.x_lo, P.x_hi, cfg.n_x)
        # the solve tolerates rounding down to -1e-12; weights must be >= 0
        p = p.with_values(np.maximum(p.values, 0.0))

    checks = structural_checks(s, p=p)
    failed = [c.tag for c in checks if not c.ok and not c.warn_only]
    if failed and not s.waive_structural:
        raise ScenarioError(
            "structural checks failed: " + ", ".join(failed))

    traj = solver.integrate(P, cfg)
    grid0 = traj.states[0]
    tau = (lyapunov.default_tau(float(np.max(np.abs(grid0.values))))
           if s.tau == "auto" else float(s.tau))
    cp_times = traj.times
    dense = _dense_times(cp_times)
    Y = s.young
    gains = _resolve_gains(s, p=p)
    extra = {}

    if theorem in ("thm31i", "thm31ii", "thm41", "thm42", "prop51"):
        lhs = np.array([lyapunov.v_tau(st, tau) for st in traj.states])
    elif theorem == "robin52":
        beta = bounds.cosine_weight(
            float(P.a(x=0.0, t=0.0)), float(P.b(x=0.0, t=0.0)), s.robin52_theta)
        beta_grid = GridFunction1D(P.x_lo, P.x_hi, beta(grid0.x))
        lhs = np.array([lyapunov.v_tau_weighted(beta_grid, st, tau)
                        for st in traj.states])
    elif theorem in ("thm32i", "thm32ii"):
        lhs = np.array([lyapunov.v_tau_weighted(p, st, tau)
                        for st in traj.states])
    elif theorem == "thm43":
        lhs = np.array([lyapunov.v_tau_phi(Y, st, tau) for st in traj.states])
    else:  # thm44
        lhs = np.array([lyapunov.v_tau_phi_weighted(Y, p, st, tau)
                        for st in traj.states])

    if theorem in ("thm31i", "thm31ii", "thm41", "thm42"):
        inputs = bounds.BoundInputs(
            cp_times, s.q, norms.l1_norm(grid0),
            _abs_boundary_series(P, dense),
            _f_reduced_series(P, grid0, dense))
        if theorem == "thm31i":
            if P.cbar > 0:
                rhs = bounds.l1_lq_bound(inputs, P.cbar)
            else:
                if s.q != 1:
                    raise ScenarioError("q > 1 requires cbar > 0")
                rhs = bounds.l1_bound(inputs, P.cbar)
        elif theorem == "thm31ii":
            rhs = bounds.l1_lq_bound_gained(inputs, gains)
        elif theorem == "thm41":
            rhs = bounds.lphi_l1_bound(inputs, P.cbar, Y)
        else:
            c_hat, c_kl = bounds.gain_constants(gains)
            rhs = bounds.lphi_l1_bound(inputs, c_hat, Y, front=c_kl)
    elif theorem in ("thm32i", "thm32ii"):
        inputs = bounds.BoundInputs(
            cp_times, s.q, norms.weighted_l1_norm(p, grid0),
            _dirichlet_series(P, p, dense),
            _f_reduced_series(P, grid0, dense, weight=p.values))
        if theorem == "thm32i":
            if P.cbar > 0:
                rhs = bounds.l1_lq_bound(inputs, P.cbar)
            else:
                if s.q != 1:
                    raise ScenarioError("q > 1 requires cbar > 0")
                rhs = bounds.l1_bound(inputs, P.cbar)
        else:
            rhs = bounds.l1_lq_bound_gained(inputs, gains)
    elif theorem == "thm43":
        eps = _resolve_eps(s)
        mi = bounds.ModularInputs(
            cp_times, s.q, norms.orlicz_modular(Y, grid0),
            _phi_boundary_series(P, Y, dense),
            _f_reduced_series(P, grid0, dense, Y=Y),
            w0_lux_norm=norms.luxemburg_norm(Y, grid0))
        rhs, lux_rhs = bounds.modular_bound(
            mi, P.cbar, Y, eps, psi0_under=P.psi0bar)
        extra["eps"] = eps
        extra["lux_norm_bound"] = [float(v) for v in lux_rhs.values]
    elif theorem == "thm44":
        eps = _resolve_eps(s)
        d0, d1 = Y.delta0, Y.delta1
        pv = p.values
        pmax = np.maximum(np.abs(pv) ** (1.0 + d0), np.abs(pv) ** (1.0 + d1))
        w0_mod = float(np.trapezoid(
            pv * youngfn.big_phi(Y, np.abs(grid0.values)), dx=grid0.h))
        mi = bounds.ModularInputs(
            cp_times, s.q, w0_mod,
            _dirichlet_series(P, p, dense, Y=Y),
            _f_reduced_series(P, grid0, dense, weight=pmax, Y=Y))
        rhs = bounds.weighted_modular_bound(mi, P.cbar, Y, eps)
        extra["eps"] = eps
    elif theorem == "prop51":
        if s.elliptic_q is None:
            raise ScenarioError("prop51 scenarios need an elliptic_q expression")
        u_grid, u_sup = solver.solve_elliptic_u(
            lambda r: s.elliptic_q(r=np.asarray(r, dtype=float)), s.elliptic_n)
        _, c_max = solver.estimate_c_reaction_range(P, cfg.n_x, cfg.T, 9)
        inputs = bounds.BoundInputs(
            cp_times, 1.0, norms.l1_norm(grid0),
            _abs_boundary_series(P, dense),
            _f_reduced_series(P, grid0, dense))
        rhs = bounds.sign_changing_l1_bound(
            inputs, s.prop51_cbar, u_sup, structural_max=c_max)
        extra["u_sup"] = u_sup
        extra["prefactor"] = math.exp(u_sup)
    else:  # robin52
        a0 = float(P.a(x=0.0, t=0.0))
        b0 = float(P.b(x=0.0, t=0.0))
        c0 = float(P.c(x=0.0, t=0.0))
        beta = bounds.cosine_weight(a0, b0, s.robin52_theta)
        beta_vals = beta(grid0.x)
        d0_series = TimeSeries(dense, np.abs(_boundary_signal(P, P.d_left, dense)))
        d1_series = TimeSeries(dense, np.abs(_boundary_signal(P, P.d_right, dense)))
        f_sup = None
        if P.f is not None:
            fv = np.abs(_f_matrix(P, grid0.x, dense)) * beta_vals[None, :]
            f_sup = TimeSeries(dense, fv.max(axis=1))
        w0_beta = float(np.trapezoid(
            beta_vals * np.abs(grid0.values), dx=grid0.h))
        validity, rhs = bounds.cosine_weighted_robin_bound(
            a0, b0, c0, s.robin52_theta, s.robin52_K, cp_times,
            w0_beta, d0_series, d1_series, f_sup)
        extra["validity"] = [
            {"condition": name, "ok": ok,
             "value": None if val is None else float(val)}
            for name, ok, val in validity.items()]
        if rhs is None:
            raise ScenarioError(
                "weighted-Robin preconditions failed: " + "; ".join(
                    name for name, ok, _ in validity.items() if not ok))

    report = VerificationReport(
        times=cp_times,
        lhs=lhs,
        rhs=np.asarray(rhs.values),
        theorem=theorem,
        rel_margin_slack=s.rel_margin_slack,
        tau=tau,
        tau_slack=lyapunov.tau_slack(tau, P.measure),
        preset=s.preset,
        q=s.q,
        gains=gains.to_dict() if gains is not None else None,
        structural=checks,
        scenario_hash=scenario_hash(s.canonical_json()),
        extra=extra,
    )
    return traj, report


# --------------------------------------------------------------------------
# discrete dissipation audit
# --------------------------------------------------------------------------

@dataclass
class DissipationReport:
    n_intervals: int
    n_violations: int
    worst_margin: float
    slack_scale: float
    tau: float
    cbar: float

    @property
    def passed(self):
        return self.n_violations == 0

    def summary(self):
        return (f"dissipation: {'PASS' if self.passed else 'FAIL'} "
                f"({self.n_violations}/{self.n_intervals} violations, "
                f"worst margin {self.worst_margin:+.3e})")


def dissipation_check(traj, P, tau, cbar, slack_scale=10.0):
    """Interval-wise audit of the decay inequality along a trajectory.

    Verifies, for consecutive checkpoints a spacing of at most 10 time
    steps apart,

        (V(t+D) - V(t))/D <= -cbar V(t) + A1(t) + A2(t) + B(t) tau + slack

    with A1 the boundary input magnitude, A2 the in-domain input mass, B
    the smoothing-offset coefficient, and slack = slack_scale * (D + h^2).
    """
    if P.is_dirichlet:
        raise ValueError("the dissipation audit covers Robin/Neumann problems")
    if P.g is not None and P.g0 is None:
        raise ValueError("the dissipation audit needs the g0 envelope")
    dts = np.diff(traj.times)
    if np.max(dts) > 10.0 * traj.dt_used * (1.0 + 1e-9):
        raise ValueError("checkpoints too sparse: need checkpoint_dt <= 10*dt")

    grid = traj.states[0]
    x = grid.x
    h = grid.h
    measure = P.measure
    t_left = traj.times[:-1]

    V = np.array([lyapunov.v_tau(st, tau) for st in traj.states])
    A1 = _abs_boundary_series(P, traj.times).values[:-1]
    if P.f is not None:
        A2 = np.empty(t_left.size)
        chunk = max(1, int(2e6 / max(x.size, 1)))
        for i0 in range(0, t_left.size, chunk):
            sel = t_left[i0:i0 + chunk]
            A2[i0:i0 + len(sel)] = np.trapezoid(
                np.abs(_f_matrix(P, x, sel)), dx=h, axis=1)
    else:
        A2 = np.zeros(t_left.size)

    sample_ts = _sample_times(traj.times[-1])
    a_min = min(float(P.field("a", x, t).min()) for t in sample_ts)
    if P.g is not None:
        gm_sq = max(
            float(np.max((np.abs(P.field("g0", x, t))
                          * np.abs(P.field("m", x, t))) ** 2))
            for t in sample_ts)
    else:
        gm_sq = 0.0

    tdep = any(getattr(P, name) is not None and getattr(P, name).uses("t")
               for name in ("b", "c", "mu"))
    def b_coeff(t):
        cmu = np.trapezoid(
            np.abs(P.field("c", x, t)) + np.abs(P.field("mu", x, t)), dx=h)
        b_edge = abs(float(P.b(x=P.x_lo, t=t))) + abs(float(P.b(x=P.x_hi, t=t))) \
            if P.b is not None else 0.0
        return 0.375 * (cmu + b_edge + measure / a_min * gm_sq)

    if tdep:
        B = np.array([b_coeff(t) for t in t_left])
    else:
        B = np.full(t_left.size, b_coeff(0.0))

    slack = slack_scale * (dts + h * h)
    lhs = np.diff(V) / dts
    rhs = -cbar * V[:-1] + A1 + A2 + B * tau + slack
    margins = rhs - lhs
    return DissipationReport(
        n_intervals=int(len(margins)),
        n_violations=int(np.count_nonzero(margins < 0.0)),
        worst_margin=float(margins.min()),
        slack_scale=slack_scale,
        tau=tau,
        cbar=cbar,
    )


# --------------------------------------------------------------------------
# property suites
# --------------------------------------------------------------------------

@dataclass
class PropertySuiteResult:
    seed: int
    reports: list

    @property
    def passed(self):
        return all(r.passed for r in self.reports)

    @property
    def n_items(self):
        return sum(len(r.items) for r in self.reports)

    @property
    def n_failed(self):
        return sum(it.n_failed for r in self.reports for it in r.items)

    def summary(self):
        lines = [f"property suites (seed={self.seed}): "
                 f"{'PASS' if self.passed else 'FAIL'} "
                 f"({self.n_items} item groups, {self.n_failed} failing samples)"]
        for r in self.reports:
            lines.append(r.summary())
        return "\n".join(lines)


def _orlicz_norm_suite(Y, n_grids, n_nodes, seed, tol=1e-9):
    from .checks import CheckReport, ItemResult

    rng = np.random.default_rng(seed)
    sandwich_lo, sandwich_hi, holder = [], [], []
    for _ in range(n_grids):
        scale = math.exp(rng.uniform(math.log(0.1), math.log(3.0)))
        u = GridFunction1D(0.0, 1.0, rng.normal(0.0, scale, n_nodes))
        v = GridFunction1D(0.0, 1.0, rng.normal(0.0, scale, n_nodes))
        m_lo, m_hi = norms.luxemburg_sandwich_check(Y, u)
        sandwich_lo.append(m_lo)
        sandwich_hi.append(m_hi)
        holder.append(norms.holder_orlicz_check(Y, u, v))

    report = CheckReport(name=f"orlicz_norms[{Y.variant}]", seed=seed, tol=tol)
    for name, vals in (("sandwich_lower", sandwich_lo),
                       ("sandwich_upper", sandwich_hi),
                       ("holder", holder)):
        arr = np.asarray(vals)
        report.items.append(ItemResult(
            name=name, n_checked=arr.size,
            n_failed=int(np.count_nonzero(arr < -tol)),
            worst_slack=float(arr.min())))
    return report


def run_property_suites(seed=0, n_samples=400, n_grids=20):
    """All pointwise/lemma suites over the catalog; deterministic per seed."""
    reports = []
    for i, tau in enumerate((1e-3, 1e-1, 1.0, 10.0)):
        reports.append(lyapunov.check_rho_properties(tau, 2500, seed + i))
    for i, Y in enumerate(youngfn.default_catalog()):
        reports.append(youngfn.check_lemma_phi(Y, n_samples, seed + 10 + i))
        reports.append(youngfn.check_lemma_inv(Y, n_samples, seed + 20 + i))
        reports.append(_orlicz_norm_suite(Y, n_grids, 101, seed + 30 + i))
    return PropertySuiteResult(seed=seed, reports=reports)
