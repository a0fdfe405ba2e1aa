"""Jitted inner loop of the method-of-lines integrator.

The solver hands every scalar field (coefficients, nonlinearities, boundary
data) to this module as a flat postfix program produced by
``expr.compile_program``; a tiny stack machine interprets those programs
inside the jitted right-hand-side evaluation.  That keeps a single RK4 code
path for presets and user-supplied expressions alike, with no Python-level
work per time step.

Variable slots in the interpreter environment: 0=x, 1=t, 2=w, 3=wx, 4=s, 5=r.
Domain errors (ln of a nonpositive value, ...) surface as NaN and are caught
by the caller's finite-state check after each checkpoint interval.
"""

from __future__ import annotations

import numpy as np
from numba import njit

# opcode numbering mirrors issverify.expr
OP_CONST = 0
OP_VAR = 1
OP_NEG = 2
OP_ADD = 3
OP_SUB = 4
OP_MUL = 5
OP_DIV = 6
OP_POW = 7
OP_SIN = 8
OP_COS = 9
OP_TAN = 10
OP_EXP = 11
OP_LN = 12
OP_ABS = 13
OP_SQRT = 14
OP_TANH = 15
OP_MIN = 16
OP_MAX = 17
OP_POWI = 18


@njit(cache=True)
def eval_program(code, args, consts, env, stack):
    """Run one postfix program on a scalar environment; returns the value."""
    sp = 0
    for i in range(code.shape[0]):
        op = code[i]
        if op == OP_CONST:
            stack[sp] = consts[args[i]]
            sp += 1
        elif op == OP_VAR:
            stack[sp] = env[args[i]]
            sp += 1
        elif op == OP_NEG:
            stack[sp - 1] = -stack[sp - 1]
        elif op == OP_ADD:
            sp -= 1
            stack[sp - 1] = stack[sp - 1] + stack[sp]
        elif op == OP_SUB:
            sp -= 1
            stack[sp - 1] = stack[sp - 1] - stack[sp]
        elif op == OP_MUL:
            sp -= 1
            stack[sp - 1] = stack[sp - 1] * stack[sp]
        elif op == OP_DIV:
            sp -= 1
            stack[sp - 1] = stack[sp - 1] / stack[sp]
        elif op == OP_POW:
            sp -= 1
            stack[sp - 1] = stack[sp - 1] ** stack[sp]
        elif op == OP_SIN:
            stack[sp - 1] = np.sin(stack[sp - 1])
        elif op == OP_COS:
            stack[sp - 1] = np.cos(stack[sp - 1])
        elif op == OP_TAN:
            stack[sp - 1] = np.tan(stack[sp - 1])
        elif op == OP_EXP:
            stack[sp - 1] = np.exp(stack[sp - 1])
        elif op == OP_LN:
            stack[sp - 1] = np.log(stack[sp - 1])
        elif op == OP_ABS:
            stack[sp - 1] = abs(stack[sp - 1])
        elif op == OP_SQRT:
            stack[sp - 1] = np.sqrt(stack[sp - 1])
        elif op == OP_TANH:
            stack[sp - 1] = np.tanh(stack[sp - 1])
        elif op == OP_MIN:
            sp -= 1
            stack[sp - 1] = min(stack[sp - 1], stack[sp])
        elif op == OP_MAX:
            sp -= 1
            stack[sp - 1] = max(stack[sp - 1], stack[sp])
        else:  # OP_POWI
            base = stack[sp - 1]
            acc = base
            for _ in range(args[i] - 1):
                acc *= base
            stack[sp - 1] = acc
    return stack[0]


@njit(cache=True)
def eval_field(code, args, consts, xs, t, out, stack):
    """Evaluate an (x, t)-program at every node of ``xs``."""
    env = np.zeros(6)
    env[1] = t
    for i in range(xs.shape[0]):
        env[0] = xs[i]
        out[i] = eval_program(code, args, consts, env, stack)


@njit(cache=True)
def _rhs(out, w, t, x, h, dirichlet, upwind,
         a_half, b_arr, c_arr, m_arr,
         has_h, h_code, h_args, h_consts,
         has_g, g_code, g_args, g_consts,
         has_f, f_uniform, f_code, f_args, f_consts,
         robin, psi_code, psi_args, psi_consts, dl, dr,
         gbuf, stack, env):
    """dw/dt on all nodes; Dirichlet endpoints get 0 (they are pinned)."""
    n = w.shape[0]
    inv_h = 1.0 / h
    inv_h2 = inv_h * inv_h
    inv_2h = 0.5 * inv_h

    env[1] = t
    f_scalar = 0.0
    if has_f and f_uniform:
        env[0] = x[0]
        f_scalar = eval_program(f_code, f_args, f_consts, env, stack)
    if robin:
        # ghost nodes from a * dw/dnu + psi(x, t, w) = d at each endpoint
        env[0] = x[0]
        env[2] = w[0]
        psi_lo = eval_program(psi_code, psi_args, psi_consts, env, stack)
        ghost_lo = w[1] + 2.0 * h * (dl - psi_lo) / a_half[0]
        env[0] = x[n - 1]
        env[2] = w[n - 1]
        psi_hi = eval_program(psi_code, psi_args, psi_consts, env, stack)
        ghost_hi = w[n - 2] + 2.0 * h * (dr - psi_hi) / a_half[n]
    else:
        ghost_lo = w[0]
        ghost_hi = w[n - 1]

    if has_g:
        for i in range(n):
            env[0] = x[i]
            env[2] = w[i]
            gbuf[i] = eval_program(g_code, g_args, g_consts, env, stack)

    for i in range(n):
        wm = ghost_lo if i == 0 else w[i - 1]
        wp = ghost_hi if i == n - 1 else w[i + 1]
        wi = w[i]
        diff = (a_half[i + 1] * (wp - wi) - a_half[i] * (wi - wm)) * inv_h2
        wx = (wp - wm) * inv_2h
        if upwind:
            if b_arr[i] > 0.0:
                adv = b_arr[i] * (wi - wm) * inv_h
            else:
                adv = b_arr[i] * (wp - wi) * inv_h
        else:
            adv = b_arr[i] * wx
        acc = diff - adv - c_arr[i] * wi
        env[0] = x[i]
        env[2] = wi
        env[3] = wx
        if has_h:
            acc -= eval_program(h_code, h_args, h_consts, env, stack)
        if has_f:
            acc += f_scalar if f_uniform else eval_program(
                f_code, f_args, f_consts, env, stack)
        if has_g:
            if i == 0:
                gx = (-3.0 * gbuf[0] + 4.0 * gbuf[1] - gbuf[2]) * inv_2h
            elif i == n - 1:
                gx = (3.0 * gbuf[n - 1] - 4.0 * gbuf[n - 2] + gbuf[n - 3]) * inv_2h
            else:
                gx = (gbuf[i + 1] - gbuf[i - 1]) * inv_2h
            acc -= m_arr[i] * gx
        out[i] = acc

    if dirichlet:
        out[0] = 0.0
        out[n - 1] = 0.0


@njit(cache=True)
def rhs_once(out, w, t, x, h, dirichlet, upwind,
             a_half, b_arr, c_arr, m_arr,
             has_h, h_code, h_args, h_consts,
             has_g, g_code, g_args, g_consts,
             has_f, f_uniform, f_code, f_args, f_consts,
             robin, psi_code, psi_args, psi_consts, dl, dr):
    """Single right-hand-side evaluation (entry point for the library)."""
    gbuf = np.empty(w.shape[0])
    stack = np.empty(64)
    env = np.zeros(6)
    _rhs(out, w, t, x, h, dirichlet, upwind, a_half, b_arr, c_arr, m_arr,
         has_h, h_code, h_args, h_consts, has_g, g_code, g_args, g_consts,
         has_f, f_uniform, f_code, f_args, f_consts, robin,
         psi_code, psi_args, psi_consts, dl, dr, gbuf, stack, env)


@njit(cache=True)
def rk4_interval(w, t0, dt, m, x, x_half, h, dirichlet, upwind,
                 a_half, b_arr, c_arr, m_arr,
                 tdep_a, a_code, a_args, a_consts,
                 tdep_b, b_code, b_args, b_consts,
                 tdep_c, c_code, c_args, c_consts,
                 tdep_m, m_code, m_args, m_consts,
                 has_h, h_code, h_args, h_consts,
                 has_g, g_code, g_args, g_consts,
                 has_f, f_uniform, f_code, f_args, f_consts,
                 psi_code, psi_args, psi_consts,
                 dl_stage, dr_stage, bval_lo, bval_hi):
    """Advance ``w`` in place through ``m`` RK4 steps of size ``dt``.

    Stage-time boundary data is pre-sampled: index 2*s is t0 + s*dt,
    index 2*s + 1 the midpoint.  Time-dependent coefficients (tdep_* set)
    are re-interpreted at each stage time; the rest arrive precomputed.
    """
    n = w.shape[0]
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    wtmp = np.empty(n)
    gbuf = np.empty(n)
    stack = np.empty(64)
    env = np.zeros(6)
    robin = not dirichlet
    sixth = dt / 6.0

    tdep_any = tdep_a or tdep_b or tdep_c or tdep_m

    for s in range(m):
        t = t0 + s * dt
        tmid = t + 0.5 * dt
        tend = t0 + (s + 1) * dt
        i0 = 2 * s
        i1 = 2 * s + 1
        i2 = 2 * s + 2

        for stage in range(4):
            if stage == 0:
                ts = t
                di = i0
                src = w
            elif stage == 1:
                for j in range(n):
                    wtmp[j] = w[j] + 0.5 * dt * k1[j]
                ts = tmid
                di = i1
                src = wtmp
            elif stage == 2:
                for j in range(n):
                    wtmp[j] = w[j] + 0.5 * dt * k2[j]
                ts = tmid
                di = i1
                src = wtmp
            else:
                for j in range(n):
                    wtmp[j] = w[j] + dt * k3[j]
                ts = tend
                di = i2
                src = wtmp

            if dirichlet:
                src[0] = bval_lo[di]
                src[n - 1] = bval_hi[di]
            if tdep_any:
                if tdep_a:
                    eval_field(a_code, a_args, a_consts, x_half, ts, a_half, stack)
                if tdep_b:
                    eval_field(b_code, b_args, b_consts, x, ts, b_arr, stack)
                if tdep_c:
                    eval_field(c_code, c_args, c_consts, x, ts, c_arr, stack)
                if tdep_m:
                    eval_field(m_code, m_args, m_consts, x, ts, m_arr, stack)

            dest = k1 if stage == 0 else k2 if stage == 1 else k3 if stage == 2 else k4
            _rhs(dest, src, ts, x, h, dirichlet, upwind,
                 a_half, b_arr, c_arr, m_arr,
                 has_h, h_code, h_args, h_consts,
                 has_g, g_code, g_args, g_consts,
                 has_f, f_uniform, f_code, f_args, f_consts,
                 robin, psi_code, psi_args, psi_consts,
                 dl_stage[di], dr_stage[di], gbuf, stack, env)

        for j in range(n):
            w[j] = w[j] + sixth * (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j])
        if dirichlet:
            w[0] = bval_lo[i2]
            w[n - 1] = bval_hi[i2]
