"""Compiled right-hand side and adaptive DOP853 stepper for the profile system.

State layout: ``y = (f, f', g, h, h', B, P)``.  ``b_mode`` 0 keeps B
identically zero; 1 integrates ``B' = B cot + 2 B f / g`` and stops when
``|g|`` drops below ``g_guard``.
"""
import numpy as np
from numba import njit
from scipy.integrate import DOP853

_A = np.ascontiguousarray(DOP853.A, dtype=np.float64)
_B = np.ascontiguousarray(DOP853.B, dtype=np.float64)
_C = np.ascontiguousarray(DOP853.C, dtype=np.float64)
_E3 = np.ascontiguousarray(DOP853.E3, dtype=np.float64)
_E5 = np.ascontiguousarray(DOP853.E5, dtype=np.float64)
_N_STAGES = DOP853.n_stages

OK = 0
BLOWUP = 1
STEP_COLLAPSE = 2
G_GUARD = 3
MAX_STEPS = 4

STATUS_NAMES = {OK: "ok", BLOWUP: "blowup", STEP_COLLAPSE: "step_collapse",
                G_GUARD: "g_guard", MAX_STEPS: "max_steps"}


@njit(cache=True)
def rhs(phi, y, b_mode, out):
    f, fp, g, h, hp, B, P = y[0], y[1], y[2], y[3], y[4], y[5], y[6]
    s = np.sin(phi)
    cot = np.cos(phi) / s
    csc2 = 1.0 / (s * s)
    gp = -f - g * cot
    out[0] = fp
    out[1] = -fp * cot + fp * g - (f * f + g * g + h * h) + B * B - 2.0 * P
    out[2] = gp
    out[3] = hp
    out[4] = -hp * cot + h * csc2 + g * (hp + h * cot)
    if b_mode == 1 and B != 0.0:
        out[5] = B * cot + 2.0 * B * f / g
    else:
        out[5] = 0.0
    out[6] = fp - gp * g + h * h * cot - B * B * cot


@njit(cache=True)
def _rms(v, scale):
    acc = 0.0
    for i in range(v.size):
        r = v[i] / scale[i]
        acc += r * r
    return np.sqrt(acc / v.size)


@njit(cache=True)
def _guards(y, blowup, b_mode, g_guard):
    for i in range(y.size):
        if not np.isfinite(y[i]) or abs(y[i]) > blowup:
            return BLOWUP
    if b_mode == 1 and y[5] != 0.0 and abs(y[2]) < g_guard:
        return G_GUARD
    return OK


@njit(cache=True)
def integrate(y0, phi0, phi1, rtol, atol, max_step, blowup, b_mode, g_guard, max_steps):
    """Integrate from ``phi0`` to ``phi1``; returns ``(status, phi, y, n_steps)``."""
    n = y0.size
    y = y0.copy()
    phi = phi0
    direction = 1.0 if phi1 >= phi0 else -1.0
    K = np.zeros((_N_STAGES + 1, n))
    f0 = np.empty(n)
    tmp = np.empty(n)
    rhs(phi, y, b_mode, f0)

    status = _guards(y, blowup, b_mode, g_guard)
    if status != OK:
        return status, phi, y, 0

    # initial step (Hairer-Wanner heuristic)
    scale = atol + np.abs(y) * rtol
    d0 = _rms(y, scale)
    d1 = _rms(f0, scale)
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, abs(phi1 - phi0), max_step)
    for i in range(n):
        tmp[i] = y[i] + direction * h0 * f0[i]
    f1 = np.empty(n)
    rhs(phi + direction * h0, tmp, b_mode, f1)
    for i in range(n):
        tmp[i] = f1[i] - f0[i]
    d2 = _rms(tmp, scale) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1.0 / 8.0)
    h_abs = min(100.0 * h0, h1, max_step)

    steps = 0
    ynew = np.empty(n)
    err5 = np.empty(n)
    err3 = np.empty(n)
    stage = np.empty(n)
    while direction * (phi1 - phi) > 0.0:
        if steps >= max_steps:
            return MAX_STEPS, phi, y, steps
        min_step = 10.0 * np.abs(np.nextafter(phi, direction * np.inf) - phi)
        if h_abs < min_step:
            return STEP_COLLAPSE, phi, y, steps
        accepted = False
        while not accepted:
            if h_abs < min_step:
                return STEP_COLLAPSE, phi, y, steps
            h = h_abs * direction
            phi_new = phi + h
            if direction * (phi_new - phi1) > 0.0:
                phi_new = phi1
            h = phi_new - phi
            h_abs = abs(h)

            for i in range(n):
                K[0, i] = f0[i]
            for s in range(1, _N_STAGES):
                for i in range(n):
                    acc = 0.0
                    for j in range(s):
                        acc += _A[s, j] * K[j, i]
                    stage[i] = y[i] + h * acc
                sk = K[s]
                rhs(phi + _C[s] * h, stage, b_mode, sk)
            for i in range(n):
                acc = 0.0
                for j in range(_N_STAGES):
                    acc += _B[j] * K[j, i]
                ynew[i] = y[i] + h * acc
            fk = K[_N_STAGES]
            rhs(phi_new, ynew, b_mode, fk)

            for i in range(n):
                scale[i] = atol + max(abs(y[i]), abs(ynew[i])) * rtol
                a5 = 0.0
                a3 = 0.0
                for j in range(_N_STAGES + 1):
                    a5 += K[j, i] * _E5[j]
                    a3 += K[j, i] * _E3[j]
                err5[i] = a5 / scale[i]
                err3[i] = a3 / scale[i]
            e5 = 0.0
            e3 = 0.0
            for i in range(n):
                e5 += err5[i] * err5[i]
                e3 += err3[i] * err3[i]
            if e5 == 0.0 and e3 == 0.0:
                err = 0.0
            else:
                err = h_abs * e5 / np.sqrt((e5 + 0.01 * e3) * n)
            if not np.isfinite(err):
                err = 1e10

            if err <= 1.0:
                accepted = True
                if err == 0.0:
                    factor = 10.0
                else:
                    factor = min(10.0, 0.9 * err ** (-1.0 / 8.0))
                phi = phi_new
                for i in range(n):
                    y[i] = ynew[i]
                    f0[i] = fk[i]
                h_abs = min(h_abs * factor, max_step)
            else:
                h_abs *= max(0.2, 0.9 * err ** (-1.0 / 8.0))
        steps += 1
        status = _guards(y, blowup, b_mode, g_guard)
        if status != OK:
            return status, phi, y, steps
    return OK, phi, y, steps
