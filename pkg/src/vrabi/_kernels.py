"""Compiled inner loops for the interaction-picture amplitude equations.

One chain is held as two contiguous float64 arrays yr, yi of shape
(3, n_max + 1) carrying the real and imaginary parts of the amplitudes:
row 0 is the |a> ladder, rows 1 and 2 the |b> and |c> ladders.  Complex
arithmetic is spelled out on the split parts because the explicit form
vectorizes about 3x better than complex128 here, and this loop is where
essentially all the run time goes.

With detunings d = omega - omega_0 and d' = omega + omega_0 per
transition, the equations are

    da_m/dt = -i g_ab [sqrt(m)   b_{m-1} e^{-i d_ab t}
                      + sqrt(m+1) b_{m+1} e^{-i d'_ab t}]
              -i g_ac [sqrt(m)   c_{m-1} e^{-i d_ac t}
                      + sqrt(m+1) c_{m+1} e^{-i d'_ac t}]
    db_m/dt = -i g_ab [sqrt(m+1) a_{m+1} e^{+i d_ab t}
                      + sqrt(m)   a_{m-1} e^{+i d'_ab t}]
    dc_m/dt = -i g_ac [sqrt(m+1) a_{m+1} e^{+i d_ac t}
                      + sqrt(m)   a_{m-1} e^{+i d'_ac t}]

Terms that would reach index -1 or n_max + 1 are dropped (hard
truncation); the drop removes both members of each Hermitian pairing, so
the truncated generator still conserves the chain norm exactly.

gab_sq and gac_sq are lookup tables holding g * sqrt(m) for m up to
n_max + 1.  Phases are evaluated by direct sin/cos at every stage time
(formed as t0 + i*h, never accumulated), so no phase error builds up
across steps.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def chain_rhs(t, yr, yi, outr, outi, gab_sq, gac_sq, d_ab, dp_ab, d_ac, dp_ac):
    width = yr.shape[1]
    c_ab = math.cos(d_ab * t)
    s_ab = math.sin(d_ab * t)
    c_abp = math.cos(dp_ab * t)
    s_abp = math.sin(dp_ab * t)
    c_ac = math.cos(d_ac * t)
    s_ac = math.sin(d_ac * t)
    c_acp = math.cos(dp_ac * t)
    s_acp = math.sin(dp_ac * t)
    for m in range(width):
        dar = 0.0
        dai = 0.0
        dbr = 0.0
        dbi = 0.0
        dcr = 0.0
        dci = 0.0
        if m > 0:
            gb = gab_sq[m]
            gc = gac_sq[m]
            # a-equation, lower neighbours: g b_{m-1} e^{-i d t}
            br = yr[1, m - 1]
            bi = yi[1, m - 1]
            dar += gb * (br * c_ab + bi * s_ab)
            dai += gb * (bi * c_ab - br * s_ab)
            cr = yr[2, m - 1]
            ci = yi[2, m - 1]
            dar += gc * (cr * c_ac + ci * s_ac)
            dai += gc * (ci * c_ac - cr * s_ac)
            # b,c-equations, lower neighbour: g a_{m-1} e^{+i d' t}
            ar = yr[0, m - 1]
            ai = yi[0, m - 1]
            dbr += gb * (ar * c_abp - ai * s_abp)
            dbi += gb * (ai * c_abp + ar * s_abp)
            dcr += gc * (ar * c_acp - ai * s_acp)
            dci += gc * (ai * c_acp + ar * s_acp)
        if m + 1 < width:
            gb = gab_sq[m + 1]
            gc = gac_sq[m + 1]
            # a-equation, upper neighbours: g b_{m+1} e^{-i d' t}
            br = yr[1, m + 1]
            bi = yi[1, m + 1]
            dar += gb * (br * c_abp + bi * s_abp)
            dai += gb * (bi * c_abp - br * s_abp)
            cr = yr[2, m + 1]
            ci = yi[2, m + 1]
            dar += gc * (cr * c_acp + ci * s_acp)
            dai += gc * (ci * c_acp - cr * s_acp)
            # b,c-equations, upper neighbour: g a_{m+1} e^{+i d t}
            ar = yr[0, m + 1]
            ai = yi[0, m + 1]
            dbr += gb * (ar * c_ab - ai * s_ab)
            dbi += gb * (ai * c_ab + ar * s_ab)
            dcr += gc * (ar * c_ac - ai * s_ac)
            dci += gc * (ai * c_ac + ar * s_ac)
        # overall factor -i: (x + iy) -> (y, -x)
        outr[0, m] = dai
        outi[0, m] = -dar
        outr[1, m] = dbi
        outi[1, m] = -dbr
        outr[2, m] = dci
        outi[2, m] = -dcr


@njit(cache=True)
def rk4_advance(yr, yi, t0, n_steps, h, gab_sq, gac_sq, d_ab, dp_ab, d_ac, dp_ac):
    """Advance (yr, yi) in place by n_steps classic RK4 steps of size h."""
    width = yr.shape[1]
    k1r = np.empty_like(yr)
    k1i = np.empty_like(yr)
    k2r = np.empty_like(yr)
    k2i = np.empty_like(yr)
    k3r = np.empty_like(yr)
    k3i = np.empty_like(yr)
    k4r = np.empty_like(yr)
    k4i = np.empty_like(yr)
    ytr = np.empty_like(yr)
    yti = np.empty_like(yr)
    for i in range(n_steps):
        t = t0 + i * h
        chain_rhs(t, yr, yi, k1r, k1i, gab_sq, gac_sq, d_ab, dp_ab, d_ac, dp_ac)
        for r in range(3):
            for m in range(width):
                ytr[r, m] = yr[r, m] + 0.5 * h * k1r[r, m]
                yti[r, m] = yi[r, m] + 0.5 * h * k1i[r, m]
        chain_rhs(t + 0.5 * h, ytr, yti, k2r, k2i, gab_sq, gac_sq, d_ab, dp_ab, d_ac, dp_ac)
        for r in range(3):
            for m in range(width):
                ytr[r, m] = yr[r, m] + 0.5 * h * k2r[r, m]
                yti[r, m] = yi[r, m] + 0.5 * h * k2i[r, m]
        chain_rhs(t + 0.5 * h, ytr, yti, k3r, k3i, gab_sq, gac_sq, d_ab, dp_ab, d_ac, dp_ac)
        for r in range(3):
            for m in range(width):
                ytr[r, m] = yr[r, m] + h * k3r[r, m]
                yti[r, m] = yi[r, m] + h * k3i[r, m]
        chain_rhs(t + h, ytr, yti, k4r, k4i, gab_sq, gac_sq, d_ab, dp_ab, d_ac, dp_ac)
        sixth = h / 6.0
        for r in range(3):
            for m in range(width):
                yr[r, m] = yr[r, m] + sixth * (
                    k1r[r, m] + 2.0 * k2r[r, m] + 2.0 * k3r[r, m] + k4r[r, m]
                )
                yi[r, m] = yi[r, m] + sixth * (
                    k1i[r, m] + 2.0 * k2i[r, m] + 2.0 * k3i[r, m] + k4i[r, m]
                )
