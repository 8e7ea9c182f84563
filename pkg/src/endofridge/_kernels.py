"""Batched limit-cycle and heat-current evaluation over many cold frequencies.

Both kernels compute, for each ``omega_c`` in an input array, the columns
``n1, n2, n3, nc, Q_h, Q_c`` of the maser limit cycle with every other
parameter held fixed. ``_currents_loop`` is numba-compiled (scalar loop with
a pivoted 3x3 elimination); ``_currents_numpy`` is the vectorized fallback
built on a stacked ``np.linalg.solve``. :func:`maser_currents` dispatches on
:data:`endofridge._accel.USE_NUMBA`.
"""

from __future__ import annotations

import math

import numpy as np

from . import _accel

N_COLUMNS = 6
COL_N1, COL_N2, COL_N3, COL_NC, COL_QH, COL_QC = range(N_COLUMNS)


@_accel.njit
def _rate_pair(gamma, dim, temperature, omega):
    x = omega / temperature
    decay = gamma * omega**dim / -math.expm1(-x)
    return decay, math.exp(-x) * decay


@_accel.njit
def _solve3(a, b):
    # Gaussian elimination with partial pivoting; a and b are overwritten.
    for col in range(3):
        piv = col
        for r in range(col + 1, 3):
            if abs(a[r, col]) > abs(a[piv, col]):
                piv = r
        if piv != col:
            for k in range(3):
                tmp = a[col, k]
                a[col, k] = a[piv, k]
                a[piv, k] = tmp
            tmp = b[col]
            b[col] = b[piv]
            b[piv] = tmp
        for r in range(col + 1, 3):
            f = a[r, col] / a[col, col]
            for k in range(col, 3):
                a[r, k] -= f * a[col, k]
            b[r] -= f * b[col]
    x = np.empty(3)
    for r in range(2, -1, -1):
        s = b[r]
        for k in range(r + 1, 3):
            s -= a[r, k] * x[k]
        x[r] = s / a[r, r]
    return x


@_accel.njit
def _currents_loop(omega_c, omega_h, lam, t_hot, t_cold, g_hot, g_cold, d_hot, d_cold):
    n = omega_c.shape[0]
    out = np.empty((n, 6))
    a = np.empty((3, 3))
    b = np.empty(3)
    for i in range(n):
        wc = omega_c[i]
        hdp, hep = _rate_pair(g_hot, d_hot, t_hot, omega_h + lam)
        hdm, hem = _rate_pair(g_hot, d_hot, t_hot, omega_h - lam)
        cdp, cep = _rate_pair(g_cold, d_cold, t_cold, wc + lam)
        cdm, cem = _rate_pair(g_cold, d_cold, t_cold, wc - lam)
        dp = hdp + cdp
        dm = hdm + cdm
        ep = hep + cep
        em = hem + cem
        gp = (dp + dm) / 4
        gm = (dp - dm) / 4
        gpn = (ep + em) / 4
        gmn = (ep - em) / 4
        aa = gm * gm / gp
        bb = gm * gmn / gp
        a[0, 0] = -2 * gpn + 2 * bb
        a[0, 1] = gp - aa
        a[0, 2] = gp - aa
        a[1, 0] = gpn - bb
        a[1, 1] = -gp + aa / 2
        a[1, 2] = aa / 2
        a[2, 0] = 1.0
        a[2, 1] = 1.0
        a[2, 2] = 1.0
        b[0] = 0.0
        b[1] = 0.0
        b[2] = 1.0
        pops = _solve3(a, b)
        n1 = pops[0]
        s = pops[1] + pops[2]
        nc = 2 * gmn / gp * n1 - gm / gp * s
        jh_p = hep / 2 * n1 - hdp / 4 * (s + nc)
        jh_m = hem / 2 * n1 - hdm / 4 * (s - nc)
        jc_p = cep / 2 * n1 - cdp / 4 * (s + nc)
        jc_m = cem / 2 * n1 - cdm / 4 * (s - nc)
        out[i, 0] = n1
        out[i, 1] = pops[1]
        out[i, 2] = pops[2]
        out[i, 3] = nc
        out[i, 4] = (omega_h + lam) * jh_p + (omega_h - lam) * jh_m
        out[i, 5] = (wc + lam) * jc_p + (wc - lam) * jc_m
    return out


def _rate_pairs_np(gamma, dim, temperature, omega):
    x = omega / temperature
    decay = gamma * np.power(omega, dim) / -np.expm1(-x)
    return decay, np.exp(-x) * decay


def _currents_numpy(omega_c, omega_h, lam, t_hot, t_cold, g_hot, g_cold, d_hot, d_cold):
    wc = np.asarray(omega_c, dtype=float)
    n = wc.shape[0]
    hdp, hep = _rate_pairs_np(g_hot, d_hot, t_hot, np.full(n, omega_h + lam))
    hdm, hem = _rate_pairs_np(g_hot, d_hot, t_hot, np.full(n, omega_h - lam))
    cdp, cep = _rate_pairs_np(g_cold, d_cold, t_cold, wc + lam)
    cdm, cem = _rate_pairs_np(g_cold, d_cold, t_cold, wc - lam)
    dp, dm = hdp + cdp, hdm + cdm
    ep, em = hep + cep, hem + cem
    gp, gm = (dp + dm) / 4, (dp - dm) / 4
    gpn, gmn = (ep + em) / 4, (ep - em) / 4
    aa = gm * gm / gp
    bb = gm * gmn / gp

    a = np.empty((n, 3, 3))
    a[:, 0, 0] = -2 * gpn + 2 * bb
    a[:, 0, 1] = a[:, 0, 2] = gp - aa
    a[:, 1, 0] = gpn - bb
    a[:, 1, 1] = -gp + aa / 2
    a[:, 1, 2] = aa / 2
    a[:, 2, :] = 1.0
    rhs = np.zeros((n, 3, 1))
    rhs[:, 2, 0] = 1.0
    pops = np.linalg.solve(a, rhs)[:, :, 0]

    n1 = pops[:, 0]
    s = pops[:, 1] + pops[:, 2]
    nc = 2 * gmn / gp * n1 - gm / gp * s
    out = np.empty((n, N_COLUMNS))
    out[:, 0:3] = pops
    out[:, 3] = nc
    out[:, 4] = (omega_h + lam) * (hep / 2 * n1 - hdp / 4 * (s + nc)) + (omega_h - lam) * (
        hem / 2 * n1 - hdm / 4 * (s - nc)
    )
    out[:, 5] = (wc + lam) * (cep / 2 * n1 - cdp / 4 * (s + nc)) + (wc - lam) * (
        cem / 2 * n1 - cdm / 4 * (s - nc)
    )
    return out


def _args(config):
    return (
        float(config.omega_h),
        float(config.lam),
        float(config.hot.temperature),
        float(config.cold.temperature),
        float(config.hot.gamma),
        float(config.cold.gamma),
        float(config.hot.dimension),
        float(config.cold.dimension),
    )


def maser_currents_numba(omega_c, config) -> np.ndarray:
    if not _accel.NUMBA_AVAILABLE:
        raise RuntimeError("numba is not installed")
    return _currents_loop(np.ascontiguousarray(np.atleast_1d(omega_c), dtype=float), *_args(config))


def maser_currents_numpy(omega_c, config) -> np.ndarray:
    return _currents_numpy(np.atleast_1d(np.asarray(omega_c, dtype=float)), *_args(config))


def maser_currents(omega_c, config) -> np.ndarray:
    """Limit-cycle columns for each entry of ``omega_c``; other parameters from ``config``.

    Only ``omega_c`` varies, so ``config.omega_c`` itself is ignored. The
    caller is responsible for keeping every entry inside ``(lam, omega_h)``.
    """
    omega_c = np.atleast_1d(np.asarray(omega_c, dtype=float))
    if _accel.USE_NUMBA:
        return maser_currents_numba(omega_c, config)
    return maser_currents_numpy(omega_c, config)
