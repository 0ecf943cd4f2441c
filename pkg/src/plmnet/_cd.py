"""Cyclic coordinate-descent kernels (numba-compiled).

Both kernels minimize

    ||y - X b||^2 + lam2 ||b||^2 + sum_k lam1w[k] |b[k]|

with the unscaled residual sum of squares. The gram kernel carries
G2 = 2 X'X and c2 = 2 X'y and is preferred when p <= n; the naive kernel
carries X and the running residual and wins when p > n.

Convergence requires both a small per-sweep coordinate change,
max|delta| < tol * (1 + max|b|), and a stationarity certificate: active
coordinates satisfy |{-2x_k'r + lam1w[k] sgn(b_k) + 2 lam2 b_k}| <= tol and
inactive ones |2x_k'r| <= lam1w[k] + tol. The certificate is evaluated on a
freshly recomputed gradient (which also resyncs the incremental state, so
update drift cannot fake a pass).

Exactly duplicated columns with lam2 > 0 make plain cyclic descent crawl:
the coordinate updates chase each other along the nearly flat equal-sum
direction with contraction factor ~ G/(G + lam2) per step. Averaging each
duplicate group after every sweep projects that oscillation out (it never
increases the objective: the residual term is unchanged and both penalty
terms are Schur-convex in the group coordinates), after which the symmetric
subspace converges in a handful of sweeps and the group members are exactly
equal on exit.
"""

import numpy as np
from numba import njit

_F = np.float64


@njit(cache=True, nogil=True, fastmath=False)
def _soft(z, g):
    if z > g:
        return z - g
    if z < -g:
        return z + g
    return 0.0


@njit(cache=True, nogil=True, fastmath=False)
def _average_groups(beta, group_id, n_groups):
    """Set each duplicate group's coefficients to the group mean.

    Returns the largest absolute coefficient change made.
    """
    p = beta.shape[0]
    max_delta = 0.0
    for g in range(n_groups):
        total = 0.0
        count = 0
        for j in range(p):
            if group_id[j] == g:
                total += beta[j]
                count += 1
        if count < 2:
            continue
        mean = total / count
        for j in range(p):
            if group_id[j] == g:
                d = abs(beta[j] - mean)
                if d > max_delta:
                    max_delta = d
                beta[j] = mean
    return max_delta


@njit(cache=True, nogil=True, fastmath=False)
def _refresh_gram_state(g2, beta, s):
    p = beta.shape[0]
    for k in range(p):
        acc = 0.0
        for j in range(p):
            acc += g2[k, j] * beta[j]
        s[k] = acc


@njit(cache=True, nogil=True, fastmath=False)
def _kkt_gram(c2, lam1w, lam2, beta, s):
    """Max stationarity violation given a fresh s = G2 @ beta."""
    p = beta.shape[0]
    worst = 0.0
    for k in range(p):
        a = s[k] - c2[k] + 2.0 * lam2 * beta[k]
        if beta[k] > 0.0:
            v = abs(a + lam1w[k])
        elif beta[k] < 0.0:
            v = abs(a - lam1w[k])
        else:
            v = abs(a) - lam1w[k]
            if v < 0.0:
                v = 0.0
        if v > worst:
            worst = v
    return worst


@njit(cache=True, nogil=True, fastmath=False)
def cd_gram(g2, c2, yty, lam1w, lam2, beta, group_id, n_groups, tol, max_sweeps, obj_trace, record_obj):
    """Coordinate descent on the gram formulation. Mutates `beta` in place.

    Returns (sweeps_used, converged, kkt_violation).
    """
    p = beta.shape[0]
    s = np.zeros(p, dtype=_F)  # running G2 @ beta
    _refresh_gram_state(g2, beta, s)
    if record_obj:
        rss = yty
        pen = 0.0
        for j in range(p):
            rss += beta[j] * (0.5 * s[j] - c2[j])
            pen += lam2 * beta[j] * beta[j] + lam1w[j] * abs(beta[j])
        obj_trace[0] = rss + pen

    sweeps = 0
    converged = False
    kkt = np.inf
    for it in range(max_sweeps):
        sweeps = it + 1
        max_change = 0.0
        max_abs = 0.0
        for k in range(p):
            bk = beta[k]
            den = g2[k, k] + 2.0 * lam2
            if den <= 0.0:
                bnew = 0.0
            else:
                z = c2[k] - s[k] + g2[k, k] * bk
                bnew = _soft(z, lam1w[k]) / den
            if bnew != bk:
                d = bnew - bk
                for j in range(p):
                    s[j] += g2[j, k] * d
                beta[k] = bnew
                if abs(d) > max_change:
                    max_change = abs(d)
            if abs(beta[k]) > max_abs:
                max_abs = abs(beta[k])
        if n_groups > 0 and lam2 > 0.0:
            avg_change = _average_groups(beta, group_id, n_groups)
            if avg_change > 0.0:
                if avg_change > max_change:
                    max_change = avg_change
                _refresh_gram_state(g2, beta, s)
        if record_obj:
            rss = yty
            pen = 0.0
            for j in range(p):
                rss += beta[j] * (0.5 * s[j] - c2[j])
                pen += lam2 * beta[j] * beta[j] + lam1w[j] * abs(beta[j])
            obj_trace[it + 1] = rss + pen
        if max_change < tol * (1.0 + max_abs):
            _refresh_gram_state(g2, beta, s)
            kkt = _kkt_gram(c2, lam1w, lam2, beta, s)
            if kkt <= tol:
                converged = True
                break
    if not converged:
        _refresh_gram_state(g2, beta, s)
        kkt = _kkt_gram(c2, lam1w, lam2, beta, s)
        if kkt <= tol:
            converged = True
    return sweeps, converged, kkt


@njit(cache=True, nogil=True, fastmath=False)
def _refresh_residual(x, y, beta, r):
    n, p = x.shape
    for i in range(n):
        r[i] = y[i]
    for j in range(p):
        if beta[j] != 0.0:
            bj = beta[j]
            for i in range(n):
                r[i] -= x[i, j] * bj


@njit(cache=True, nogil=True, fastmath=False)
def _kkt_naive(x, lam1w, lam2, beta, r):
    """Max stationarity violation given a fresh residual r = y - X beta."""
    n, p = x.shape
    worst = 0.0
    for k in range(p):
        dot = 0.0
        for i in range(n):
            dot += x[i, k] * r[i]
        a = -2.0 * dot + 2.0 * lam2 * beta[k]
        if beta[k] > 0.0:
            v = abs(a + lam1w[k])
        elif beta[k] < 0.0:
            v = abs(a - lam1w[k])
        else:
            v = abs(a) - lam1w[k]
            if v < 0.0:
                v = 0.0
        if v > worst:
            worst = v
    return worst


@njit(cache=True, nogil=True, fastmath=False)
def cd_naive(x, y, lam1w, lam2, beta, group_id, n_groups, tol, max_sweeps, obj_trace, record_obj):
    """Residual-carrying coordinate descent (preferred for p > n).

    Mutates `beta`; returns (sweeps_used, converged, kkt_violation).
    """
    n, p = x.shape
    col2 = np.empty(p, dtype=_F)
    for j in range(p):
        ssq = 0.0
        for i in range(n):
            ssq += x[i, j] * x[i, j]
        col2[j] = 2.0 * ssq
    r = np.empty(n, dtype=_F)
    _refresh_residual(x, y, beta, r)
    if record_obj:
        obj = 0.0
        for i in range(n):
            obj += r[i] * r[i]
        for j in range(p):
            obj += lam2 * beta[j] * beta[j] + lam1w[j] * abs(beta[j])
        obj_trace[0] = obj

    sweeps = 0
    converged = False
    kkt = np.inf
    for it in range(max_sweeps):
        sweeps = it + 1
        max_change = 0.0
        max_abs = 0.0
        for k in range(p):
            bk = beta[k]
            den = col2[k] + 2.0 * lam2
            if den <= 0.0:
                bnew = 0.0
            else:
                dot = 0.0
                for i in range(n):
                    dot += x[i, k] * r[i]
                z = 2.0 * dot + col2[k] * bk
                bnew = _soft(z, lam1w[k]) / den
            if bnew != bk:
                d = bnew - bk
                for i in range(n):
                    r[i] -= x[i, k] * d
                beta[k] = bnew
                if abs(d) > max_change:
                    max_change = abs(d)
            if abs(beta[k]) > max_abs:
                max_abs = abs(beta[k])
        if n_groups > 0 and lam2 > 0.0:
            avg_change = _average_groups(beta, group_id, n_groups)
            if avg_change > 0.0:
                if avg_change > max_change:
                    max_change = avg_change
                _refresh_residual(x, y, beta, r)
        if record_obj:
            obj = 0.0
            for i in range(n):
                obj += r[i] * r[i]
            for j in range(p):
                obj += lam2 * beta[j] * beta[j] + lam1w[j] * abs(beta[j])
            obj_trace[it + 1] = obj
        if max_change < tol * (1.0 + max_abs):
            _refresh_residual(x, y, beta, r)
            kkt = _kkt_naive(x, lam1w, lam2, beta, r)
            if kkt <= tol:
                converged = True
                break
    if not converged:
        _refresh_residual(x, y, beta, r)
        kkt = _kkt_naive(x, lam1w, lam2, beta, r)
        if kkt <= tol:
            converged = True
    return sweeps, converged, kkt
