# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled coordinate-descent kernels.

Same update order and arithmetic as _cd_py.py; that module documents the
algorithms.  Keep the two in lockstep when editing.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "cython"


def dual_cd_run(F, Wv, labels, w, double c, double lam,
                alpha, gamma, int max_passes, double tol, double kkt_tol):
    cdef double[:, ::1] Fv = np.ascontiguousarray(F, dtype=np.float64)
    cdef double[:, ::1] Wm = np.ascontiguousarray(Wv, dtype=np.float64)
    cdef long[::1] lab = np.ascontiguousarray(labels, dtype=np.int64)
    cdef double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef double[::1] av = alpha
    cdef double[::1] gv = gamma

    cdef Py_ssize_t n = Fv.shape[0]
    cdef Py_ssize_t d = Fv.shape[1]
    cdef Py_ssize_t km1 = Wm.shape[1]
    cdef double denom = 2.0 * n * lam
    cdef double cm1 = c - 1.0

    cdef cnp.ndarray[cnp.float64_t, ndim=1] row_sq_arr = np.einsum(
        "ij,ij->i", np.asarray(Fv), np.asarray(Fv))
    cdef double[::1] row_sq = row_sq_arr
    cdef cnp.ndarray[cnp.float64_t, ndim=2] V_arr = np.zeros((d, km1))
    cdef double[:, ::1] V = V_arr

    cdef Py_ssize_t i, j, r, t
    cdef double s, u, g, h, ai, anew, viol, delta, imp, wi, scale
    cdef double max_imp = np.inf
    cdef double kkt = np.inf
    cdef int passes = 0
    cdef bint converged = False

    for i in range(n):
        s = av[i] + cm1 * gv[i]
        if s != 0.0:
            for r in range(d):
                for j in range(km1):
                    V[r, j] += s * Fv[i, r] * Wm[lab[i], j]

    for t in range(max_passes):
        passes = t + 1
        max_imp = 0.0
        kkt = 0.0
        for i in range(n):
            wi = wv[i]
            if wi <= 0.0:
                continue
            u = 0.0
            for j in range(km1):
                s = 0.0
                for r in range(d):
                    s += Fv[i, r] * V[r, j]
                u += s * Wm[lab[i], j]
            u = -u / denom
            g = 1.0 + u
            h = row_sq[i] / denom
            ai = av[i]
            anew = ai + g / h
            if anew < 0.0:
                anew = 0.0
            elif anew > wi:
                anew = wi
            if ai <= 0.0:
                viol = g if g > 0.0 else 0.0
            elif ai >= wi:
                viol = -g if g < 0.0 else 0.0
            else:
                viol = g if g > 0.0 else -g
            if viol > kkt:
                kkt = viol
            delta = anew - ai
            if delta != 0.0:
                imp = g * delta - 0.5 * h * delta * delta
                if imp > max_imp:
                    max_imp = imp
                av[i] = anew
                for r in range(d):
                    for j in range(km1):
                        V[r, j] += delta * Fv[i, r] * Wm[lab[i], j]
        if cm1 > 0.0:
            for i in range(n):
                wi = wv[i]
                if wi <= 0.0:
                    continue
                u = 0.0
                for j in range(km1):
                    s = 0.0
                    for r in range(d):
                        s += Fv[i, r] * V[r, j]
                    u += s * Wm[lab[i], j]
                u = -u / denom
                g = cm1 * u
                h = cm1 * cm1 * row_sq[i] / denom
                ai = gv[i]
                anew = ai + g / h
                if anew < 0.0:
                    anew = 0.0
                elif anew > wi:
                    anew = wi
                if ai <= 0.0:
                    viol = g if g > 0.0 else 0.0
                elif ai >= wi:
                    viol = -g if g < 0.0 else 0.0
                else:
                    viol = g if g > 0.0 else -g
                if viol > kkt:
                    kkt = viol
                delta = anew - ai
                if delta != 0.0:
                    imp = g * delta - 0.5 * h * delta * delta
                    if imp > max_imp:
                        max_imp = imp
                    gv[i] = anew
                    scale = cm1 * delta
                    for r in range(d):
                        for j in range(km1):
                            V[r, j] += scale * Fv[i, r] * Wm[lab[i], j]
        if max_imp < tol and kkt < kkt_tol:
            converged = True
            break
        if (t + 1) % 64 == 0:
            for r in range(d):
                for j in range(km1):
                    V[r, j] = 0.0
            for i in range(n):
                s = av[i] + cm1 * gv[i]
                if s != 0.0:
                    for r in range(d):
                        for j in range(km1):
                            V[r, j] += s * Fv[i, r] * Wm[lab[i], j]
    return passes, max_imp, kkt, converged


def prox_hinge_cd(F, b, offs, box, double kappa, mu0, theta,
                  int max_passes, double tol):
    cdef double[:, ::1] Fv = np.ascontiguousarray(F, dtype=np.float64)
    cdef double[::1] bv = np.ascontiguousarray(b, dtype=np.float64)
    cdef double[::1] ov = np.ascontiguousarray(offs, dtype=np.float64)
    cdef double[::1] boxv = np.ascontiguousarray(box, dtype=np.float64)
    cdef double[::1] tv = theta

    cdef Py_ssize_t n = Fv.shape[0]
    cdef Py_ssize_t d = Fv.shape[1]

    cdef cnp.ndarray[cnp.float64_t, ndim=1] beta_arr = (
        np.asarray(mu0, dtype=np.float64)
        - np.asarray(Fv).T @ (np.asarray(theta) * np.asarray(b)) / kappa)
    cdef double[::1] beta = beta_arr
    cdef cnp.ndarray[cnp.float64_t, ndim=1] row_sq_arr = np.einsum(
        "ij,ij->i", np.asarray(Fv), np.asarray(Fv))
    cdef double[::1] row_sq = row_sq_arr

    cdef Py_ssize_t i, r, t
    cdef double g, h, ti, tnew, delta, imp, ci, max_imp, step

    for t in range(max_passes):
        max_imp = 0.0
        for i in range(n):
            ci = boxv[i]
            if ci <= 0.0:
                continue
            g = 0.0
            for r in range(d):
                g += Fv[i, r] * beta[r]
            g = ov[i] + bv[i] * g
            h = bv[i] * bv[i] * row_sq[i] / kappa
            if h <= 0.0:
                continue
            ti = tv[i]
            tnew = ti + g / h
            if tnew < 0.0:
                tnew = 0.0
            elif tnew > ci:
                tnew = ci
            delta = tnew - ti
            if delta != 0.0:
                imp = g * delta - 0.5 * h * delta * delta
                if imp > max_imp:
                    max_imp = imp
                tv[i] = tnew
                step = delta * bv[i] / kappa
                for r in range(d):
                    beta[r] -= step * Fv[i, r]
        if max_imp < tol:
            break
    return beta_arr
