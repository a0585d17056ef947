"""Pure-Python fallback for the coordinate-descent compute kernels.

Mirrors _cd_fast.pyx update-for-update: same sweep order, same clipped
Newton steps, same termination bookkeeping.  Used when the compiled
extension is unavailable, and as the reference in backend-equivalence tests.
"""

import numpy as np

BACKEND_NAME = "python"


def dual_cd_run(F, Wv, labels, w, c, lam, alpha, gamma, max_passes, tol, kkt_tol):
    """Cyclic box-constrained coordinate ascent on the bent-hinge dual.

    F: (n, d) feature rows (constant column already appended).
    Wv: (k, k-1) simplex vertices; labels: (n,) 0-based treatment indices.
    w: (n,) box upper bounds (zero-weight rows stay fixed at 0).
    Maintains V[d, k-1] = sum_i s_i * outer(F_i, W_{a_i}) with
    s_i = alpha_i + (c-1) gamma_i; the margin of row i is
    u_i = -(F_i @ V @ W_{a_i}) / (2 n lam).

    Per outer pass: alpha sweep in ascending index order, then (if c > 1)
    gamma sweep in ascending order.  Terminates when both the largest
    single-coordinate dual improvement < tol and the largest projected
    gradient < kkt_tol.

    Returns (passes, max_improvement, kkt_violation, converged); alpha and
    gamma are updated in place.
    """
    F = np.ascontiguousarray(F, dtype=np.float64)
    n, d = F.shape
    denom = 2.0 * n * lam
    row_sq = np.einsum("ij,ij->i", F, F)
    cm1 = c - 1.0

    V = np.zeros((d, Wv.shape[1]))
    s = alpha + cm1 * gamma
    active = np.flatnonzero(s != 0.0)
    for i in active:
        V += s[i] * np.outer(F[i], Wv[labels[i]])

    passes = 0
    max_imp = np.inf
    kkt = np.inf
    converged = False
    for t in range(max_passes):
        passes = t + 1
        max_imp = 0.0
        kkt = 0.0
        for i in range(n):
            wi = w[i]
            if wi <= 0.0:
                continue
            Wa = Wv[labels[i]]
            u = -(F[i] @ V @ Wa) / denom
            g = 1.0 + u
            h = row_sq[i] / denom
            ai = alpha[i]
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
                viol = abs(g)
            if viol > kkt:
                kkt = viol
            delta = anew - ai
            if delta != 0.0:
                imp = g * delta - 0.5 * h * delta * delta
                if imp > max_imp:
                    max_imp = imp
                alpha[i] = anew
                V += delta * np.outer(F[i], Wa)
        if cm1 > 0.0:
            for i in range(n):
                wi = w[i]
                if wi <= 0.0:
                    continue
                Wa = Wv[labels[i]]
                u = -(F[i] @ V @ Wa) / denom
                g = cm1 * u
                h = cm1 * cm1 * row_sq[i] / denom
                gi = gamma[i]
                gnew = gi + g / h
                if gnew < 0.0:
                    gnew = 0.0
                elif gnew > wi:
                    gnew = wi
                if gi <= 0.0:
                    viol = g if g > 0.0 else 0.0
                elif gi >= wi:
                    viol = -g if g < 0.0 else 0.0
                else:
                    viol = abs(g)
                if viol > kkt:
                    kkt = viol
                delta = gnew - gi
                if delta != 0.0:
                    imp = g * delta - 0.5 * h * delta * delta
                    if imp > max_imp:
                        max_imp = imp
                    gamma[i] = gnew
                    V += (cm1 * delta) * np.outer(F[i], Wa)
        if max_imp < tol and kkt < kkt_tol:
            converged = True
            break
        if (t + 1) % 64 == 0:
            # rebuild V to shed incremental round-off
            V[:] = 0.0
            s = alpha + cm1 * gamma
            for i in np.flatnonzero(s != 0.0):
                V += s[i] * np.outer(F[i], Wv[labels[i]])
    return passes, max_imp, kkt, converged


def prox_hinge_cd(F, b, offs, box, kappa, mu0, theta, max_passes, tol):
    """Minimize sum_i box_i (offs_i + b_i F_i.beta)_+ + kappa/2 ||beta - mu0||^2.

    Solved in its box dual (0 <= theta_i <= box_i) by cyclic coordinate
    ascent; beta = mu0 - (1/kappa) sum_i theta_i b_i F_i is maintained
    incrementally and returned.  theta is updated in place so callers can
    warm-start consecutive solves.
    """
    F = np.ascontiguousarray(F, dtype=np.float64)
    n, d = F.shape
    beta = mu0 - (F.T @ (theta * b)) / kappa
    row_sq = np.einsum("ij,ij->i", F, F)
    for t in range(max_passes):
        max_imp = 0.0
        for i in range(n):
            ci = box[i]
            if ci <= 0.0:
                continue
            g = offs[i] + b[i] * (F[i] @ beta)
            h = b[i] * b[i] * row_sq[i] / kappa
            if h <= 0.0:
                continue
            ti = theta[i]
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
                theta[i] = tnew
                beta -= (delta * b[i] / kappa) * F[i]
        if max_imp < tol:
            break
    return beta
