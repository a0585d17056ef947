"""Regularized empirical-risk minimization for the differentiable and bent losses.

With c = 1 the bent part vanishes: the coefficient copy is forced equal to
the coefficients and the problem reduces to plain regularized minimization
(cyclic damped-Newton block updates for the smooth families; the exact dual
for the plain hinge).  With c > 1 the objective splits as l_1 + l_2 and the
solver alternates the three block updates on the augmented Lagrangian:
beta_j blocks against l_1 + ridge + coupling, gamma_j blocks against the
bent term l_2 + coupling, then the scaled multiplier step
z_j <- z_j + rho (beta_j - gamma_j).  The nonsmooth block minimizations are
solved exactly through their box duals (see _cd_py.prox_hinge_cd).
"""

import numpy as np

from ..core import make_simplex
from ..errors import InvalidArgumentError
from . import _backend
from ._features import build_features
from .dualcd import fit_dual_cd
from .model import DecisionModel, SolverReport, objective

__all__ = ["fit_admm"]


def _margins(F, V, Wrows):
    return np.einsum("ij,ij->i", F @ V, Wrows)


def _smooth_parts(family, u):
    """(value, first, second derivative) arrays for the smooth families."""
    if family == "squared":
        pos = np.maximum(1.0 + u, 0.0)
        return pos**2, 2.0 * pos, np.where(pos > 0.0, 2.0, 0.0)
    if family == "exp":
        with np.errstate(over="ignore"):
            e = np.exp(u)
        return e, e, e
    raise InvalidArgumentError(f"family {family!r} has no smooth path")


def fit_admm(ds, loss, kernel=None, lam=1.0, rho=1.0, max_iter=5000, tol=1e-5,
             feature_tol=1e-12, feature_rank=None, inner_max_passes=400,
             inner_tol=None, backend=None):
    """Minimize (1/n) sum w_i l(<W_{a_i}, f(x_i)>) + lam J(f).

    Residual tolerances are scaled by sqrt(d (k-1)).  Non-convergence is not
    an error; the report carries converged=False and the model is returned
    anyway.
    """
    if lam <= 0.0:
        raise InvalidArgumentError(f"lambda must be positive, got {lam}")
    if not np.all(np.isfinite(ds.weights)):
        raise InvalidArgumentError("dataset weights are not finite")

    if loss.family in ("hinge", "bent-hinge") and loss.c == 1.0:
        # l_2 vanishes identically: plain hinge minimization, solved exactly
        # through the problem's own dual.
        model, report = fit_dual_cd(
            ds, 1.0, kernel=kernel, lam=lam, max_iter=max_iter,
            feature_tol=feature_tol, feature_rank=feature_rank, backend=backend)
        model = DecisionModel(
            form=model.form, coef=model.coef, simplex=model.simplex, loss=loss,
            lam=lam, intercepts=model.intercepts, kernel=model.kernel,
            train_X=model.train_X)
        report.notes = "hinge with c=1: solved via the exact dual"
        return model, report

    fs = build_features(ds.features, kernel, feature_tol, feature_rank)
    simplex = make_simplex(ds.k)
    Wrows = simplex.vertices[ds.treatments - 1]
    w = ds.weights.copy()
    n, d, km1 = ds.n, fs.d, ds.k - 1

    if loss.c == 1.0:
        V, iters, grad_norm, ok = _newton_cycles(
            loss.family, fs.F, Wrows, w, n, lam, max_iter, tol * np.sqrt(d * km1))
        model = _to_model(ds, fs, simplex, loss, lam, V)
        return model, SolverReport(
            objective=objective(ds, model), iterations=iters, converged=ok,
            primal_residual=0.0, dual_residual=grad_norm,
            notes="c=1: coefficient copy forced equal; plain regularized minimization")

    if loss.family != "bent-hinge":
        raise InvalidArgumentError(
            f"bent objective needs the bent-hinge family, got {loss.family!r}")
    V, iters, pres, dres, ok = _admm_bent(
        fs.F, Wrows, w, n, lam, loss.c, rho, max_iter, tol * np.sqrt(d * km1),
        inner_max_passes, inner_tol if inner_tol is not None else min(1e-10, tol**2),
        backend)
    model = _to_model(ds, fs, simplex, loss, lam, V)
    return model, SolverReport(
        objective=objective(ds, model), iterations=iters, converged=ok,
        primal_residual=pres, dual_residual=dres)


def _to_model(ds, fs, simplex, loss, lam, V):
    coef, intercepts = fs.to_model_coefs(V)
    if fs.form == "linear":
        return DecisionModel(form="linear", coef=coef, simplex=simplex, loss=loss, lam=lam)
    return DecisionModel(form="kernel", coef=coef, simplex=simplex, loss=loss, lam=lam,
                         intercepts=intercepts, kernel=fs.kernel,
                         train_X=np.array(ds.features))


def _newton_cycles(family, F, Wrows, w, n, lam, max_iter, grad_tol):
    """Cyclic damped-Newton block updates for the smooth objective."""
    d = F.shape[1]
    km1 = Wrows.shape[1]
    V = np.zeros((d, km1))
    u = np.zeros(F.shape[0])
    ridge = 2.0 * n * lam

    def scaled_obj(uvec, Vmat):
        val, _, _ = _smooth_parts(family, uvec)
        return float(w @ val) + n * lam * float(np.sum(Vmat**2))

    obj = scaled_obj(u, V)
    for cycle in range(1, max_iter + 1):
        for j in range(km1):
            _, d1, d2 = _smooth_parts(family, u)
            mj = Wrows[:, j]
            grad = F.T @ (w * d1 * mj) + ridge * V[:, j]
            H = (F * (w * d2 * mj * mj)[:, None]).T @ F
            H[np.diag_indices_from(H)] += ridge
            try:
                step = np.linalg.solve(H, grad)
            except np.linalg.LinAlgError:
                step = grad / (ridge + 1.0)
            t = 1.0
            col = V[:, j].copy()
            Fstep = F @ step
            for _ in range(40):
                u_try = u - t * (Fstep * mj)
                V[:, j] = col - t * step
                new = scaled_obj(u_try, V)
                if new <= obj + 1e-12:
                    u = u_try
                    obj = new
                    break
                t *= 0.5
            else:
                V[:, j] = col
        _, d1, _ = _smooth_parts(family, u)
        full_grad = F.T @ ((w * d1)[:, None] * Wrows) + ridge * V
        gnorm = float(np.linalg.norm(full_grad)) / n
        if gnorm < grad_tol:
            return V, cycle, gnorm, True
    return V, max_iter, gnorm, False


def _admm_bent(F, Wrows, w, n, lam, c, rho, max_iter, res_tol,
               inner_max_passes, inner_tol, backend):
    _, _, prox_hinge_cd = _backend.get_backend(backend)
    d = F.shape[1]
    km1 = Wrows.shape[1]
    B = np.zeros((d, km1))
    G = np.zeros((d, km1))
    Z = np.zeros((d, km1))
    # warm-start duals for the inner prox solves; row-major so theta[j] is
    # contiguous for the compiled core
    theta_b = np.zeros((km1, F.shape[0]))
    theta_g = np.zeros((km1, F.shape[0]))
    box_g = (c - 1.0) * w

    MB = F @ B
    MG = F @ G
    pres = dres = np.inf
    for it in range(1, max_iter + 1):
        uB = np.einsum("ij,ij->i", MB, Wrows)
        for j in range(km1):
            bvec = Wrows[:, j]
            offs = 1.0 + (uB - bvec * MB[:, j])
            kappa = 2.0 * n * lam + rho
            mu0 = (rho * G[:, j] - Z[:, j]) / kappa
            newcol = prox_hinge_cd(F, bvec, offs, w, float(kappa), mu0,
                                   theta_b[j], int(inner_max_passes), float(inner_tol))
            B[:, j] = newcol
            newMB = F @ newcol
            uB += bvec * (newMB - MB[:, j])
            MB[:, j] = newMB
        G_old = G.copy()
        uG = np.einsum("ij,ij->i", MG, Wrows)
        for j in range(km1):
            bvec = Wrows[:, j]
            offs = uG - bvec * MG[:, j]
            mu0 = B[:, j] + Z[:, j] / rho
            newcol = prox_hinge_cd(F, bvec, offs, box_g, float(rho), mu0,
                                   theta_g[j], int(inner_max_passes), float(inner_tol))
            G[:, j] = newcol
            newMG = F @ newcol
            uG += bvec * (newMG - MG[:, j])
            MG[:, j] = newMG
        Z += rho * (B - G)
        pres = float(np.linalg.norm(B - G))
        dres = float(rho * np.linalg.norm(G - G_old))
        if max(pres, dres) < res_tol:
            return B, it, pres, dres, True
        # residual balancing; bounded, and only while far from convergence,
        # otherwise a near-zero primal residual drives rho into the ground
        # and freezes the multipliers
        if max(pres, dres) > 10.0 * res_tol:
            if pres > 10.0 * dres and rho < 1e2:
                rho *= 2.0
            elif dres > 10.0 * pres and rho > 1e-1:
                rho *= 0.5
    return B, max_iter, pres, dres, False
