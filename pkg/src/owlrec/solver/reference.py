"""Brute-force reference solver used only as a test oracle.

Long-run projected subgradient descent with diminishing Pegasos-style steps
from several starts, tracking the best objective seen.  Deliberately
independent of the production solvers: no Newton systems, no duals, no
shared code paths beyond the objective definition.
"""

import numpy as np

from ..core import make_simplex
from ..errors import RefusedError
from ..loss import loss_value
from .model import DecisionModel, objective

__all__ = ["fit_reference"]


def _subgrad_margins(loss, u):
    """A valid subgradient of the loss at each margin (right derivative)."""
    fam = loss.family
    if fam == "squared":
        return 2.0 * np.maximum(1.0 + u, 0.0)
    if fam == "exp":
        return np.exp(u)
    if fam == "hinge":
        return (u >= -1.0).astype(float)
    if fam == "bent-hinge":
        g = (u >= -1.0).astype(float)
        g[u >= 0.0] = loss.c
        return g
    raise AssertionError(fam)


def fit_reference(ds, loss, lam, n_starts=5, n_iter=40000, seed=0):
    """Minimize the regularized objective on a tiny linear instance.

    Refuses anything beyond n <= 30, p <= 3: this path trades speed for
    independence and is not meant for real fits.
    """
    if ds.n > 30 or ds.p > 3:
        raise RefusedError(
            f"reference oracle limited to n<=30, p<=3; got n={ds.n}, p={ds.p}")
    simplex = make_simplex(ds.k)
    Wrows = simplex.vertices[ds.treatments - 1]
    F = np.hstack([ds.features, np.ones((ds.n, 1))])
    w = ds.weights
    n, d, km1 = ds.n, F.shape[1], ds.k - 1
    rng = np.random.default_rng(seed)

    def obj(B):
        u = np.einsum("ij,ij->i", F @ B, Wrows)
        return float(w @ loss_value(loss, u)) / n + lam * float(np.sum(B**2))

    best_B = None
    best_val = np.inf
    sigma = 2.0 * lam
    for start in range(n_starts):
        B = np.zeros((d, km1)) if start == 0 else rng.normal(scale=0.5, size=(d, km1))
        cur_best = obj(B)
        cur_B = B.copy()
        for t in range(1, n_iter + 1):
            u = np.einsum("ij,ij->i", F @ B, Wrows)
            gmarg = w * _subgrad_margins(loss, u)
            grad = F.T @ (gmarg[:, None] * Wrows) / n + 2.0 * lam * B
            B -= grad / (sigma * t + 1.0)
            if t % 25 == 0 or t == n_iter:
                val = obj(B)
                if val < cur_best:
                    cur_best = val
                    cur_B = B.copy()
        if cur_best < best_val:
            best_val = cur_best
            best_B = cur_B

    model = DecisionModel(form="linear", coef=best_B, simplex=simplex, loss=loss, lam=lam)
    return model
