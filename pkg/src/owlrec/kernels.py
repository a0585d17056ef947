"""Kernel functions, gram matrices, and spectral feature maps.

The solvers never touch a gram matrix directly: a square gram is factored
once into spectral features psi_i with <psi_i, psi_j> = K(x_i, x_j), after
which every kernel fit runs the linear-case code path on the feature rows.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError

__all__ = [
    "KernelSpec",
    "kernel_eval",
    "gram_matrix",
    "median_bandwidth",
    "spectral_features",
    "parse_kernel_token",
]

KERNEL_FAMILIES = ("linear", "polynomial", "gaussian")


@dataclass(frozen=True)
class KernelSpec:
    family: str
    degree: int = 2           # polynomial only
    offset: float = 1.0       # polynomial only
    bandwidth: float = None   # gaussian; None means "resolve by median heuristic"

    def __post_init__(self):
        if self.family not in KERNEL_FAMILIES:
            raise InvalidArgumentError(
                f"unknown kernel family {self.family!r}; expected one of {KERNEL_FAMILIES}"
            )
        if self.family == "polynomial":
            if self.degree < 1:
                raise InvalidArgumentError(f"polynomial degree must be >= 1, got {self.degree}")
            if self.offset < 0:
                raise InvalidArgumentError(f"polynomial offset must be >= 0, got {self.offset}")
        if self.family == "gaussian" and self.bandwidth is not None and self.bandwidth <= 0:
            raise InvalidArgumentError(f"gaussian bandwidth must be > 0, got {self.bandwidth}")

    def resolve(self, X):
        """Fill in a data-dependent bandwidth (median heuristic) if still unset."""
        if self.family == "gaussian" and self.bandwidth is None:
            return KernelSpec("gaussian", bandwidth=median_bandwidth(X))
        return self


def median_bandwidth(X):
    """Median pairwise Euclidean distance of the rows of X (zero distances excluded)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n = X.shape[0]
    if n < 2:
        return 1.0
    sq = np.sum(X**2, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    iu = np.triu_indices(n, k=1)
    d2 = np.maximum(d2[iu], 0.0)
    d2 = d2[d2 > 0]
    if d2.size == 0:
        return 1.0
    return float(np.sqrt(np.median(d2)))


def kernel_eval(spec, x, xp):
    """K(x, x') for a single pair of vectors."""
    x = np.asarray(x, dtype=float).ravel()
    xp = np.asarray(xp, dtype=float).ravel()
    if x.shape != xp.shape:
        raise InvalidArgumentError(f"dimension mismatch: {x.shape} vs {xp.shape}")
    return float(gram_matrix(spec, x[None, :], xp[None, :])[0, 0])


def gram_matrix(spec, X, Xp=None):
    """Kernel matrix with entry (i, j) = K(X_i, Xp_j)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Xp = X if Xp is None else np.atleast_2d(np.asarray(Xp, dtype=float))
    if X.shape[1] != Xp.shape[1]:
        raise InvalidArgumentError(
            f"column count mismatch: {X.shape[1]} vs {Xp.shape[1]}"
        )
    if spec.family == "linear":
        return X @ Xp.T
    if spec.family == "polynomial":
        return (spec.offset + X @ Xp.T) ** spec.degree
    # gaussian
    if spec.bandwidth is None:
        raise InvalidArgumentError("gaussian bandwidth unresolved; call spec.resolve(X) first")
    sq = np.sum(X**2, axis=1)[:, None] + np.sum(Xp**2, axis=1)[None, :] - 2.0 * (X @ Xp.T)
    return np.exp(-np.maximum(sq, 0.0) / (2.0 * spec.bandwidth**2))


def spectral_features(P, tol=1e-12, max_rank=None):
    """Factor a PSD gram matrix as Psi @ Psi.T by truncated eigendecomposition.

    Eigenvalues below tol * max_eigenvalue are dropped (they are numerical
    zeros at the default tol); max_rank optionally caps the retained rank
    (a recorded approximation used by the large tuning studies).  Returns
    (Psi, back) where back maps feature-space coefficient vectors v to
    expansion coefficients alpha with Psi.T @ alpha = v, i.e. alpha = back @ v.
    """
    P = np.asarray(P, dtype=float)
    evals, evecs = np.linalg.eigh(P)
    top = evals[-1] if evals.size else 0.0
    if top <= 0:
        raise InvalidArgumentError("gram matrix has no positive eigenvalue")
    keep = evals > tol * top
    if max_rank is not None and keep.sum() > max_rank:
        order = np.argsort(evals)[::-1][:max_rank]
        keep = np.zeros_like(keep)
        keep[order] = True
    evals = evals[keep]
    evecs = evecs[:, keep]
    root = np.sqrt(evals)
    psi = evecs * root[None, :]
    back = evecs / root[None, :]
    return psi, back


def parse_kernel_token(token):
    """CLI kernel tokens: 'linear' | 'poly:<degree>' | 'gauss:<bandwidth|auto>'.

    Returns None for 'linear' (linear learning bypasses kernels entirely).
    """
    if token == "linear":
        return None
    if token.startswith("poly:"):
        try:
            degree = int(token.split(":", 1)[1])
        except ValueError:
            raise InvalidArgumentError(f"bad polynomial degree in {token!r}") from None
        return KernelSpec("polynomial", degree=degree, offset=1.0)
    if token.startswith("gauss:"):
        arg = token.split(":", 1)[1]
        if arg == "auto":
            return KernelSpec("gaussian", bandwidth=None)
        try:
            bw = float(arg)
        except ValueError:
            raise InvalidArgumentError(f"bad gaussian bandwidth in {token!r}") from None
        return KernelSpec("gaussian", bandwidth=bw)
    raise InvalidArgumentError(f"unknown kernel token {token!r}")
