"""Feature-space views of the training data shared by both solvers.

Linear learning appends a constant column, folding the intercept into the
penalized coefficients.  Kernel learning factors the training gram into
spectral features psi_i (exact at the default truncation tolerance) and
appends the same constant column; every solver then runs the linear-case
algorithm on the feature rows, and the fitted feature-space coefficients
map back to the kernel expansion afterwards.
"""

from dataclasses import dataclass

import numpy as np

from ..kernels import gram_matrix, spectral_features

__all__ = ["FeatureSpace", "build_features"]


@dataclass(frozen=True)
class FeatureSpace:
    F: np.ndarray              # (n, d) rows incl. trailing constant column
    form: str                  # "linear" | "kernel"
    kernel: object = None      # resolved KernelSpec (kernel form)
    back: np.ndarray = None    # maps feature coefs -> expansion coefs (kernel form)

    @property
    def d(self):
        return self.F.shape[1]

    def to_model_coefs(self, V):
        """Split fitted feature-space columns V (d, k-1) into model arrays.

        Linear: returns the (p+1, k-1) coefficient matrix as-is.
        Kernel: returns (A, intercepts) with A = back @ V[:-1].
        """
        if self.form == "linear":
            return V, None
        return self.back @ V[:-1], V[-1].copy()


def build_features(X, kernel=None, feature_tol=1e-12, feature_rank=None):
    """Feature rows for linear (kernel=None) or kernel learning."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n = X.shape[0]
    ones = np.ones((n, 1))
    if kernel is None:
        return FeatureSpace(F=np.hstack([X, ones]), form="linear")
    spec = kernel.resolve(X)
    P = gram_matrix(spec, X)
    psi, back = spectral_features(P, tol=feature_tol, max_rank=feature_rank)
    return FeatureSpace(F=np.hstack([psi, ones]), form="kernel", kernel=spec, back=back)
