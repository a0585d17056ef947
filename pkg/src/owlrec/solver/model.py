"""Fitted decision models, the regularized objective, and model persistence."""

import json
from dataclasses import dataclass, field

import numpy as np

from ..core import LossSpec, SimplexCode, make_simplex
from ..errors import InvalidArgumentError, InvalidModelError
from ..kernels import KernelSpec, gram_matrix
from ..loss import loss_value

__all__ = ["DecisionModel", "SolverReport", "objective", "save_model", "load_model"]


@dataclass(frozen=True)
class DecisionModel:
    """Fitted f: X -> R^(k-1) in linear or kernel-expansion form.

    Linear form: coef has shape (p+1, k-1); the last row is the intercept,
    folded in as a constant covariate so it is penalized like every other
    coefficient.  Kernel form: coef has shape (n_train, k-1) with separate
    intercepts, plus the retained training covariates.
    """

    form: str                     # "linear" | "kernel"
    coef: np.ndarray
    simplex: SimplexCode
    loss: LossSpec
    lam: float
    intercepts: np.ndarray = None     # kernel form only, shape (k-1,)
    kernel: KernelSpec = None         # kernel form only
    train_X: np.ndarray = None        # kernel form only
    p: int = field(default=None)

    def __post_init__(self):
        if self.form not in ("linear", "kernel"):
            raise InvalidModelError(f"unknown model form {self.form!r}")
        if not np.all(np.isfinite(self.coef)):
            raise InvalidModelError("model coefficients are not finite")
        if self.form == "linear":
            object.__setattr__(self, "p", self.coef.shape[0] - 1)
        else:
            if self.kernel is None or self.train_X is None or self.intercepts is None:
                raise InvalidModelError("kernel model needs kernel spec, intercepts, train_X")
            object.__setattr__(self, "p", self.train_X.shape[1])

    @property
    def k(self):
        return self.simplex.k

    def decision_values(self, X):
        """f(x) rows for a batch of covariate vectors; shape (m, k-1)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.p:
            raise InvalidArgumentError(
                f"covariate dimension {X.shape[1]} does not match model p={self.p}"
            )
        if self.form == "linear":
            return X @ self.coef[:-1] + self.coef[-1]
        K = gram_matrix(self.kernel, X, self.train_X)
        return K @ self.coef + self.intercepts

    def penalty(self):
        """J(f): sum_j beta_j'beta_j (linear, intercept row included) or
        sum_j alpha_j' P alpha_j + sum_j alpha_0j^2 (kernel)."""
        if self.form == "linear":
            return float(np.sum(self.coef**2))
        P = gram_matrix(self.kernel, self.train_X)
        return float(np.einsum("ij,ik,kj->", self.coef, P, self.coef)
                     + np.sum(self.intercepts**2))


@dataclass
class SolverReport:
    objective: float
    iterations: int
    converged: bool
    primal_residual: float = float("nan")
    dual_residual: float = float("nan")
    kkt_violation: float = float("nan")
    notes: str = ""

    def to_dict(self):
        return {
            "objective": self.objective,
            "iterations": self.iterations,
            "converged": self.converged,
            "primal_residual": self.primal_residual,
            "dual_residual": self.dual_residual,
            "kkt_violation": self.kkt_violation,
            "notes": self.notes,
        }


def objective(ds, model):
    """Regularized empirical risk: (1/n) sum_i w_i l(<W_{a_i}, f(x_i)>) + lam J(f)."""
    if ds.p != model.p or ds.k != model.k:
        raise InvalidArgumentError(
            f"dataset (p={ds.p}, k={ds.k}) does not match model (p={model.p}, k={model.k})"
        )
    fvals = model.decision_values(ds.features)
    margins = np.einsum("ij,ij->i", fvals, model.simplex.vertices[ds.treatments - 1])
    risk = float(np.sum(ds.weights * loss_value(model.loss, margins))) / ds.n
    return risk + model.lam * model.penalty()


def _encode_array(a):
    return np.asarray(a, dtype=float).tolist()


def save_model(model, path):
    """Write the self-describing model file (JSON; floats round-trip exactly)."""
    doc = {
        "format": "owlrec-model",
        "version": 1,
        "form": model.form,
        "k": model.k,
        "p": model.p,
        "loss": {"family": model.loss.family, "c": model.loss.c},
        "lambda": model.lam,
        "coef": _encode_array(model.coef),
    }
    if model.form == "kernel":
        doc["intercepts"] = _encode_array(model.intercepts)
        doc["kernel"] = {
            "family": model.kernel.family,
            "degree": model.kernel.degree,
            "offset": model.kernel.offset,
            "bandwidth": model.kernel.bandwidth,
        }
        doc["train_X"] = _encode_array(model.train_X)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != "owlrec-model":
        raise InvalidModelError(f"{path}: not an owlrec model file")
    loss = LossSpec(doc["loss"]["family"], doc["loss"]["c"])
    simplex = make_simplex(doc["k"])
    if doc["form"] == "linear":
        return DecisionModel(
            form="linear",
            coef=np.asarray(doc["coef"], dtype=float),
            simplex=simplex,
            loss=loss,
            lam=doc["lambda"],
        )
    ks = doc["kernel"]
    kernel = KernelSpec(ks["family"], degree=ks["degree"], offset=ks["offset"],
                        bandwidth=ks["bandwidth"])
    return DecisionModel(
        form="kernel",
        coef=np.asarray(doc["coef"], dtype=float),
        simplex=simplex,
        loss=loss,
        lam=doc["lambda"],
        intercepts=np.asarray(doc["intercepts"], dtype=float),
        kernel=kernel,
        train_X=np.asarray(doc["train_X"], dtype=float),
    )
