"""Core domain types: trial datasets, simplex coding, and recommendation sets.

Treatments are 1-based labels {1..k} in every external surface (CSV files,
Recommendation members, error messages).  Internal arrays may use 0-based
indices; anything serialized is 1-based.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, InvalidDatasetError

__all__ = [
    "SimplexCode",
    "LossSpec",
    "TrialDataset",
    "Recommendation",
    "make_simplex",
    "validate_dataset",
    "optimal_aitr",
    "read_dataset_csv",
]

LOSS_FAMILIES = ("squared", "exp", "hinge", "bent-hinge")


@dataclass(frozen=True)
class SimplexCode:
    """k unit vectors in R^(k-1) with equal pairwise inner products -1/(k-1)."""

    k: int
    vertices: np.ndarray  # shape (k, k-1), row j-1 is W_j

    def vertex(self, label):
        """Vertex for 1-based treatment label."""
        return self.vertices[label - 1]


@dataclass(frozen=True)
class LossSpec:
    """Surrogate loss family with near-optimal parameter c.

    c is meaningful for the bent hinge only; for all other families it is
    forced to 1 so that the loss value is unambiguous.  A bent hinge with
    c = 1 evaluates identically to the plain hinge.
    """

    family: str
    c: float = 1.0

    def __post_init__(self):
        if self.family not in LOSS_FAMILIES:
            raise InvalidArgumentError(
                f"unknown loss family {self.family!r}; expected one of {LOSS_FAMILIES}"
            )
        if self.c < 1.0:
            raise InvalidArgumentError(f"near-optimal parameter c must be >= 1, got {self.c}")
        if self.family != "bent-hinge" and self.c != 1.0:
            object.__setattr__(self, "c", 1.0)

    @property
    def differentiable(self):
        return self.family in ("squared", "exp")


@dataclass(frozen=True)
class TrialDataset:
    """Weighted-classification input: covariates, treatments, outcomes, propensities.

    Outcomes are strictly positive and smaller is better.  The per-row weight
    is y_i / p(a_i | x_i).
    """

    features: np.ndarray      # (n, p) float
    treatments: np.ndarray    # (n,) int, labels in {1..k}
    outcomes: np.ndarray      # (n,) float > 0
    propensities: np.ndarray  # (n,) float in (0, 1]
    k: int
    p: int = field(default=0)

    def __post_init__(self):
        object.__setattr__(self, "p", int(self.features.shape[1]))

    @property
    def n(self):
        return self.features.shape[0]

    @property
    def weights(self):
        return self.outcomes / self.propensities

    @property
    def max_weight(self):
        """Largest y/p weight; surfaced because the outcome bound is unverifiable."""
        return float(np.max(self.weights))


@dataclass(frozen=True)
class Recommendation:
    """Nonempty subset of {1..k}; size 1 is an ITR, larger sizes an A-ITR."""

    members: frozenset

    def __post_init__(self):
        if not self.members:
            raise InvalidArgumentError("a recommendation must contain at least one treatment")
        object.__setattr__(self, "members", frozenset(int(m) for m in self.members))

    def __contains__(self, label):
        return label in self.members

    def __len__(self):
        return len(self.members)

    def sorted(self):
        return sorted(self.members)

    def label(self):
        """External display form, e.g. '1+3'."""
        return "+".join(str(m) for m in self.sorted())


def make_simplex(k):
    """Simplex vertices W_1..W_k in R^(k-1).

    W_1 = (k-1)^{-1/2} * 1, and for 2 <= j <= k,
    W_j = -(1 + sqrt(k)) (k-1)^{-3/2} * 1 + sqrt(k/(k-1)) * e_{j-1}.
    """
    if k < 2:
        raise InvalidArgumentError(f"need at least 2 treatments, got k={k}")
    km1 = k - 1
    vertices = np.empty((k, km1))
    vertices[0] = km1 ** -0.5
    base = -(1.0 + math.sqrt(k)) * km1 ** -1.5
    bump = math.sqrt(k / km1)
    for j in range(1, k):
        vertices[j] = base
        vertices[j, j - 1] += bump
    return SimplexCode(k=k, vertices=vertices)


def optimal_aitr(mu, c):
    """Treatments within factor c of the best conditional mean.

    Returns {j : mu_j / min_i mu_i <= c}.  The comparison is an exact <=;
    callers wanting fuzziness adjust c.
    """
    mu = np.asarray(mu, dtype=float)
    if mu.ndim != 1 or mu.size < 1:
        raise InvalidArgumentError("mu must be a vector of conditional means")
    if np.any(mu <= 0):
        raise InvalidArgumentError("all conditional means must be positive")
    if c < 1.0:
        raise InvalidArgumentError(f"near-optimal parameter c must be >= 1, got {c}")
    best = mu.min()
    members = np.flatnonzero(mu <= c * best) + 1
    return Recommendation(frozenset(members.tolist()))


def validate_dataset(features, treatments, outcomes, k, propensities=None, randomized=False):
    """Check all trial-data invariants and assemble a TrialDataset.

    When propensities are absent they default to 1/k, but only if the
    randomized flag is set; on observational data absence is an error.
    """
    X = np.atleast_2d(np.asarray(features, dtype=float))
    a = np.asarray(treatments)
    y = np.asarray(outcomes, dtype=float)
    n = X.shape[0]
    if a.shape != (n,) or y.shape != (n,):
        raise InvalidDatasetError("features, treatments, and outcomes must have matching length")
    if k < 2:
        raise InvalidDatasetError(f"need at least 2 treatments, got k={k}")
    if not np.all(np.isfinite(X)):
        raise InvalidDatasetError("covariates contain non-finite values")

    a_float = np.asarray(a, dtype=float)
    if np.any(a_float != np.round(a_float)):
        raise InvalidDatasetError("treatment labels must be integers")
    a = a_float.astype(int)
    bad = np.flatnonzero((a < 1) | (a > k))
    if bad.size:
        raise InvalidDatasetError(
            f"row {bad[0] + 1}: treatment label {a[bad[0]]} outside {{1..{k}}}"
        )
    seen = np.unique(a)
    if seen.size < k:
        missing = sorted(set(range(1, k + 1)) - set(seen.tolist()))
        raise InvalidDatasetError(f"treatments {missing} never appear in the data")

    bad = np.flatnonzero(~(y > 0) | ~np.isfinite(y))
    if bad.size:
        raise InvalidDatasetError(
            f"row {bad[0] + 1}: outcome {y[bad[0]]} is not strictly positive"
        )

    if propensities is None:
        if not randomized:
            raise InvalidDatasetError(
                "no propensities given; pass randomized=True for the 1/k default "
                "or estimate them (observational data)"
            )
        prop = np.full(n, 1.0 / k)
    else:
        prop = np.asarray(propensities, dtype=float)
        if prop.shape != (n,):
            raise InvalidDatasetError("propensity column length mismatch")
        bad = np.flatnonzero(~(prop > 0) | (prop > 1) | ~np.isfinite(prop))
        if bad.size:
            raise InvalidDatasetError(
                f"row {bad[0] + 1}: propensity {prop[bad[0]]} outside (0, 1]"
            )

    w = y / prop
    if not np.all(np.isfinite(w)):
        raise InvalidDatasetError("weights y/p contain non-finite values")

    return TrialDataset(features=X, treatments=a, outcomes=y, propensities=prop, k=k)


def read_dataset_csv(path, k=None, randomized=False):
    """Read the trial CSV schema: columns x1..xp, a, y, optional prop.

    UTF-8, comma-separated, '.' decimal.  k defaults to the largest label
    present.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InvalidDatasetError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        rows = [row for row in reader if row]

    xcols = [i for i, h in enumerate(header) if h.startswith("x")]
    expected = [f"x{j}" for j in range(1, len(xcols) + 1)]
    if [header[i] for i in xcols] != expected or "a" not in header or "y" not in header:
        raise InvalidDatasetError(
            f"{path}: header must be x1..xp, a, y[, prop]; got {header}"
        )
    acol = header.index("a")
    ycol = header.index("y")
    pcol = header.index("prop") if "prop" in header else None

    try:
        data = np.array([[float(v) for v in row] for row in rows])
    except ValueError as exc:
        raise InvalidDatasetError(f"{path}: non-numeric cell ({exc})") from None
    if data.ndim != 2 or data.shape[1] != len(header):
        raise InvalidDatasetError(f"{path}: ragged rows")

    X = data[:, xcols]
    a = data[:, acol]
    y = data[:, ycol]
    prop = data[:, pcol] if pcol is not None else None
    if k is None:
        k = int(np.max(a))
    return validate_dataset(X, a, y, k, propensities=prop, randomized=randomized)
