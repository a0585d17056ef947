"""Surrogate losses for outcome-weighted classification.

All losses are increasing in the margin u = <W_a, f(x)> because smaller
outcomes are preferred: a correct fit drives the observed treatment's margin
negative.  The bent family decomposes as l_B(u) = l_1(u) + (c-1) u_+ with
l_1 the plain hinge; the extra slope c >= 1 on u > 0 is what shrinks
near-optimal margins to zero.
"""

from dataclasses import dataclass

import numpy as np

from .core import LossSpec
from .errors import InvalidArgumentError

__all__ = ["LossEvaluation", "loss_value", "loss_derivative", "parse_loss_token"]

# Floor applied to derivatives when they appear in ratio denominators.  The
# squared loss has zero derivative for u <= -1, which breaks the ratio rule
# the two-step recommendation relies on; see recommend.two_step_ratios.
DERIVATIVE_FLOOR = 1e-10


@dataclass(frozen=True)
class LossEvaluation:
    """Loss value with one-sided derivatives (subdifferential endpoints)."""

    value: float
    left_derivative: float
    right_derivative: float


def loss_value(spec, u):
    """Evaluate the loss at margin u.  Accepts scalars or arrays."""
    u = np.asarray(u, dtype=float)
    fam = spec.family
    if fam == "squared":
        out = np.square(np.maximum(1.0 + u, 0.0))
    elif fam == "exp":
        out = np.exp(u)
    elif fam == "hinge":
        out = np.maximum(1.0 + u, 0.0)
    elif fam == "bent-hinge":
        out = np.maximum(1.0 + u, 0.0) + (spec.c - 1.0) * np.maximum(u, 0.0)
    else:  # pragma: no cover - LossSpec already validates
        raise InvalidArgumentError(f"unknown loss family {fam!r}")
    return out if out.ndim else float(out)


def loss_derivative(spec, u):
    """Value plus left/right derivatives at u.

    At kinks the two derivatives bracket the subdifferential: the hinge at
    u = -1 gives (0, 1); the bent hinge at u = 0 gives (1, c).
    """
    u = float(u)
    fam = spec.family
    if fam == "squared":
        d = 2.0 * max(1.0 + u, 0.0)
        return LossEvaluation(max(1.0 + u, 0.0) ** 2, d, d)
    if fam == "exp":
        e = float(np.exp(u))
        return LossEvaluation(e, e, e)
    if fam == "hinge":
        val = max(1.0 + u, 0.0)
        if u < -1.0:
            left = right = 0.0
        elif u == -1.0:
            left, right = 0.0, 1.0
        else:
            left = right = 1.0
        return LossEvaluation(val, left, right)
    if fam == "bent-hinge":
        c = spec.c
        val = max(1.0 + u, 0.0) + (c - 1.0) * max(u, 0.0)
        if u < -1.0:
            left = right = 0.0
        elif u == -1.0:
            left, right = 0.0, 1.0
        elif u < 0.0:
            left = right = 1.0
        elif u == 0.0:
            left, right = 1.0, c
        else:
            left = right = c
        return LossEvaluation(val, left, right)
    raise InvalidArgumentError(f"unknown loss family {fam!r}")  # pragma: no cover


def parse_loss_token(token, c=1.0):
    """Build a LossSpec from the CLI token 'squared' | 'exp' | 'hinge' | 'bent-hinge'."""
    return LossSpec(family=token, c=c if token == "bent-hinge" else 1.0)
