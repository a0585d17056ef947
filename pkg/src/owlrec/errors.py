"""Exception hierarchy shared by all owlrec modules."""


class OwlrecError(Exception):
    """Base class for all owlrec errors."""


class InvalidArgumentError(OwlrecError, ValueError):
    """An argument violates a documented precondition."""


class InvalidDatasetError(OwlrecError, ValueError):
    """A dataset violates the trial-data invariants."""


class InvalidModelError(OwlrecError, ValueError):
    """A model is unusable for the requested operation."""


class UndefinedValueError(OwlrecError, ArithmeticError):
    """An estimator has a zero denominator (no matching observations)."""


class TuningFailedError(OwlrecError, RuntimeError):
    """No tuning candidate produced a defined score."""


class RefusedError(OwlrecError, ValueError):
    """Operation refused because size limits for the oracle path were exceeded."""
