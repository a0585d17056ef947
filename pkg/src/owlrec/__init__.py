"""owlrec: outcome-weighted learning for single- and set-valued treatment recommendations."""

from .core import (
    LossSpec,
    Recommendation,
    SimplexCode,
    TrialDataset,
    make_simplex,
    optimal_aitr,
    read_dataset_csv,
    validate_dataset,
)
from .kernels import KernelSpec, gram_matrix, kernel_eval
from .loss import LossEvaluation, loss_derivative, loss_value
from .solver import (
    BACKEND,
    DecisionModel,
    SolverReport,
    fit_admm,
    fit_dual_cd,
    fit_reference,
    load_model,
    objective,
    save_model,
)

__version__ = "0.1.0"
