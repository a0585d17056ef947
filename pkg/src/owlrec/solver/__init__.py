"""Solvers for the regularized outcome-weighted classification objective."""

from ._backend import BACKEND
from .admm import fit_admm
from .dualcd import fit_dual_cd
from .model import DecisionModel, SolverReport, load_model, objective, save_model
from .reference import fit_reference

__all__ = [
    "BACKEND",
    "DecisionModel",
    "SolverReport",
    "objective",
    "fit_admm",
    "fit_dual_cd",
    "fit_reference",
    "save_model",
    "load_model",
]
