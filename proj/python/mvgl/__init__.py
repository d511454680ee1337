"""Multiview graph learning from smooth graph signals."""

from ._core import (
    ConvergenceReport,
    Hyperparameters,
    MvglError,
    SolverOptions,
    admm_solve,
    apply_S,
    apply_S_transpose,
    binarize,
    edge_count,
    f1,
    is_valid_laplacian,
    laplacian_from_edges,
    objective,
    pairwise_correlation,
    project_feasible,
    prox_cv,
    prox_rv,
    simulate,
    solve_single,
    tune_beta,
    upper,
)

__all__ = [
    "ConvergenceReport",
    "Hyperparameters",
    "MvglError",
    "SolverOptions",
    "admm_solve",
    "apply_S",
    "apply_S_transpose",
    "binarize",
    "edge_count",
    "f1",
    "is_valid_laplacian",
    "laplacian_from_edges",
    "objective",
    "pairwise_correlation",
    "project_feasible",
    "prox_cv",
    "prox_rv",
    "simulate",
    "solve_single",
    "tune_beta",
    "upper",
]
