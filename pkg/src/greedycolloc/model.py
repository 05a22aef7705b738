"""The collocation approximant as an evaluable object.

The greedy engine works in an orthonormal Newton basis; this module folds
its triangular transform back into standard coefficients over the selected
representers, evaluates the approximant and its operator image pointwise,
and summarizes residual and solution errors over test clouds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .functionals import FunctionalKind, representer_at_points


@dataclass
class CollocationModel:
    """Approximant sum_j alpha_j v_j over the selected functionals'
    representers."""

    kernel: object
    op: object
    selected: list
    alpha: np.ndarray

    def __post_init__(self):
        self.alpha = np.asarray(self.alpha, dtype=float)
        if len(self.selected) != self.alpha.size:
            raise UsageError("one coefficient per selected functional required")

    def __len__(self):
        return len(self.selected)


def to_standard_coefficients(state):
    """Fold a greedy state's Newton data into a :class:`CollocationModel`.

    The approximant is sum_j c_j N_j with N_j = sum_i T[j,i] v_i, so the
    standard coefficients are alpha = T^T c.
    """
    if state.n_selected < 1:
        raise UsageError("state has no selections")
    alpha = state.transform.T @ state.coeffs
    selected = [state.candidates.functionals[j] for j in state.selected]
    return CollocationModel(
        kernel=state.candidates.kernel,
        op=state.candidates.op,
        selected=selected,
        alpha=alpha,
    )


def evaluate(model, x, apply_L=False):
    """Approximant value at one point, or its operator image with apply_L."""
    return float(evaluate_at_points(model, np.reshape(np.asarray(x, float), (1, -1)), apply_L)[0])


def evaluate_at_points(model, points, apply_L=False):
    """Vectorized evaluation over an (n, d) array of points."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if points.shape[1] != model.kernel.dim:
        raise UsageError(
            f"expected points of shape (n, {model.kernel.dim}), got {points.shape}"
        )
    out = np.zeros(points.shape[0])
    for lam, coeff in zip(model.selected, model.alpha):
        out += coeff * representer_at_points(model.kernel, model.op, lam, points, apply_L)
    return out


@dataclass
class ErrorReport:
    """Discrete sup-norm residuals and, when a true solution is known,
    the solution error. ``residual_sum`` adds the two residual sups; the
    maximum-principle constant in front of it is unknown and reported as 1,
    so the sum is a diagnostic, not a bound."""

    sup_interior_residual: float
    sup_boundary_residual: float
    residual_sum: float
    sup_error: float | None = None
    rel_sup_error: float | None = None


def error_report(model, problem, test_interior, test_boundary):
    """Residual sups over test clouds, plus solution error when available.

    Test clouds may overlap the candidate clouds or be fresh; both are
    meaningful (in-sample vs held-out).
    """
    test_interior = np.atleast_2d(np.asarray(test_interior, dtype=float))
    test_boundary = np.atleast_2d(np.asarray(test_boundary, dtype=float))

    f_vals = np.asarray(problem.f(test_interior), dtype=float).reshape(-1)
    ls_vals = evaluate_at_points(model, test_interior, apply_L=True)
    sup_interior = float(np.max(np.abs(f_vals - ls_vals))) if len(f_vals) else 0.0

    g_vals = np.asarray(problem.g(test_boundary), dtype=float).reshape(-1)
    s_vals = evaluate_at_points(model, test_boundary, apply_L=False)
    sup_boundary = float(np.max(np.abs(g_vals - s_vals))) if len(g_vals) else 0.0

    sup_error = rel_sup_error = None
    if problem.true_solution is not None:
        union = np.vstack([test_interior, test_boundary])
        true_vals = np.asarray(problem.true_solution(union), dtype=float).reshape(-1)
        approx_vals = evaluate_at_points(model, union, apply_L=False)
        sup_error = float(np.max(np.abs(true_vals - approx_vals)))
        denom = float(np.max(np.abs(true_vals)))
        rel_sup_error = sup_error / denom if denom > 0 else sup_error

    return ErrorReport(
        sup_interior_residual=sup_interior,
        sup_boundary_residual=sup_boundary,
        residual_sum=sup_interior + sup_boundary,
        sup_error=sup_error,
        rel_sup_error=rel_sup_error,
    )
