"""Greedy selection of collocation functionals with Newton-basis updates.

Each iteration scores every admissible candidate by

    |residual|^beta * (weight * power)^(1-beta)        for finite beta,
    |residual| / (weight * power)                      for beta = inf,

selects the argmax, and extends an orthonormal Newton basis of the selected
representers. The extension updates, in O(#candidates) per step, the squared
power values (projection errors of each candidate's representer onto the
selected span) and the residual values of every candidate functional.

beta = 0 ignores the data (power-only selection), beta = 1 picks the largest
residual, beta = inf their ratio. Importance weights only rescale the power
factor inside the score; the Newton mathematics never sees them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import GreedyBreakdownError, PowerExhausted, UsageError
from .functionals import CandidateSet, FunctionalKind, representer_at_points
from .model import CollocationModel, to_standard_coefficients

DEFAULT_TOL_POWER = 1e-7


@dataclass
class IterationRecord:
    """One selection step. ``max_power`` and ``max_residual`` describe the
    candidate state the selection saw (before the Newton update); ``sup_error``,
    when tracked, is the solution error after the update."""

    n: int
    chosen_index: int
    chosen_kind: str
    score: float
    max_power: float
    max_residual: float
    interior_count: int
    boundary_count: int
    sup_error: float | None = None


@dataclass
class RunReport:
    iterations: list[IterationRecord] = field(default_factory=list)
    termination: str = ""

    def series(self, attr):
        """(n, value) pairs of one record attribute, for slope fits."""
        return [(rec.n, getattr(rec, attr)) for rec in self.iterations]


class GreedyState:
    """Mutable per-run state: selected indices, Newton triangular data and
    the per-candidate squared power / residual / weight arrays."""

    def __init__(self, candidates, rhs, weights, tol_p2):
        m = len(candidates)
        self.candidates = candidates
        self.selected = []
        self.newton_rows = np.empty((0, m))  # row j = j-th Newton function at all candidates
        self.transform = np.empty((0, 0))  # lower triangular, Newton over selected representers
        self.coeffs = np.empty(0)
        self.p2 = candidates.gram_diagonal().astype(float)
        self.res = np.array(rhs, dtype=float, copy=True)
        self.weights = np.array(weights, dtype=float, copy=True)
        self.tol_p2 = float(tol_p2)

    @property
    def n_selected(self):
        return len(self.selected)

    def admissible(self):
        return self.p2 > self.tol_p2


def importance_weights(candidates):
    """Selection weights that damp interior scores by the doubly operated
    kernel diagonal, compensating its much larger scale; boundary weights
    stay at one."""
    interior_diag = float(kernels.llk_at_distance(candidates.kernel, candidates.op, 0.0))
    return np.where(candidates.is_interior, 1.0 / interior_diag, 1.0)


def init_state(candidates, rhs, weights=None, tol_power=DEFAULT_TOL_POWER):
    """Fresh state: nothing selected, squared power = Gram diagonal,
    residuals = right-hand-side values."""
    if not isinstance(candidates, CandidateSet) or len(candidates) == 0:
        raise UsageError("init_state needs a nonempty CandidateSet")
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (len(candidates),):
        raise UsageError(f"rhs must have one entry per candidate, got shape {rhs.shape}")
    if weights is None:
        weights = np.ones(len(candidates))
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (len(candidates),) or np.any(weights <= 0):
        raise UsageError("weights must be positive, one per candidate")
    return GreedyState(candidates, rhs, weights, tol_power**2)


def selection_score(beta, res_i, p_i, w_i=1.0):
    """Score of one admissible candidate (p_i above the power floor).

    Finite beta: |res|^beta * (w*p)^(1-beta) with the 0^0 = 1 convention, so
    beta = 0 is exactly w*p and beta = 1 exactly |res|. beta = inf: the
    ratio |res| / (w*p).
    """
    if math.isinf(beta):
        return abs(res_i) / (w_i * p_i)
    return float(np.abs(res_i) ** beta * (w_i * p_i) ** (1.0 - beta))


def _score_array(state, beta, admissible):
    p = np.sqrt(state.p2[admissible])
    wp = state.weights[admissible] * p
    absres = np.abs(state.res[admissible])
    if math.isinf(beta):
        return absres / wp
    if beta == 0.0:
        return wp
    if beta == 1.0:
        return absres
    return absres**beta * wp ** (1.0 - beta)


def select_next(state, beta):
    """Index of the admissible candidate with the largest score.

    Ties break to the lowest candidate index, independent of evaluation
    order. Raises :class:`PowerExhausted` when no candidate remains above
    the power floor.
    """
    admissible = state.admissible()
    if not admissible.any():
        raise PowerExhausted("no unselected candidate above the power floor")
    scores = _score_array(state, beta, admissible)
    pos = int(np.argmax(scores))  # argmax returns the first maximum
    return int(np.flatnonzero(admissible)[pos])


def newton_update(state, chosen):
    """Extend the Newton basis by the chosen candidate and refresh state.

    Appends the new orthonormal basis row evaluated at all candidates, the
    matching row of the representer-to-Newton transform, and the Newton
    coefficient residual/power at the chosen functional; then decrements
    every candidate's squared power by the squared new row and its residual
    by coefficient * row. The chosen candidate's power and residual are
    exactly zero afterwards, which the update enforces directly.
    """
    p2c = float(state.p2[chosen])
    if p2c <= state.tol_p2:
        raise GreedyBreakdownError(
            f"candidate {chosen} has squared power {p2c:.3e} at or below the floor "
            f"{state.tol_p2:.3e}",
            index=chosen,
        )
    pstar = math.sqrt(p2c)
    n = state.n_selected

    row = state.candidates.gram_column(chosen)
    if n:
        row = row - state.newton_rows[:, chosen] @ state.newton_rows
    row /= pstar

    t_new = np.zeros(n + 1)
    if n:
        t_new[:n] = -(state.newton_rows[:n, chosen] @ state.transform) / pstar
    t_new[n] = 1.0 / pstar

    c_new = float(state.res[chosen]) / pstar

    state.p2 = np.maximum(state.p2 - row**2, 0.0)
    state.res = state.res - c_new * row
    # Interpolation conditions hold exactly in exact arithmetic; pin them.
    state.p2[chosen] = 0.0
    state.res[chosen] = 0.0

    state.newton_rows = np.vstack([state.newton_rows, row[None, :]])
    full = np.zeros((n + 1, n + 1))
    full[:n, :n] = state.transform
    full[n, :] = t_new
    state.transform = full
    state.coeffs = np.append(state.coeffs, c_new)
    state.selected.append(int(chosen))


def run_greedy(
    problem,
    kernel,
    beta,
    n_max,
    tol_power=DEFAULT_TOL_POWER,
    tol_residual=None,
    reweight=False,
    candidates=None,
    rhs=None,
    trace_points=None,
):
    """Full greedy solve of a collocation problem.

    Parameters
    ----------
    problem : Problem
        Supplies operator, point clouds, data functions and optionally the
        true solution.
    kernel : RadialKernel
        Must match the problem's spatial dimension.
    beta : float
        Selection exponent in [0, inf]; ``math.inf`` selects by ratio.
    n_max : int
        Maximum number of selections, >= 1.
    tol_power : float
        Floor on the power value; candidates at or below it are inadmissible.
    tol_residual : float, optional
        Stop once the largest candidate residual falls to this value (only
        checked for beta > 0). Defaults to 1e-12 * max |rhs|.
    reweight : bool
        Use :func:`importance_weights` instead of unit selection weights.
    candidates, rhs : optional
        Override the candidate set / right-hand side built from the problem.
    trace_points : ndarray, optional
        Evaluation points for per-iteration solution-error tracking; used
        only when the problem has a true solution.

    Returns
    -------
    (CollocationModel, RunReport)
    """
    if n_max < 1:
        raise UsageError("n_max must be at least 1")
    if candidates is None:
        candidates = CandidateSet.from_clouds(
            kernel, problem.op, problem.interior_cloud, problem.boundary_cloud
        )
    if rhs is None:
        rhs = candidates.rhs(problem)
    rhs = np.asarray(rhs, dtype=float)
    if tol_residual is None:
        tol_residual = 1e-12 * (np.max(np.abs(rhs)) if rhs.size else 0.0)
    weights = importance_weights(candidates) if reweight else None
    state = init_state(candidates, rhs, weights=weights, tol_power=tol_power)

    trace = None
    if trace_points is not None and problem.true_solution is not None:
        pts = np.atleast_2d(np.asarray(trace_points, dtype=float))
        trace = {
            "points": pts,
            "true": np.asarray(problem.true_solution(pts), dtype=float).reshape(-1),
            "newton_at_trace": np.empty((0, pts.shape[0])),
            "values": np.zeros(pts.shape[0]),
        }

    report = RunReport()
    interior_count = 0
    boundary_count = 0
    for n in range(1, n_max + 1):
        if beta > 0 and float(np.max(np.abs(state.res))) <= tol_residual:
            report.termination = "residual below tolerance"
            break
        try:
            chosen = select_next(state, beta)
        except PowerExhausted:
            report.termination = "power function exhausted"
            break
        admissible = state.admissible()
        max_power = float(np.max(state.weights * np.sqrt(state.p2)))
        max_residual = float(np.max(np.abs(state.res)))
        pos = int(np.flatnonzero(admissible).searchsorted(chosen))
        score = float(_score_array(state, beta, admissible)[pos])
        kind = state.candidates.functionals[chosen].kind
        if kind is FunctionalKind.INTERIOR_L:
            interior_count += 1
        else:
            boundary_count += 1

        try:
            newton_update(state, chosen)
        except GreedyBreakdownError as err:
            err.partial_report = report
            report.termination = "numerical breakdown"
            raise

        record = IterationRecord(
            n=n,
            chosen_index=chosen,
            chosen_kind=kind.value,
            score=score,
            max_power=max_power,
            max_residual=max_residual,
            interior_count=interior_count,
            boundary_count=boundary_count,
        )
        if trace is not None:
            record.sup_error = _advance_trace(state, trace)
        report.iterations.append(record)
    else:
        report.termination = "max iterations"
    model = to_standard_coefficients(state) if state.n_selected else CollocationModel(
        kernel=kernel, op=problem.op, selected=[], alpha=np.empty(0)
    )
    return model, report


def _advance_trace(state, trace):
    """Append the newest Newton function on the trace grid and return the
    current sup of |true - approximant| there."""
    chosen = state.selected[-1]
    lam = state.candidates.functionals[chosen]
    vals = representer_at_points(
        state.candidates.kernel, state.candidates.op, lam, trace["points"], apply_L=False
    )
    n_prev = state.n_selected - 1
    if n_prev:
        vals = vals - state.newton_rows[:n_prev, chosen] @ trace["newton_at_trace"]
    # Same normalization the state row received: divide by the power value,
    # recovered from the transform diagonal.
    vals = vals * state.transform[n_prev, n_prev]
    trace["newton_at_trace"] = np.vstack([trace["newton_at_trace"], vals[None, :]])
    trace["values"] = trace["values"] + state.coeffs[n_prev] * vals
    return float(np.max(np.abs(trace["true"] - trace["values"])))
