"""Run configuration, canned experiments, decay fits and report emission.

Reports are written as a per-iteration CSV plus a summary JSON. Output is
byte-stable for identical inputs: fixed field order, floats rendered with 17
significant digits, ``\\n`` line endings. The CSV carries a running-minimum
column of the residual sup so slope fits can target min-over-window
quantities directly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, UsageError
from .geometry import sample_boundary, sample_interior
from .greedy import run_greedy
from .kernels import RadialKernel
from .model import error_report, evaluate_at_points
from .oracle import l2_inner_product
from .problems import BUILTIN_PROBLEMS, builtin_problem

_FLOAT_FMT = ".17g"


@dataclass
class RunConfig:
    """Everything a reproducible experiment run needs."""

    problem: str
    kernel: str = "wendland32"
    eps: float = 1.0
    amplitude: float = 1.0
    betas: list = field(default_factory=lambda: [1.0])
    n_max: int = 200
    seed: int = 0
    interior_n: int | None = None
    boundary_n: int | None = None
    test_interior_n: int = 4096
    test_boundary_n: int = 512
    tol_power: float = 1e-7
    tol_residual: float | None = None
    reweight: bool = False
    out: str = "runs"

    def __post_init__(self):
        if self.problem not in BUILTIN_PROBLEMS:
            raise ConfigurationError(
                f"config field 'problem': unknown id {self.problem!r}, "
                f"expected one of {BUILTIN_PROBLEMS}"
            )
        self.betas = [_parse_beta(b) for b in self.betas]
        if any(b < 0 for b in self.betas):
            raise ConfigurationError("config field 'betas': values must be >= 0 or 'inf'")
        for name in ("n_max", "test_interior_n", "test_boundary_n"):
            if getattr(self, name) < 1:
                raise ConfigurationError(f"config field {name!r}: must be >= 1")
        for name in ("interior_n", "boundary_n"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ConfigurationError(f"config field {name!r}: must be >= 1")


def _parse_beta(value):
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity"):
            return math.inf
        value = float(value)
    return float(value)


def _beta_tag(beta):
    return "inf" if math.isinf(beta) else format(beta, "g").replace(".", "p")


def fit_decay_rate(series, tail_fraction=0.5):
    """Least-squares slope of log(value) against log(n) over the series tail.

    Zero and negative values are skipped; at least five usable points must
    remain inside the tail window.
    """
    if not (0 < tail_fraction <= 1):
        raise UsageError("tail_fraction must lie in (0, 1]")
    pairs = [(n, v) for n, v in series]
    if not pairs:
        raise UsageError("cannot fit a slope to an empty series")
    n_max = max(n for n, _ in pairs)
    cutoff = n_max * (1.0 - tail_fraction)
    tail = [(n, v) for n, v in pairs if n > cutoff and v > 0 and n > 0]
    if len(tail) < 5:
        raise UsageError(
            f"need at least 5 positive tail points for a slope fit, found {len(tail)}"
        )
    log_n = np.log([n for n, _ in tail])
    log_v = np.log([v for _, v in tail])
    slope, _ = np.polyfit(log_n, log_v, 1)
    return float(slope)


# ---------------------------------------------------------------------------
# Bit-stable emitters.
# ---------------------------------------------------------------------------


def _render(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "1e999" if value > 0 else "-1e999"
        if math.isnan(value):
            return "nan"
        return format(value, _FLOAT_FMT)
    return str(value)


def _render_json(value, indent=0):
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {_render_json(v, indent + 1)}' for k, v in value.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        value = list(np.asarray(value).tolist()) if isinstance(value, np.ndarray) else list(value)
        if not value:
            return "[]"
        items = ",\n".join(f"{pad}  {_render_json(v, indent + 1)}" for v in value)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(value, str):
        return json.dumps(value)
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return _render(value)


def emit_report(report, path, format="csv"):
    """Write an iteration table (csv) or a summary mapping (json).

    For csv, ``report`` is a dict with keys ``columns`` (names) and ``rows``
    (sequences); for json any nested dict/list/scalar structure. Identical
    inputs yield byte-identical files.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if format == "csv":
        lines = [",".join(report["columns"])]
        for row in report["rows"]:
            lines.append(",".join(_render(cell) for cell in row))
        text = "\n".join(lines) + "\n"
    elif format == "json":
        text = _render_json(report) + "\n"
    else:
        raise UsageError(f"unknown report format {format!r}")
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


def iteration_table(report, dim, chosen_points, include_sup_error=False):
    """Column/row dict for a run report's per-iteration CSV."""
    columns = (
        ["n", "chosen_kind"]
        + [f"chosen_x{i + 1}" for i in range(dim)]
        + ["score", "max_power", "max_residual", "min_max_residual", "interior_count", "boundary_count"]
    )
    if include_sup_error:
        columns.append("sup_error")
    rows = []
    running_min = math.inf
    for rec, point in zip(report.iterations, chosen_points):
        running_min = min(running_min, rec.max_residual)
        row = (
            [rec.n, rec.chosen_kind]
            + [float(point[i]) for i in range(dim)]
            + [
                rec.score,
                rec.max_power,
                rec.max_residual,
                running_min,
                rec.interior_count,
                rec.boundary_count,
            ]
        )
        if include_sup_error:
            row.append(rec.sup_error if rec.sup_error is not None else math.nan)
        rows.append(row)
    return {"columns": columns, "rows": rows}


# ---------------------------------------------------------------------------
# Experiment driver.
# ---------------------------------------------------------------------------

_EXPERIMENT_DEFAULTS = {
    # problem id: (kernel, eps, betas, n_max, reweight)
    "pgreedy-square": ("wendland32", 1.0, [0.0], 1000, True),
    "pacman": ("matern3", 0.5, [1.0, 0.0], 200, False),
    "beta-scale": ("matern2", 1.0, [0.0, 0.2, 0.4, 0.6, 0.8, 1.0], 120, False),
    "failure": ("wendland33", 1.0, [1.0], 200, False),
}


def default_config(problem_id, **overrides):
    """RunConfig preloaded with the canned settings of one built-in study."""
    if problem_id not in _EXPERIMENT_DEFAULTS:
        raise ConfigurationError(
            f"unknown experiment {problem_id!r}; expected one of {tuple(_EXPERIMENT_DEFAULTS)}"
        )
    kernel, eps, betas, n_max, reweight = _EXPERIMENT_DEFAULTS[problem_id]
    config = dict(
        problem=problem_id, kernel=kernel, eps=eps, betas=list(betas), n_max=n_max, reweight=reweight
    )
    config.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig(**config)


def run_experiment(config):
    """Execute the configured greedy run(s) and write CSV + JSON reports.

    One per-iteration CSV is written per beta value, plus a single summary
    JSON echoing the configuration, termination reasons, final errors and
    fitted decay slopes. Returns the list of written paths.
    """
    problem = builtin_problem(
        config.problem, interior_n=config.interior_n, boundary_n=config.boundary_n, seed=config.seed
    )
    kernel = RadialKernel(
        profile=config.kernel, eps=config.eps, amplitude=config.amplitude, dim=problem.dim
    )
    test_interior = sample_interior(problem.geometry, config.test_interior_n, config.seed + 7_001)
    test_boundary = sample_boundary(problem.geometry, config.test_boundary_n, config.seed + 7_002)
    trace_points = None
    if problem.true_solution is not None:
        trace_points = np.vstack([test_interior, test_boundary])

    out_dir = Path(config.out)
    written = []
    summary = {
        "config": {
            "problem": config.problem,
            "kernel": config.kernel,
            "eps": config.eps,
            "amplitude": config.amplitude,
            "betas": ["inf" if math.isinf(b) else b for b in config.betas],
            "n_max": config.n_max,
            "seed": config.seed,
            "interior_candidates": int(problem.interior_cloud.shape[0]),
            "boundary_candidates": int(problem.boundary_cloud.shape[0]),
            "test_interior_n": int(np.atleast_2d(test_interior).shape[0]),
            "test_boundary_n": int(np.atleast_2d(test_boundary).shape[0]),
            "tol_power": config.tol_power,
            "reweight": config.reweight,
        },
        "runs": [],
    }

    for beta in config.betas:
        model, report = run_greedy(
            problem,
            kernel,
            beta,
            n_max=config.n_max,
            tol_power=config.tol_power,
            tol_residual=config.tol_residual,
            reweight=config.reweight,
            trace_points=trace_points,
        )
        chosen_points = [problem_point(problem, rec.chosen_index) for rec in report.iterations]
        errors = error_report(model, problem, test_interior, test_boundary)

        run_summary = {
            "beta": "inf" if math.isinf(beta) else beta,
            "termination": report.termination,
            "n_selected": len(model),
            "interior_selected": report.iterations[-1].interior_count if report.iterations else 0,
            "boundary_selected": report.iterations[-1].boundary_count if report.iterations else 0,
            "sup_interior_residual": errors.sup_interior_residual,
            "sup_boundary_residual": errors.sup_boundary_residual,
            "residual_sum": errors.residual_sum,
        }
        if errors.sup_error is not None:
            run_summary["sup_error"] = errors.sup_error
            run_summary["rel_sup_error"] = errors.rel_sup_error
        for name, attr in (("slope_max_power", "max_power"), ("slope_max_residual", "max_residual")):
            try:
                run_summary[name] = fit_decay_rate(report.series(attr))
            except UsageError:
                run_summary[name] = None
        if trace_points is not None and report.iterations:
            try:
                run_summary["slope_sup_error"] = fit_decay_rate(report.series("sup_error"))
            except UsageError:
                run_summary["slope_sup_error"] = None
        if config.problem == "failure":
            run_summary["l2_inner_product_f_Ls"] = _failure_orthogonality(model, problem)
        run_summary["selected_points"] = [[float(v) for v in point] for point in chosen_points]
        summary["runs"].append(run_summary)

        csv_path = out_dir / f"{config.problem}_beta{_beta_tag(beta)}.csv"
        table = iteration_table(
            report, problem.dim, chosen_points, include_sup_error=trace_points is not None
        )
        emit_report(table, csv_path, format="csv")
        written.append(csv_path)

    json_path = out_dir / f"{config.problem}_summary.json"
    emit_report(summary, json_path, format="json")
    written.append(json_path)
    return written


def problem_point(problem, candidate_index):
    """Coordinates of a candidate by its index in the interior+boundary order."""
    n_interior = problem.interior_cloud.shape[0]
    if candidate_index < n_interior:
        return problem.interior_cloud[candidate_index]
    return problem.boundary_cloud[candidate_index - n_interior]


def _failure_orthogonality(model, problem):
    """Simpson value of <f, L s_n> on (0, 1) for the no-solution study."""

    def ls_values(x):
        return evaluate_at_points(model, np.asarray(x, float)[:, None], apply_L=True)

    def f_values(x):
        return problem.f(np.asarray(x, float)[:, None])

    return l2_inner_product(f_values, ls_values, (0.0, 1.0), n_quad=1000)
