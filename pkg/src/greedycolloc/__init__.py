"""Greedy symmetric kernel collocation for linear elliptic problems.

Builds meshless approximants to Lu = f, u|boundary = g by generalized
kernel interpolation: candidate functionals (interior operator evaluations
and boundary point evaluations) are selected greedily, a Newton basis keeps
per-step updates linear in the candidate count, and dense brute-force
oracles double-check the incremental quantities.
"""

from .errors import (
    ConfigurationError,
    GreedyBreakdownError,
    NumericalBreakdownError,
    PowerExhausted,
    SingularSystemError,
    UsageError,
)
from .functionals import CandidateSet, Functional, FunctionalKind, gram, representer_eval, rhs_value
from .geometry import (
    CustomPointCloud,
    Interval01,
    PacmanDisk,
    UnitSquare,
    fill_distance,
    load_points_csv,
    sample_boundary,
    sample_interior,
)
from .greedy import (
    GreedyState,
    IterationRecord,
    RunReport,
    importance_weights,
    init_state,
    newton_update,
    run_greedy,
    select_next,
    selection_score,
)
from .kernels import (
    PROFILES,
    OperatorSpec,
    RadialKernel,
    k_eval,
    lk_eval,
    llk_eval,
    phi_derivatives,
    with_normalized_amplitude,
)
from .model import CollocationModel, ErrorReport, error_report, evaluate, evaluate_at_points, to_standard_coefficients
from .oracle import DenseSystem, direct_power, direct_solve, fd_check_derivatives, l2_inner_product
from .problems import BUILTIN_PROBLEMS, Problem, builtin_problem
from .reporting import RunConfig, default_config, emit_report, fit_decay_rate, run_experiment

__version__ = "0.1.0"
