"""Command-line entry point.

Subcommands::

    solve        one greedy run of a built-in problem with explicit knobs
    experiment   canned study configurations (pgreedy-square, pacman,
                 beta-scale, failure) with per-study defaults
    validate     quick self-checks: finite-difference agreement of the
                 operator-applied kernel values and incremental-vs-dense
                 agreement on small random runs

Exit codes: 0 success, 1 configuration/validation failure, 2 numerical
breakdown.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .errors import ConfigurationError, NumericalBreakdownError, UsageError
from .kernels import PROFILES, OperatorSpec, RadialKernel
from .oracle import direct_power, direct_solve, fd_check_derivatives
from .problems import BUILTIN_PROBLEMS
from .reporting import RunConfig, default_config, run_experiment


def _add_run_flags(parser):
    parser.add_argument("--kernel", choices=PROFILES, default=None, help="radial profile")
    parser.add_argument("--eps", type=float, default=None, help="shape parameter")
    parser.add_argument("--amplitude", type=float, default=None, help="kernel amplitude")
    parser.add_argument(
        "--beta",
        action="append",
        default=None,
        help="selection exponent in [0, inf), or 'inf'; repeat for several runs",
    )
    parser.add_argument("--n-max", type=int, default=None, help="maximum number of selections")
    parser.add_argument("--seed", type=int, default=0, help="sampling seed")
    parser.add_argument("--interior-n", type=int, default=None, help="interior candidate count")
    parser.add_argument("--boundary-n", type=int, default=None, help="boundary candidate count")
    parser.add_argument("--test-interior-n", type=int, default=None)
    parser.add_argument("--test-boundary-n", type=int, default=None)
    parser.add_argument("--tol-power", type=float, default=None, help="power value floor")
    parser.add_argument("--tol-residual", type=float, default=None, help="residual stop value")
    parser.add_argument(
        "--reweight",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="damp interior selection scores by the operator-kernel diagonal",
    )
    parser.add_argument("--out", default="runs", help="output directory for reports")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="greedycolloc",
        description="Greedy symmetric kernel collocation for linear elliptic problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run one problem with explicit settings")
    solve.add_argument("--problem", choices=BUILTIN_PROBLEMS, required=True)
    _add_run_flags(solve)

    experiment = sub.add_parser("experiment", help="run a canned study")
    experiment.add_argument("name", choices=BUILTIN_PROBLEMS)
    _add_run_flags(experiment)

    validate = sub.add_parser("validate", help="run the oracle self-checks")
    validate.add_argument("--seed", type=int, default=0)
    return parser


def _config_from_args(args, problem_id):
    overrides = dict(
        kernel=args.kernel,
        eps=args.eps,
        amplitude=args.amplitude,
        betas=args.beta,
        n_max=args.n_max,
        seed=args.seed,
        interior_n=args.interior_n,
        boundary_n=args.boundary_n,
        test_interior_n=args.test_interior_n,
        test_boundary_n=args.test_boundary_n,
        tol_power=args.tol_power,
        tol_residual=args.tol_residual,
        reweight=args.reweight,
        out=args.out,
    )
    return default_config(problem_id, **overrides)


def _cmd_run(args, problem_id):
    config = _config_from_args(args, problem_id)
    written = run_experiment(config)
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_validate(args):
    from .functionals import CandidateSet
    from .greedy import run_greedy
    from .problems import builtin_problem

    rng = np.random.Generator(np.random.PCG64(args.seed))
    failures = 0

    print("finite-difference agreement of operator-applied kernel values:")
    for profile in PROFILES:
        for dim in (1, 2):
            kernel = RadialKernel(profile, eps=1.0, dim=dim)
            op = OperatorSpec(1.0, 0.0)
            samples = []
            for _ in range(25):
                x = rng.uniform(0, 1, size=dim)
                direction = rng.normal(size=dim)
                direction /= np.linalg.norm(direction)
                samples.append((x, x + direction * rng.uniform(0.05, 0.9)))
            worst = fd_check_derivatives(kernel, op, samples, step=1e-2)
            limit = 1e-3 if profile == "wendland32" else 1e-5
            ok = worst <= limit
            failures += not ok
            print(f"  {profile:<11} d={dim}: max rel error {worst:.3e} "
                  f"({'ok' if ok else f'EXCEEDS {limit:g}'})")

    print("incremental greedy vs dense solve on a small run:")
    problem = builtin_problem("beta-scale", interior_n=60, seed=args.seed)
    kernel = RadialKernel("matern2", dim=1)
    model, report = run_greedy(problem, kernel, beta=1.0, n_max=15, tol_power=1e-3)
    candidates = CandidateSet.from_clouds(
        kernel, problem.op, problem.interior_cloud, problem.boundary_cloud
    )
    selected = [lam.index for lam in model.selected]
    alpha = direct_solve(candidates, selected, candidates.rhs(problem))
    coeff_err = float(np.max(np.abs(alpha - model.alpha)) / np.max(np.abs(alpha)))
    probe = candidates.functionals[0]
    power_err = abs(
        direct_power(candidates, selected, probe)
        - float(np.sqrt(_state_power(problem, kernel, selected, probe)))
    )
    ok = coeff_err <= 1e-8
    failures += not ok
    print(f"  coefficient agreement: {coeff_err:.3e} ({'ok' if ok else 'EXCEEDS 1e-8'})")
    print(f"  power at candidate 0 via dense projection: {power_err:.3e} (informational)")
    return 1 if failures else 0


def _state_power(problem, kernel, selected, probe):
    from .functionals import CandidateSet
    from .greedy import init_state, newton_update

    candidates = CandidateSet.from_clouds(
        kernel, problem.op, problem.interior_cloud, problem.boundary_cloud
    )
    state = init_state(candidates, candidates.rhs(problem))
    for index in selected:
        newton_update(state, index)
    return state.p2[probe.index]


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "solve":
            return _cmd_run(args, args.problem)
        if args.command == "experiment":
            return _cmd_run(args, args.name)
        return _cmd_validate(args)
    except (ConfigurationError, UsageError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except NumericalBreakdownError as err:
        print(f"numerical breakdown: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
