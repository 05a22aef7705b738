"""Boundary value problems: data functions, candidate clouds, built-ins.

Four studies ship as built-ins (identifiers accepted case-insensitively):

``pgreedy-square``
    -Laplace u = 0 on (0,1)^2, u = 0 on the edges. Data-free; meant for
    power-only selection, where the point distribution itself is the result.
``pacman``
    -Laplace u = 0 on a pacman-shaped disk, u = x1*x2 + 1 on the boundary,
    with known solution u = x1*x2 + 1.
``beta-scale``
    -u'' = -x^0.51 on (0,1) with u(0) = 0, u(1) = 1/(2.51*1.51) and known
    solution u = x^2.51 / (2.51*1.51).
``failure``
    (-Laplace - pi^2) u = sin(pi x) on (0,1), u = 0 at both ends. The first
    Dirichlet eigenvalue makes the right-hand side orthogonal to the
    operator range, so no solution exists; candidates are a fixed grid of
    1001 equidistant points including the endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConfigurationError
from .geometry import Geometry, Interval01, PacmanDisk, UnitSquare, sample_boundary, sample_interior
from .kernels import OperatorSpec

BUILTIN_PROBLEMS = ("pgreedy-square", "pacman", "beta-scale", "failure")


@dataclass(eq=False)
class Problem:
    """A discretized linear boundary value problem.

    ``f`` and ``g`` map an (n, d) point array to n values; ``true_solution``
    is optional. The candidate clouds are fixed at construction so runs are
    reproducible from (problem id, counts, seed) alone.
    """

    geometry: Geometry
    op: OperatorSpec
    f: Callable[[np.ndarray], np.ndarray]
    g: Callable[[np.ndarray], np.ndarray]
    interior_cloud: np.ndarray
    boundary_cloud: np.ndarray
    seed: int
    true_solution: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = "custom"

    def __post_init__(self):
        self.interior_cloud = np.atleast_2d(np.asarray(self.interior_cloud, dtype=float))
        self.boundary_cloud = np.atleast_2d(np.asarray(self.boundary_cloud, dtype=float))
        inside = self.geometry.contains_interior(self.interior_cloud)
        if not np.all(inside):
            bad = int(np.flatnonzero(~inside)[0])
            raise ConfigurationError(
                f"interior cloud point {bad} is not strictly inside the domain: "
                f"{self.interior_cloud[bad]}"
            )
        on_bdry = self.geometry.on_boundary(self.boundary_cloud)
        if not np.all(on_bdry):
            bad = int(np.flatnonzero(~on_bdry)[0])
            raise ConfigurationError(
                f"boundary cloud point {bad} is not on the boundary: {self.boundary_cloud[bad]}"
            )

    @property
    def dim(self):
        return self.interior_cloud.shape[1]


def _zero(points):
    return np.zeros(np.atleast_2d(points).shape[0])


def _bilinear_plus_one(points):
    p = np.atleast_2d(points)
    return p[:, 0] * p[:, 1] + 1.0


_SCALE_EXPONENT = 2.51
_SCALE_DENOM = 2.51 * 1.51


def _scale_rhs(points):
    x = np.atleast_2d(points)[:, 0]
    return -np.power(x, _SCALE_EXPONENT - 2.0)


def _scale_solution(points):
    x = np.atleast_2d(points)[:, 0]
    return np.power(x, _SCALE_EXPONENT) / _SCALE_DENOM


def _scale_boundary(points):
    return _scale_solution(points)


def _sine_rhs(points):
    x = np.atleast_2d(points)[:, 0]
    return np.sin(math.pi * x)


def builtin_problem(problem_id, interior_n=None, boundary_n=None, seed=0):
    """Construct one of the built-in problems with freshly sampled clouds.

    ``interior_n`` / ``boundary_n`` default to the study's canonical counts;
    the failure study ignores them and always uses its fixed grid.
    """
    key = str(problem_id).strip().lower()
    if key in ("pgreedy-square", "pgreedysquare"):
        geometry = UnitSquare()
        interior_n = 10_000 if interior_n is None else interior_n
        boundary_n = 1_000 if boundary_n is None else boundary_n
        return Problem(
            geometry=geometry,
            op=OperatorSpec(1.0, 0.0),
            f=_zero,
            g=_zero,
            interior_cloud=sample_interior(geometry, interior_n, seed),
            boundary_cloud=sample_boundary(geometry, boundary_n, seed + 1),
            seed=seed,
            name="pgreedy-square",
        )
    if key in ("pacman", "pacmanlaplace"):
        geometry = PacmanDisk(radius=1.0, half_angle=math.pi / 8)
        interior_n = 50_000 if interior_n is None else interior_n
        boundary_n = 2_000 if boundary_n is None else boundary_n
        return Problem(
            geometry=geometry,
            op=OperatorSpec(1.0, 0.0),
            f=_zero,
            g=_bilinear_plus_one,
            true_solution=_bilinear_plus_one,
            interior_cloud=sample_interior(geometry, interior_n, seed),
            boundary_cloud=sample_boundary(geometry, boundary_n, seed + 1),
            seed=seed,
            name="pacman",
        )
    if key in ("beta-scale", "betascale1d", "beta-scale-1d"):
        geometry = Interval01()
        interior_n = 498 if interior_n is None else interior_n
        return Problem(
            geometry=geometry,
            op=OperatorSpec(1.0, 0.0),
            f=_scale_rhs,
            g=_scale_boundary,
            true_solution=_scale_solution,
            interior_cloud=sample_interior(geometry, interior_n, seed),
            boundary_cloud=np.array([[0.0], [1.0]]),
            seed=seed,
            name="beta-scale",
        )
    if key in ("failure", "nosolution1d", "no-solution-1d"):
        geometry = Interval01()
        grid = np.linspace(0.0, 1.0, 1001)
        return Problem(
            geometry=geometry,
            op=OperatorSpec(1.0, -math.pi**2),
            f=_sine_rhs,
            g=_zero,
            interior_cloud=grid[1:-1, None],
            boundary_cloud=np.array([[0.0], [1.0]]),
            seed=seed,
            name="failure",
        )
    raise ConfigurationError(
        f"unknown problem id {problem_id!r}; expected one of {BUILTIN_PROBLEMS}"
    )
