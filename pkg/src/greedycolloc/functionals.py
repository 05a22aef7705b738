"""Collocation functionals and the bilinear form between their representers.

A candidate functional is either an interior operator evaluation
(delta_x composed with L) or a Dirichlet boundary evaluation (delta_x).
The Gram form gram(lam, mu) = <v_lam, v_mu> between Riesz representers is
what both the greedy engine and the dense oracle consume; its value is the
doubly / singly / un-operated kernel depending on the kind pair.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import UsageError


class FunctionalKind(enum.Enum):
    INTERIOR_L = "interior"
    BOUNDARY_DIRICHLET = "boundary"


@dataclass(frozen=True)
class Functional:
    """One collocation functional, tagged with its evaluation point and a
    stable index within the candidate set it belongs to."""

    kind: FunctionalKind
    point: np.ndarray
    index: int = -1

    def __post_init__(self):
        object.__setattr__(self, "point", np.atleast_1d(np.asarray(self.point, dtype=float)))


def gram(kernel, op, lam, mu):
    """Gram form <v_lam, v_mu> between two functionals' representers.

    Doubly operated kernel for two interior functionals, singly operated for
    mixed kinds, plain kernel value for two boundary functionals. Symmetric
    in its functional arguments.
    """
    n_interior = (lam.kind is FunctionalKind.INTERIOR_L) + (mu.kind is FunctionalKind.INTERIOR_L)
    if n_interior == 2:
        return kernels.llk_eval(kernel, op, lam.point, mu.point)
    if n_interior == 1:
        return kernels.lk_eval(kernel, op, lam.point, mu.point)
    return kernels.k_eval(kernel, lam.point, mu.point)


def rhs_value(problem, lam):
    """Target value for a functional: f at interior points, g on the boundary."""
    x = lam.point.reshape(1, -1)
    if lam.kind is FunctionalKind.INTERIOR_L:
        return float(np.asarray(problem.f(x)).reshape(-1)[0])
    return float(np.asarray(problem.g(x)).reshape(-1)[0])


def representer_eval(kernel, op, lam, x, apply_L=False):
    """Value of the functional's representer v_lam at x, optionally after L.

    Without L this is the term a coefficient alpha multiplies in the
    collocation ansatz; with L it is what enters interior residuals.
    """
    return float(representer_at_points(kernel, op, lam, np.reshape(x, (1, -1)), apply_L)[0])


def representer_at_points(kernel, op, lam, points, apply_L=False):
    """Vectorized ``representer_eval`` over an (n, d) array of points."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != kernel.dim:
        raise UsageError(
            f"expected points of shape (n, {kernel.dim}), got {points.shape}"
        )
    if lam.point.size != kernel.dim:
        raise UsageError(
            f"functional point has dimension {lam.point.size}, kernel expects {kernel.dim}"
        )
    r = np.linalg.norm(points - lam.point[None, :], axis=1)
    operated = (lam.kind is FunctionalKind.INTERIOR_L) + bool(apply_L)
    if operated == 2:
        return np.asarray(kernels.llk_at_distance(kernel, op, r))
    if operated == 1:
        return np.asarray(kernels.lk_at_distance(kernel, op, r))
    return np.asarray(kernels.k_at_distance(kernel, r))


class CandidateSet:
    """Immutable discretized functional set over interior and boundary clouds.

    Stores flat point/kind arrays so per-iteration sweeps of the greedy
    engine run as whole-array operations.
    """

    def __init__(self, functionals, kernel, op):
        if not functionals:
            raise UsageError("candidate set must not be empty")
        if [lam.index for lam in functionals] != list(range(len(functionals))):
            raise UsageError("candidate indices must be contiguous starting at 0")
        dims = {lam.point.size for lam in functionals}
        if dims != {kernel.dim}:
            raise UsageError(
                f"candidate point dimensions {sorted(dims)} do not match kernel dim {kernel.dim}"
            )
        self.functionals = tuple(functionals)
        self.kernel = kernel
        self.op = op
        self.points = np.vstack([lam.point for lam in functionals])
        self.is_interior = np.array(
            [lam.kind is FunctionalKind.INTERIOR_L for lam in functionals], dtype=bool
        )

    @classmethod
    def from_clouds(cls, kernel, op, interior_points, boundary_points):
        """Build interior-operator functionals followed by boundary ones."""
        interior_points = np.atleast_2d(np.asarray(interior_points, dtype=float))
        boundary_points = np.atleast_2d(np.asarray(boundary_points, dtype=float))
        functionals = []
        for row in interior_points:
            functionals.append(Functional(FunctionalKind.INTERIOR_L, row, len(functionals)))
        for row in boundary_points:
            functionals.append(Functional(FunctionalKind.BOUNDARY_DIRICHLET, row, len(functionals)))
        return cls(functionals, kernel, op)

    def __len__(self):
        return len(self.functionals)

    def gram_column(self, j):
        """Gram values of candidate j against every candidate, shape (M,)."""
        r = np.linalg.norm(self.points - self.points[j][None, :], axis=1)
        out = np.empty(len(self), dtype=float)
        mask = self.is_interior
        if self.is_interior[j]:
            out[mask] = kernels.llk_at_distance(self.kernel, self.op, r[mask])
            out[~mask] = kernels.lk_at_distance(self.kernel, self.op, r[~mask])
        else:
            out[mask] = kernels.lk_at_distance(self.kernel, self.op, r[mask])
            out[~mask] = kernels.k_at_distance(self.kernel, r[~mask])
        return out

    def gram_diagonal(self):
        """gram(lam, lam) for every candidate; constant per kind."""
        interior_diag = kernels.llk_at_distance(self.kernel, self.op, 0.0)
        boundary_diag = kernels.k_at_distance(self.kernel, 0.0)
        return np.where(self.is_interior, float(interior_diag), float(boundary_diag))

    def gram_matrix(self, indices):
        """Dense symmetric Gram matrix over a subset of candidates."""
        indices = list(indices)
        cols = [self.gram_column(j)[indices] for j in indices]
        return np.array(cols).T

    def rhs(self, problem):
        """Right-hand-side vector: f on interior candidates, g on boundary."""
        out = np.empty(len(self), dtype=float)
        mask = self.is_interior
        if mask.any():
            out[mask] = np.asarray(problem.f(self.points[mask]), dtype=float).reshape(-1)
        if (~mask).any():
            out[~mask] = np.asarray(problem.g(self.points[~mask]), dtype=float).reshape(-1)
        return out
