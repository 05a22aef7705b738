"""Independent brute-force checks for the incremental machinery.

Everything here recomputes from first principles what the greedy engine
maintains incrementally: a dense symmetric solve of the collocation system,
the power function through its explicit projection formula, high-order
finite differences for the operator-applied kernel values, and Simpson
quadrature for L2 inner products. None of it shares code paths with the
incremental updates it is meant to validate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import SingularSystemError, UsageError
from .functionals import gram
from .kernels import k_eval, lk_eval, llk_eval

_PIVOT_RTOL = 1e-13


@dataclass
class DenseSystem:
    """Symmetric Gram matrix over selected functionals and its right side."""

    G: np.ndarray
    b: np.ndarray


def assemble_dense_system(candidates, selected, rhs):
    selected = list(selected)
    if not selected:
        raise UsageError("need at least one selected functional")
    rhs = np.asarray(rhs, dtype=float)
    b = rhs[selected] if rhs.shape == (len(candidates),) else rhs
    if np.shape(b) != (len(selected),):
        raise UsageError("rhs must cover the full candidate set or the selection")
    return DenseSystem(G=candidates.gram_matrix(selected), b=np.asarray(b, dtype=float))


def _cholesky_or_raise(G):
    """Lower Cholesky factor with an explicit pivot floor.

    Reports the smallest pivot encountered; a pivot below
    ``_PIVOT_RTOL * max diagonal`` declares the system singular.
    """
    G = np.asarray(G, dtype=float)
    n = G.shape[0]
    tol = _PIVOT_RTOL * float(np.max(np.diag(G)))
    L = np.zeros_like(G)
    smallest = math.inf
    for j in range(n):
        pivot = G[j, j] - L[j, :j] @ L[j, :j]
        smallest = min(smallest, pivot)
        if pivot <= tol:
            raise SingularSystemError(
                f"symmetric factorization failed at column {j}: pivot {pivot:.3e} "
                f"below tolerance {tol:.3e}",
                smallest_pivot=smallest,
            )
        L[j, j] = math.sqrt(pivot)
        if j + 1 < n:
            L[j + 1 :, j] = (G[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]) / L[j, j]
    return L


def direct_solve(candidates, selected, rhs):
    """Standard coefficients from a dense solve of the collocation system."""
    system = assemble_dense_system(candidates, selected, rhs)
    L = _cholesky_or_raise(system.G)
    y = solve_triangular(L, system.b, lower=True)
    return solve_triangular(L.T, y, lower=False)


def direct_power(candidates, selected, lam):
    """Power value of a functional against a selected set, by projection.

    The squared value is gram(lam, lam) minus the squared norm of the
    projection onto the selected representers; tiny negative results from
    cancellation are clamped to zero.
    """
    selected = list(selected)
    diag = gram(candidates.kernel, candidates.op, lam, lam)
    if not selected:
        return math.sqrt(diag)
    if 0 <= lam.index < len(candidates) and candidates.functionals[lam.index] is lam:
        g_vec = candidates.gram_column(lam.index)[selected]
    else:
        g_vec = np.array(
            [gram(candidates.kernel, candidates.op, lam, candidates.functionals[j]) for j in selected]
        )
    L = _cholesky_or_raise(candidates.gram_matrix(selected))
    w = solve_triangular(L, g_vec, lower=True)
    return math.sqrt(max(diag - float(w @ w), 0.0))


# ---------------------------------------------------------------------------
# Finite-difference validation of the operator-applied kernel values.
# ---------------------------------------------------------------------------


def _fd_laplacian(func, point, step):
    """Fourth-order five-point Laplacian of func at point."""
    point = np.asarray(point, dtype=float)
    total = 0.0
    for axis in range(point.size):
        offset = np.zeros_like(point)
        offset[axis] = step
        total += (
            -func(point + 2 * offset)
            + 16.0 * func(point + offset)
            - 30.0 * func(point)
            + 16.0 * func(point - offset)
            - func(point - 2 * offset)
        ) / (12.0 * step**2)
    return total


def fd_check_derivatives(kernel, op, samples, step=1e-2):
    """Worst normwise relative disagreement between analytic operator-kernel
    values and finite-difference stencils of the plain kernel.

    For each (x, y) pair both the singly and the doubly operated values are
    compared against central-difference Laplacians of k. The return value is
    max |analytic - fd| / max |analytic| over all comparisons, i.e. the error
    is measured relative to the magnitude scale of the sampled values.
    """
    if not (step > 0):
        raise UsageError("finite-difference step must be positive")
    a, c = op.laplace_coeff, op.id_coeff
    analytic = []
    approx = []
    for x, y in samples:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)

        lap_y = _fd_laplacian(lambda q: k_eval(kernel, x, q), y, step)
        analytic.append(lk_eval(kernel, op, x, y))
        approx.append(a * (-lap_y) + c * k_eval(kernel, x, y))

        laplap = _fd_laplacian(
            lambda p: _fd_laplacian(lambda q: k_eval(kernel, p, q), y, step), x, step
        )
        lap_x = _fd_laplacian(lambda p: k_eval(kernel, p, y), x, step)
        analytic.append(llk_eval(kernel, op, x, y))
        approx.append(
            a**2 * laplap + a * c * (-lap_x) + a * c * (-lap_y) + c**2 * k_eval(kernel, x, y)
        )
    analytic = np.array(analytic)
    approx = np.array(approx)
    scale = float(np.max(np.abs(analytic)))
    if scale == 0.0:
        return float(np.max(np.abs(approx)))
    return float(np.max(np.abs(analytic - approx)) / scale)


def l2_inner_product(f, h, interval, n_quad=1000):
    """Composite Simpson approximation of the L2 inner product of f and h.

    ``n_quad`` is the (even) number of panels over the interval.
    """
    if n_quad < 2 or n_quad % 2 != 0:
        raise UsageError(f"Simpson rule needs an even panel count >= 2, got {n_quad}")
    lo, hi = float(interval[0]), float(interval[1])
    x = np.linspace(lo, hi, n_quad + 1)
    weights = np.ones(n_quad + 1)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    values = np.asarray(f(x), dtype=float) * np.asarray(h(x), dtype=float)
    return float((hi - lo) / (3.0 * n_quad) * (weights @ values))
