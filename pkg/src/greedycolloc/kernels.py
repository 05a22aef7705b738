"""Radial kernel profiles and operator-applied kernel values.

The kernels have the form k(x, y) = s * phi(eps * ||x - y||) with a radial
profile phi, shape parameter eps > 0 and amplitude s > 0. Five profiles are
supported::

    gaussian    phi(r) = exp(-r^2)
    wendland32  phi(r) = (1-r)_+^6 (35 r^2 + 18 r + 3)
    wendland33  phi(r) = (1-r)_+^8 (32 r^3 + 25 r^2 + 8 r + 1)
    matern2     phi(r) = (3 + 3 r + r^2) exp(-r)         (quadratic Matern)
    matern3     phi(r) = (15 + 15 r + 6 r^2 + r^3) exp(-r)   (cubic Matern)

For a second-order operator L = a*(-Laplace) + c*id this module evaluates
the three kernel images needed by symmetric collocation:

* ``k_eval``:   k(x, y)
* ``lk_eval``:  (L^(2) k)(x, y), L applied to the second argument; equal to
  (L^(1) k)(x, y) for these translation-invariant even kernels, so only one
  function is exposed.
* ``llk_eval``: (L^(1) L^(2) k)(x, y).

Laplacians of radial functions are computed from profile derivatives via
Laplace phi(||.||) (r) = phi''(r) + (d-1) phi'(r) / r, applying the formula
twice for the bilaplacian. Convention for derivative bookkeeping, decided
once: ``phi_derivatives`` returns derivatives with respect to the *scaled*
argument t = eps * r, while the distance-level helpers (``k_at_distance``
and friends) apply all eps chain-rule factors internally (eps^2 per
Laplacian), so their callers work with actual distances throughout.

The quotients phi'(r)/r and the nested bilaplacian terms are removable
singularities at r = 0; for eps*r < 1e-4 they are evaluated through the
profile's Taylor expansion at zero (exact for the Wendland polynomials).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import ConfigurationError, UsageError

PROFILES = ("gaussian", "wendland32", "wendland33", "matern2", "matern3")

# Scaled argument below which series evaluation replaces direct quotients.
_SERIES_CUTOFF = 1e-4
_N_TAYLOR = 14


@dataclass(frozen=True)
class RadialKernel:
    """A radial kernel k(x,y) = amplitude * phi(eps * ||x-y||) on R^dim."""

    profile: str
    eps: float = 1.0
    amplitude: float = 1.0
    dim: int = 2

    def __post_init__(self):
        name = self.profile.lower()
        if name not in PROFILES:
            raise ConfigurationError(
                f"unknown kernel profile {self.profile!r}; expected one of {PROFILES}"
            )
        object.__setattr__(self, "profile", name)
        if not (self.eps > 0):
            raise ConfigurationError(f"shape parameter must be positive, got {self.eps}")
        if not (self.amplitude > 0):
            raise ConfigurationError(f"amplitude must be positive, got {self.amplitude}")
        if self.dim < 1:
            raise ConfigurationError(f"dimension must be >= 1, got {self.dim}")


@dataclass(frozen=True)
class OperatorSpec:
    """L = laplace_coeff * (-Laplace) + id_coeff * id."""

    laplace_coeff: float = 1.0
    id_coeff: float = 0.0

    def __post_init__(self):
        if self.laplace_coeff == 0.0 and self.id_coeff == 0.0:
            raise ConfigurationError("operator coefficients must not both be zero")


class _Profile:
    """Derivative and Taylor machinery for one radial profile.

    phi^(j)(t) = polyval(t, deriv_polys[j]) * base(t), with base 1 for the
    compactly supported polynomials (zero outside t < 1), exp(-t) for the
    Matern family and exp(-t^2) for the Gaussian.
    """

    def __init__(self, base, poly, taylor):
        self.base = base
        self.compact = base == "one"
        # Polynomial factors of phi and its first four derivatives.
        polys = [np.asarray(poly, dtype=float)]
        for _ in range(4):
            polys.append(self._differentiate(polys[-1]))
        self.deriv_polys = polys
        tay = np.zeros(_N_TAYLOR)
        tay[: len(taylor)] = taylor[:_N_TAYLOR]
        self.taylor = tay
        # Odd low-order terms would make the radial function non-C^4 at 0.
        assert abs(tay[1]) < 1e-12 and abs(tay[3]) < 1e-12
        k = np.arange(_N_TAYLOR)
        # phi'(t)/t, phi'''(t)/t and (phi''(t) - phi'(t)/t)/t^2 as series.
        self.series_d1_over_t = (k * tay)[2:]
        self.series_d3_over_t = (k * (k - 1) * (k - 2) * tay)[4:]
        self.series_dd_gap = (k * (k - 2) * tay)[4:]

    def _differentiate(self, poly):
        coeffs = npoly.polyder(poly)
        if self.base == "exp":
            # d/dt [p(t) e^-t] = (p'(t) - p(t)) e^-t
            return npoly.polysub(coeffs, poly)
        if self.base == "gauss":
            # d/dt [p(t) e^-t^2] = (p'(t) - 2t p(t)) e^-t^2
            return npoly.polysub(coeffs, npoly.polymulx(2.0 * poly))
        return coeffs

    def _base_values(self, t):
        if self.base == "exp":
            return np.exp(-t)
        if self.base == "gauss":
            return np.exp(-(t**2))
        return np.ones_like(t)

    def derivative(self, t, order):
        """phi^(order)(t) with respect to the scaled argument, vectorized."""
        t = np.asarray(t, dtype=float)
        val = npoly.polyval(t, self.deriv_polys[order]) * self._base_values(t)
        if self.compact:
            val = np.where(t < 1.0, val, 0.0)
        return val

    def laplace(self, t, dim):
        """phi''(t) + (dim-1) phi'(t)/t, the scaled radial Laplacian."""
        t = np.asarray(t, dtype=float)
        small = t < _SERIES_CUTOFF
        ts = np.where(small, t, 1.0)
        tl = np.where(small, 1.0, t)
        quot = np.where(
            small,
            npoly.polyval(ts, self.series_d1_over_t),
            self.derivative(tl, 1) / tl,
        )
        return self.derivative(t, 2) + (dim - 1) * quot

    def bilaplace(self, t, dim):
        """Radial Laplacian applied twice, in the scaled argument.

        Equals phi'''' + 2(d-1) phi'''/t + (d-1)(d-3) (phi'' - phi'/t)/t^2.
        """
        t = np.asarray(t, dtype=float)
        small = t < _SERIES_CUTOFF
        ts = np.where(small, t, 1.0)
        tl = np.where(small, 1.0, t)
        d3_over_t = np.where(
            small,
            npoly.polyval(ts, self.series_d3_over_t),
            self.derivative(tl, 3) / tl,
        )
        gap = np.where(
            small,
            npoly.polyval(ts, self.series_dd_gap),
            (self.derivative(tl, 2) - self.derivative(tl, 1) / tl) / tl**2,
        )
        out = self.derivative(t, 4) + 2 * (dim - 1) * d3_over_t + (dim - 1) * (dim - 3) * gap
        if self.compact:
            out = np.where(t < 1.0, out, 0.0)
        return out


def _exp_series(n):
    return np.array([(-1.0) ** m / math.factorial(m) for m in range(n)])


def _gauss_series(n):
    coeffs = np.zeros(n)
    for m in range(0, n, 2):
        coeffs[m] = (-1.0) ** (m // 2) / math.factorial(m // 2)
    return coeffs


_WENDLAND32 = [3.0, 0.0, -28.0, 0.0, 210.0, -448.0, 420.0, -192.0, 35.0]
_WENDLAND33 = [1.0, 0.0, -11.0, 0.0, 66.0, 0.0, -462.0, 1056.0, -1155.0, 704.0, -231.0, 32.0]
_MATERN2 = [3.0, 3.0, 1.0]
_MATERN3 = [15.0, 15.0, 6.0, 1.0]

_PROFILES = {
    "gaussian": _Profile("gauss", [1.0], _gauss_series(_N_TAYLOR)),
    "wendland32": _Profile("one", _WENDLAND32, np.array(_WENDLAND32)),
    "wendland33": _Profile("one", _WENDLAND33, np.array(_WENDLAND33)),
    "matern2": _Profile("exp", _MATERN2, npoly.polymul(_MATERN2, _exp_series(_N_TAYLOR))[:_N_TAYLOR]),
    "matern3": _Profile("exp", _MATERN3, npoly.polymul(_MATERN3, _exp_series(_N_TAYLOR))[:_N_TAYLOR]),
}


def _profile(name):
    try:
        return _PROFILES[name.lower()]
    except KeyError:
        raise ConfigurationError(
            f"unknown kernel profile {name!r}; expected one of {PROFILES}"
        ) from None


def phi_derivatives(profile, eps, r):
    """Profile value and first four derivatives at the scaled argument.

    Parameters
    ----------
    profile : str
        One of ``PROFILES``.
    eps : float
        Shape parameter; the profile is evaluated at t = eps * r.
    r : float or ndarray
        Nonnegative distance(s).

    Returns
    -------
    tuple of five floats (or arrays): (phi, phi', phi'', phi''', phi'''')
    at t = eps * r, derivatives taken with respect to t. Chain-rule factors
    of eps are *not* included here; the distance-level helpers apply them.
    """
    p = _profile(profile)
    t = eps * np.asarray(r, dtype=float)
    if np.any(t < 0):
        raise UsageError("distances must be nonnegative")
    return tuple(p.derivative(t, j) for j in range(5))


# ---------------------------------------------------------------------------
# Distance-level evaluation (vectorized over arrays of distances).
# ---------------------------------------------------------------------------


def k_at_distance(kernel, r):
    """k value at distance r: amplitude * phi(eps * r)."""
    p = _profile(kernel.profile)
    return kernel.amplitude * p.derivative(kernel.eps * np.asarray(r, float), 0)


def laplace_k_at_distance(kernel, r):
    """(Laplace k)(x, y) at r = ||x - y||, in either argument."""
    p = _profile(kernel.profile)
    t = kernel.eps * np.asarray(r, float)
    return kernel.amplitude * kernel.eps**2 * p.laplace(t, kernel.dim)


def bilaplace_k_at_distance(kernel, r):
    """(Laplace^(1) Laplace^(2) k)(x, y) at r = ||x - y||."""
    p = _profile(kernel.profile)
    t = kernel.eps * np.asarray(r, float)
    return kernel.amplitude * kernel.eps**4 * p.bilaplace(t, kernel.dim)


def lk_at_distance(kernel, op, r):
    """(L^(2) k)(x, y) at r = ||x - y|| for L = a*(-Laplace) + c*id."""
    a, c = op.laplace_coeff, op.id_coeff
    out = 0.0
    if a != 0.0:
        out = -a * laplace_k_at_distance(kernel, r)
    if c != 0.0:
        out = out + c * k_at_distance(kernel, r)
    return out


def llk_at_distance(kernel, op, r):
    """(L^(1) L^(2) k)(x, y) at r = ||x - y||.

    Expands to a^2 * Laplace^(1)Laplace^(2) k - 2ac * Laplace k + c^2 * k,
    using that the Laplacian in either argument agrees for these kernels.
    """
    a, c = op.laplace_coeff, op.id_coeff
    out = 0.0
    if a != 0.0:
        out = a**2 * bilaplace_k_at_distance(kernel, r)
        if c != 0.0:
            out = out - 2.0 * a * c * laplace_k_at_distance(kernel, r)
    if c != 0.0:
        out = out + c**2 * k_at_distance(kernel, r)
    return out


# ---------------------------------------------------------------------------
# Point-level evaluation.
# ---------------------------------------------------------------------------


def _distance(kernel, x, y):
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if x.size != kernel.dim or y.size != kernel.dim:
        raise UsageError(
            f"points of dimension {x.size} and {y.size} passed to a kernel on R^{kernel.dim}"
        )
    return float(np.linalg.norm(x - y))


def k_eval(kernel, x, y):
    """Kernel value k(x, y)."""
    return float(k_at_distance(kernel, _distance(kernel, x, y)))


def lk_eval(kernel, op, x, y):
    """(L^(2) k)(x, y); identical to (L^(1) k)(x, y) by evenness."""
    return float(lk_at_distance(kernel, op, _distance(kernel, x, y)))


def llk_eval(kernel, op, x, y):
    """(L^(1) L^(2) k)(x, y)."""
    return float(llk_at_distance(kernel, op, _distance(kernel, x, y)))


def with_normalized_amplitude(kernel, op):
    """Rescale the amplitude so all representer norms are at most one.

    Sets amplitude = 1 / max((L^(1)L^(2)k)(x,x), k(x,x)) evaluated at
    coincident points with unit amplitude. Optional; nothing in the solver
    requires it.
    """
    unit = replace(kernel, amplitude=1.0)
    top = max(float(llk_at_distance(unit, op, 0.0)), float(k_at_distance(unit, 0.0)))
    if top <= 0:
        raise ConfigurationError("cannot normalize: nonpositive diagonal values")
    return replace(kernel, amplitude=1.0 / top)
