"""Domain geometries, seeded point samplers and fill-distance diagnostics.

All sampling is driven by numpy's PCG64 generator seeded with an explicit
64-bit integer; the generator identity is part of the external contract, so
identical (geometry, n, seed) triples reproduce point clouds bit for bit.
Interior sampling rejects from the bounding box; boundary sampling is
uniform with respect to arc length (a boundary component is chosen with
probability proportional to its length, then the position along it is
uniform).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .errors import ConfigurationError, UsageError

_BOUNDARY_TOL = 1e-12
_MAX_REJECTION_ROUNDS = 1000


class Geometry:
    """Base interface: membership predicates plus bounding box."""

    dim = None

    def contains_interior(self, points):
        raise NotImplementedError

    def on_boundary(self, points, tol=_BOUNDARY_TOL):
        raise NotImplementedError

    def bounding_box(self):
        """(lower, upper) corner arrays of an axis-aligned box."""
        raise NotImplementedError

    def boundary_components(self):
        """List of (length, map) pairs; map sends u in [0,1) to points."""
        raise NotImplementedError


@dataclass(frozen=True)
class Interval01(Geometry):
    """The open unit interval with boundary {0, 1}."""

    dim = 1

    def contains_interior(self, points):
        x = np.atleast_2d(points)[:, 0]
        return (x > 0.0) & (x < 1.0)

    def on_boundary(self, points, tol=_BOUNDARY_TOL):
        x = np.atleast_2d(points)[:, 0]
        return (np.abs(x) <= tol) | (np.abs(x - 1.0) <= tol)

    def bounding_box(self):
        return np.array([0.0]), np.array([1.0])

    def boundary_components(self):
        # Degenerate; boundary sampling enumerates the two endpoints instead.
        return []


@dataclass(frozen=True)
class UnitSquare(Geometry):
    """(0,1)^2 with the four edges as boundary."""

    dim = 2

    def contains_interior(self, points):
        p = np.atleast_2d(points)
        return np.all((p > 0.0) & (p < 1.0), axis=1)

    def on_boundary(self, points, tol=_BOUNDARY_TOL):
        p = np.atleast_2d(points)
        inside_closed = np.all((p >= -tol) & (p <= 1.0 + tol), axis=1)
        edge_dist = np.minimum(np.min(np.abs(p), axis=1), np.min(np.abs(1.0 - p), axis=1))
        return inside_closed & (edge_dist <= tol)

    def bounding_box(self):
        return np.zeros(2), np.ones(2)

    def boundary_components(self):
        def edge(p0, p1):
            p0, p1 = np.asarray(p0, float), np.asarray(p1, float)
            return 1.0, lambda u: p0[None, :] + np.asarray(u)[:, None] * (p1 - p0)[None, :]

        return [
            edge((0, 0), (1, 0)),
            edge((1, 0), (1, 1)),
            edge((1, 1), (0, 1)),
            edge((0, 1), (0, 0)),
        ]


@dataclass(frozen=True)
class PacmanDisk(Geometry):
    """Disk of given radius with the sector |theta| < half_angle removed.

    Interior: 0 < r < radius and half_angle < theta < 2*pi - half_angle.
    Boundary: the outer arc plus the two radial cut segments meeting at the
    cone tip in the origin.
    """

    radius: float = 1.0
    half_angle: float = math.pi / 8

    dim = 2

    def __post_init__(self):
        if not (self.radius > 0) or not (0 < self.half_angle < math.pi):
            raise ConfigurationError("need radius > 0 and half_angle in (0, pi)")

    def _polar(self, points):
        p = np.atleast_2d(points)
        r = np.hypot(p[:, 0], p[:, 1])
        theta = np.mod(np.arctan2(p[:, 1], p[:, 0]), 2.0 * math.pi)
        return r, theta

    def contains_interior(self, points):
        r, theta = self._polar(points)
        return (
            (r > 0.0)
            & (r < self.radius)
            & (theta > self.half_angle)
            & (theta < 2.0 * math.pi - self.half_angle)
        )

    def on_boundary(self, points, tol=_BOUNDARY_TOL):
        r, theta = self._polar(points)
        in_wedge = (theta >= self.half_angle - tol) & (theta <= 2.0 * math.pi - self.half_angle + tol)
        on_arc = in_wedge & (np.abs(r - self.radius) <= tol)
        on_cut = (r <= self.radius + tol) & (
            (np.abs(theta - self.half_angle) <= tol)
            | (np.abs(theta - (2.0 * math.pi - self.half_angle)) <= tol)
            | (r <= tol)
        )
        return on_arc | on_cut

    def bounding_box(self):
        return np.array([-self.radius, -self.radius]), np.array([self.radius, self.radius])

    def boundary_components(self):
        R, th0 = self.radius, self.half_angle
        arc_len = R * (2.0 * math.pi - 2.0 * th0)

        def on_ray(angle):
            direction = np.array([math.cos(angle), math.sin(angle)])
            return lambda u: np.asarray(u)[:, None] * R * direction[None, :]

        def on_arc(u):
            theta = th0 + np.asarray(u) * (2.0 * math.pi - 2.0 * th0)
            return R * np.column_stack([np.cos(theta), np.sin(theta)])

        return [
            (R, on_ray(th0)),
            (arc_len, on_arc),
            (R, on_ray(2.0 * math.pi - th0)),
        ]


@dataclass(frozen=True, eq=False)
class CustomPointCloud(Geometry):
    """Geometry defined only through explicit point clouds; membership is
    cloud membership, sampling draws from the clouds without replacement
    semantics (subsampling)."""

    interior: np.ndarray
    boundary: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "interior", np.atleast_2d(np.asarray(self.interior, float)))
        object.__setattr__(self, "boundary", np.atleast_2d(np.asarray(self.boundary, float)))
        if self.interior.shape[1] != self.boundary.shape[1]:
            raise ConfigurationError("interior and boundary clouds must share a dimension")
        object.__setattr__(self, "dim", self.interior.shape[1])

    def _member(self, points, cloud, tol):
        points = np.atleast_2d(points)
        if cloud.size == 0:
            return np.zeros(points.shape[0], dtype=bool)
        dist, _ = cKDTree(cloud).query(points)
        return dist <= tol

    def contains_interior(self, points, tol=_BOUNDARY_TOL):
        return self._member(points, self.interior, tol)

    def on_boundary(self, points, tol=_BOUNDARY_TOL):
        return self._member(points, self.boundary, tol)


def _rng(seed):
    return np.random.Generator(np.random.PCG64(seed))


def sample_interior(geometry, n, seed):
    """n i.i.d. uniform interior points by bounding-box rejection."""
    if n < 1:
        raise UsageError("need n >= 1 interior samples")
    if isinstance(geometry, CustomPointCloud):
        if geometry.interior.shape[0] == 0:
            raise ConfigurationError("custom geometry has no interior points to sample")
        idx = _rng(seed).choice(geometry.interior.shape[0], size=min(n, geometry.interior.shape[0]), replace=False)
        return geometry.interior[np.sort(idx)]
    rng = _rng(seed)
    lower, upper = geometry.bounding_box()
    out = np.empty((0, geometry.dim))
    for _ in range(_MAX_REJECTION_ROUNDS):
        need = n - out.shape[0]
        if need <= 0:
            break
        draw = rng.uniform(lower, upper, size=(max(2 * need, 16), geometry.dim))
        keep = draw[geometry.contains_interior(draw)]
        out = np.vstack([out, keep])
    if out.shape[0] < n:
        raise ConfigurationError(
            f"rejection sampling accepted {out.shape[0]}/{n} points; geometry looks degenerate"
        )
    return out[:n]


def sample_boundary(geometry, n, seed):
    """n boundary points, uniform with respect to arc length."""
    if n < 1:
        raise UsageError("need n >= 1 boundary samples")
    if isinstance(geometry, Interval01):
        return np.array([[0.0], [1.0]])
    if isinstance(geometry, CustomPointCloud):
        if geometry.boundary.shape[0] == 0:
            raise ConfigurationError("custom geometry has no boundary points to sample")
        idx = _rng(seed).choice(geometry.boundary.shape[0], size=min(n, geometry.boundary.shape[0]), replace=False)
        return geometry.boundary[np.sort(idx)]
    components = geometry.boundary_components()
    if not components:
        raise ConfigurationError("geometry exposes no boundary components")
    rng = _rng(seed)
    lengths = np.array([length for length, _ in components])
    u = rng.uniform(0.0, lengths.sum(), size=n)
    edges = np.r_[0.0, np.cumsum(lengths)]
    which = np.clip(np.searchsorted(edges, u, side="right") - 1, 0, len(components) - 1)
    out = np.empty((n, geometry.dim))
    for idx, (length, mapper) in enumerate(components):
        mask = which == idx
        if mask.any():
            local = (u[mask] - edges[idx]) / length
            out[mask] = mapper(local)
    return out


def fill_distance(X, test):
    """Largest distance from any test point to the set X (discrete
    surrogate of the largest data-free ball)."""
    X = np.atleast_2d(np.asarray(X, float))
    test = np.atleast_2d(np.asarray(test, float))
    if X.shape[0] == 0:
        raise UsageError("fill distance needs a nonempty point set")
    if test.shape[0] == 0:
        return 0.0
    dist, _ = cKDTree(X).query(test)
    return float(np.max(dist))


def load_points_csv(path, dim):
    """Read one point per line, comma-separated coordinates.

    An optional header row "x1,...,xd" is auto-detected; anything else
    non-numeric raises with its 1-based line number.
    """
    header = [f"x{i + 1}" for i in range(dim)]
    points = []
    with open(path, newline="", encoding="utf-8") as handle:
        for lineno, row in enumerate(csv.reader(handle), start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if lineno == 1 and [cell.strip().lower() for cell in row] == header:
                continue
            try:
                values = [float(cell) for cell in row]
            except ValueError:
                raise UsageError(
                    f"{path}: line {lineno}: expected {dim} numeric fields, got {row!r}"
                ) from None
            if len(values) != dim:
                raise UsageError(
                    f"{path}: line {lineno}: expected {dim} coordinates, got {len(values)}"
                )
            points.append(values)
    return np.array(points, dtype=float).reshape(-1, dim)
