"""Gram form, right-hand-side values and representer evaluation."""

import numpy as np
import pytest

from greedycolloc import (
    CandidateSet,
    Functional,
    FunctionalKind,
    OperatorSpec,
    PROFILES,
    RadialKernel,
    UsageError,
    builtin_problem,
    gram,
    representer_eval,
    rhs_value,
)
from greedycolloc.functionals import representer_at_points

POISSON = OperatorSpec(1.0, 0.0)
GAUSS2 = RadialKernel("gaussian", dim=2)


def interior(point, index=0):
    return Functional(FunctionalKind.INTERIOR_L, point, index)


def boundary(point, index=0):
    return Functional(FunctionalKind.BOUNDARY_DIRICHLET, point, index)


class TestGram:
    def test_boundary_pair_at_same_point(self):
        lam = boundary([0.2, 0.7])
        assert gram(GAUSS2, POISSON, lam, lam) == pytest.approx(1.0)

    def test_mixed_pair_at_same_point(self):
        # equals the singly operated kernel diagonal, = 4 by the FD oracle
        x = [0.2, 0.7]
        assert gram(GAUSS2, POISSON, interior(x), boundary(x)) == pytest.approx(4.0, rel=1e-12)

    def test_interior_pair_at_same_point(self):
        # equals the doubly operated kernel diagonal, = 32 by the FD oracle
        x = [0.2, 0.7]
        assert gram(GAUSS2, POISSON, interior(x), interior(x)) == pytest.approx(32.0, rel=1e-12)

    def test_symmetric_in_arguments(self):
        rng = np.random.default_rng(5)
        op = OperatorSpec(1.0, -2.0)
        for _ in range(50):
            lam = interior(rng.uniform(0, 1, 2)) if rng.random() < 0.5 else boundary(rng.uniform(0, 1, 2))
            mu = interior(rng.uniform(0, 1, 2)) if rng.random() < 0.5 else boundary(rng.uniform(0, 1, 2))
            assert gram(GAUSS2, op, lam, mu) == gram(GAUSS2, op, mu, lam)

    def test_consistency_with_representer(self):
        # gram(lam, mu) must equal applying lam to mu's representer
        rng = np.random.default_rng(17)
        op = OperatorSpec(1.0, -1.0)
        kernel = RadialKernel("matern3", dim=2)
        for _ in range(200):
            kinds = rng.random(2) < 0.5
            lam = interior(rng.uniform(0, 1, 2)) if kinds[0] else boundary(rng.uniform(0, 1, 2))
            mu = interior(rng.uniform(0, 1, 2)) if kinds[1] else boundary(rng.uniform(0, 1, 2))
            via_rep = representer_eval(
                kernel, op, mu, lam.point, apply_L=lam.kind is FunctionalKind.INTERIOR_L
            )
            assert gram(kernel, op, lam, mu) == pytest.approx(via_rep, rel=1e-13, abs=1e-13)

    @pytest.mark.parametrize("profile", PROFILES)
    def test_full_gram_positive_definite(self, profile):
        kernel = RadialKernel(profile, dim=2)
        rng = np.random.default_rng(23)
        pts = rng.uniform(0, 1, size=(15, 2))
        functionals = [
            interior(p, i) if i % 3 else boundary(p, i) for i, p in enumerate(pts)
        ]
        cs = CandidateSet(functionals, kernel, POISSON)
        G = cs.gram_matrix(range(15))
        assert np.allclose(G, G.T)
        assert np.linalg.eigvalsh(G).min() > 0


class TestRhsValue:
    def test_scale_problem_interior(self):
        prob = builtin_problem("beta-scale", interior_n=10, seed=0)
        lam = interior(np.array([0.25]))
        assert rhs_value(prob, lam) == pytest.approx(-(0.25**0.51))
        assert rhs_value(prob, lam) == pytest.approx(-0.493116, abs=1e-6)

    def test_scale_problem_boundary(self):
        prob = builtin_problem("beta-scale", interior_n=10, seed=0)
        lam = boundary(np.array([1.0]))
        assert rhs_value(prob, lam) == pytest.approx(1.0 / (2.51 * 1.51))
        assert rhs_value(prob, lam) == pytest.approx(0.263846, abs=1e-6)

    def test_pacman_boundary(self):
        prob = builtin_problem("pacman", interior_n=10, boundary_n=10, seed=0)
        lam = boundary(np.array([1.0, 1.0]))  # data function is defined everywhere
        assert rhs_value(prob, lam) == pytest.approx(2.0)


class TestRepresenter:
    def test_boundary_representer_is_kernel_section(self):
        rng = np.random.default_rng(2)
        y = rng.uniform(0, 1, 2)
        lam = boundary(y)
        from greedycolloc import k_eval

        for _ in range(20):
            x = rng.uniform(0, 1, 2)
            assert representer_eval(GAUSS2, POISSON, lam, x) == pytest.approx(
                k_eval(GAUSS2, x, y), rel=1e-14
            )

    def test_interior_representer_diagonal(self):
        y = np.array([0.4, 0.6])
        lam = interior(y)
        assert representer_eval(GAUSS2, POISSON, lam, y, apply_L=False) == pytest.approx(4.0, rel=1e-12)
        assert representer_eval(GAUSS2, POISSON, lam, y, apply_L=True) == pytest.approx(32.0, rel=1e-12)

    def test_vectorized_matches_scalar(self):
        rng = np.random.default_rng(9)
        lam = interior(rng.uniform(0, 1, 2))
        pts = rng.uniform(0, 1, size=(30, 2))
        vec = representer_at_points(GAUSS2, POISSON, lam, pts, apply_L=True)
        for i, x in enumerate(pts):
            assert vec[i] == pytest.approx(representer_eval(GAUSS2, POISSON, lam, x, True), rel=1e-14)

    def test_dimension_mismatch(self):
        lam = interior(np.array([0.5]))
        with pytest.raises(UsageError):
            representer_at_points(GAUSS2, POISSON, lam, np.zeros((3, 2)))


class TestCandidateSet:
    def test_empty_rejected(self):
        with pytest.raises(UsageError):
            CandidateSet([], GAUSS2, POISSON)

    def test_noncontiguous_indices_rejected(self):
        functionals = [boundary([0.0, 0.0], 0), boundary([1.0, 0.0], 2)]
        with pytest.raises(UsageError):
            CandidateSet(functionals, GAUSS2, POISSON)

    def test_dimension_mismatch_rejected(self):
        functionals = [boundary([0.0], 0)]
        with pytest.raises(UsageError):
            CandidateSet(functionals, GAUSS2, POISSON)

    def test_from_clouds_layout(self):
        cs = CandidateSet.from_clouds(
            GAUSS2, POISSON, [[0.5, 0.5], [0.2, 0.2]], [[0.0, 0.0]]
        )
        assert len(cs) == 3
        assert list(cs.is_interior) == [True, True, False]
        assert [lam.index for lam in cs.functionals] == [0, 1, 2]

    def test_gram_column_matches_scalar_gram(self):
        rng = np.random.default_rng(31)
        op = OperatorSpec(1.0, -3.0)
        kernel = RadialKernel("wendland33", dim=2)
        cs = CandidateSet.from_clouds(
            kernel, op, rng.uniform(0, 1, (12, 2)), rng.uniform(0, 1, (4, 2))
        )
        for j in (0, 5, 13):
            col = cs.gram_column(j)
            for i in range(len(cs)):
                expected = gram(kernel, op, cs.functionals[i], cs.functionals[j])
                assert col[i] == pytest.approx(expected, rel=1e-13, abs=1e-13)

    def test_gram_diagonal(self):
        cs = CandidateSet.from_clouds(GAUSS2, POISSON, [[0.5, 0.5]], [[0.0, 0.0]])
        assert cs.gram_diagonal() == pytest.approx([32.0, 1.0])

    def test_rhs_orders_interior_then_boundary(self):
        prob = builtin_problem("beta-scale", interior_n=5, seed=1)
        kernel = RadialKernel("matern2", dim=1)
        cs = CandidateSet.from_clouds(kernel, prob.op, prob.interior_cloud, prob.boundary_cloud)
        rhs = cs.rhs(prob)
        x = prob.interior_cloud[:, 0]
        assert rhs[:5] == pytest.approx(-(x**0.51))
        assert rhs[5:] == pytest.approx([0.0, 1.0 / (2.51 * 1.51)])

    def test_duplicate_points_allowed(self):
        # random clouds may collide; construction must not reject them
        cs = CandidateSet.from_clouds(
            GAUSS2, POISSON, [[0.5, 0.5], [0.5, 0.5]], [[0.0, 0.0]]
        )
        assert len(cs) == 3
