"""Kernel profile values, operator-applied values and their invariants.

Expected values for the operator-applied kernels were computed with the
finite-difference Laplacian oracle (tests below re-derive them) before the
analytic implementations existed.
"""

import math

import numpy as np
import pytest

from greedycolloc import (
    ConfigurationError,
    OperatorSpec,
    PROFILES,
    RadialKernel,
    UsageError,
    k_eval,
    lk_eval,
    llk_eval,
    phi_derivatives,
    with_normalized_amplitude,
)
from greedycolloc.kernels import (
    bilaplace_k_at_distance,
    k_at_distance,
    laplace_k_at_distance,
    lk_at_distance,
    llk_at_distance,
)
from greedycolloc.oracle import fd_check_derivatives

POISSON = OperatorSpec(1.0, 0.0)
IDENTITY = OperatorSpec(0.0, 1.0)


def random_pairs(rng, dim, n, r_low=0.05, r_high=0.9):
    """Point pairs with separation in [r_low, r_high]."""
    pairs = []
    for _ in range(n):
        x = rng.uniform(0.0, 1.0, size=dim)
        direction = rng.normal(size=dim)
        direction /= np.linalg.norm(direction)
        pairs.append((x, x + direction * rng.uniform(r_low, r_high)))
    return pairs


class TestProfileDerivatives:
    def test_gaussian_at_zero(self):
        phi, d1, d2, _, _ = phi_derivatives("gaussian", 1.0, 0.0)
        assert phi == pytest.approx(1.0)
        assert d1 == pytest.approx(0.0)
        assert d2 == pytest.approx(-2.0)

    @pytest.mark.parametrize(
        "profile,phi0", [("wendland32", 3.0), ("wendland33", 1.0), ("matern2", 3.0), ("matern3", 15.0)]
    )
    def test_value_at_zero(self, profile, phi0):
        assert phi_derivatives(profile, 1.0, 0.0)[0] == pytest.approx(phi0)

    @pytest.mark.parametrize("profile", ["wendland32", "wendland33"])
    def test_compact_support(self, profile):
        values = phi_derivatives(profile, 1.0, 1.5)
        assert all(float(v) == 0.0 for v in values)
        # support scales with eps: eps=2 kills r=0.6
        assert float(phi_derivatives(profile, 2.0, 0.6)[0]) == 0.0

    @pytest.mark.parametrize("profile", PROFILES)
    def test_derivatives_match_difference_quotients(self, profile):
        # first derivative via central differences of phi itself
        for r in (0.1, 0.4, 0.8):
            h = 1e-6
            phi_m = phi_derivatives(profile, 1.0, r - h)[0]
            phi_p = phi_derivatives(profile, 1.0, r + h)[0]
            d1 = phi_derivatives(profile, 1.0, r)[1]
            assert d1 == pytest.approx((phi_p - phi_m) / (2 * h), rel=1e-7, abs=1e-8)

    def test_unknown_profile_rejected(self):
        with pytest.raises(ConfigurationError):
            phi_derivatives("sinc", 1.0, 0.1)
        with pytest.raises(ConfigurationError):
            RadialKernel("sinc")

    def test_bad_parameters_rejected(self):
        with pytest.raises(ConfigurationError):
            RadialKernel("gaussian", eps=0.0)
        with pytest.raises(ConfigurationError):
            RadialKernel("gaussian", amplitude=-1.0)
        with pytest.raises(ConfigurationError):
            RadialKernel("gaussian", dim=0)

    def test_profile_names_case_insensitive(self):
        assert RadialKernel("Gaussian").profile == "gaussian"
        assert RadialKernel("WENDLAND32").profile == "wendland32"


class TestPointEvaluation:
    def test_k_diagonal_is_scaled_phi0(self):
        k = RadialKernel("gaussian", dim=2)
        assert k_eval(k, [0.3, 0.4], [0.3, 0.4]) == pytest.approx(1.0)
        k = RadialKernel("matern3", amplitude=2.5, dim=2)
        assert k_eval(k, [0.1, 0.0], [0.1, 0.0]) == pytest.approx(2.5 * 15.0)

    def test_gaussian_unit_separation(self):
        k = RadialKernel("gaussian", dim=1)
        assert k_eval(k, [0.0], [1.0]) == pytest.approx(math.exp(-1.0))

    def test_wendland_outside_support(self):
        k = RadialKernel("wendland32", dim=2)
        assert k_eval(k, [0.0, 0.0], [2.0, 0.0]) == 0.0

    def test_dimension_mismatch(self):
        k = RadialKernel("gaussian", dim=2)
        with pytest.raises(UsageError):
            k_eval(k, [0.0], [1.0])
        with pytest.raises(UsageError):
            lk_eval(k, POISSON, [0.0, 0.0, 0.0], [1.0, 0.0, 0.0])

    def test_lk_at_coincident_points_equals_2d(self):
        # frozen from the finite-difference Laplacian oracle: 2*dim
        k = RadialKernel("gaussian", dim=2)
        x = np.array([0.3, -0.2])
        assert lk_eval(k, POISSON, x, x) == pytest.approx(4.0, rel=1e-12)

    def test_lk_gaussian_1d_unit_separation(self):
        # frozen from the FD oracle: -(4r^2 - 2) e^{-r^2} at r=1 is -2/e
        k = RadialKernel("gaussian", dim=1)
        assert lk_eval(k, POISSON, [0.0], [1.0]) == pytest.approx(-2.0 * math.exp(-1.0), rel=1e-12)

    def test_llk_at_coincident_points_equals_4d_dp2(self):
        # frozen from the nested FD Laplacian oracle: 4*dim*(dim+2)
        k = RadialKernel("gaussian", dim=2)
        x = np.array([0.3, -0.2])
        assert llk_eval(k, POISSON, x, x) == pytest.approx(32.0, rel=1e-12)

    @pytest.mark.parametrize("profile", PROFILES)
    def test_identity_operator_collapses_to_k(self, profile):
        k = RadialKernel(profile, dim=2)
        rng = np.random.default_rng(1)
        for x, y in random_pairs(rng, 2, 20):
            assert lk_eval(k, IDENTITY, x, y) == pytest.approx(k_eval(k, x, y), rel=1e-14)
            assert llk_eval(k, IDENTITY, x, y) == pytest.approx(k_eval(k, x, y), rel=1e-14)

    @pytest.mark.parametrize("profile", ["wendland32", "wendland33"])
    def test_operator_values_vanish_outside_support(self, profile):
        k = RadialKernel(profile, dim=2)
        assert lk_eval(k, POISSON, [0.0, 0.0], [1.5, 0.0]) == 0.0
        assert llk_eval(k, POISSON, [0.0, 0.0], [1.5, 0.0]) == 0.0


class TestInvariants:
    @pytest.mark.parametrize("profile", PROFILES)
    def test_symmetry(self, profile):
        k = RadialKernel(profile, dim=2)
        op = OperatorSpec(1.0, -math.pi**2)
        rng = np.random.default_rng(7)
        for x, y in random_pairs(rng, 2, 200, r_low=0.0, r_high=1.2):
            assert k_eval(k, x, y) == k_eval(k, y, x)
            assert lk_eval(k, op, x, y) == lk_eval(k, op, y, x)
            assert llk_eval(k, op, x, y) == llk_eval(k, op, y, x)

    # steps chosen per profile smoothness: the exactly-C^4 profiles need a
    # smaller step before their sixth-derivative growth near zero bites
    FD_STEPS = {
        "gaussian": 1e-2,
        "matern2": 7e-3,
        "matern3": 1e-2,
        "wendland32": 7e-3,
        "wendland33": 7e-3,
    }

    @pytest.mark.parametrize("profile", PROFILES)
    @pytest.mark.parametrize("dim", [1, 2])
    def test_finite_difference_agreement(self, profile, dim):
        k = RadialKernel(profile, dim=dim)
        rng = np.random.default_rng(11)
        pairs = random_pairs(rng, dim, 100)
        worst = fd_check_derivatives(k, POISSON, pairs, step=self.FD_STEPS[profile])
        limit = 1e-3 if profile == "wendland32" else 1e-5
        assert worst <= limit

    def test_finite_difference_agreement_nonunit_eps(self):
        k = RadialKernel("matern3", eps=2.0, dim=2)
        rng = np.random.default_rng(13)
        pairs = random_pairs(rng, 2, 30, r_low=0.05, r_high=0.9 / 2.0)
        assert fd_check_derivatives(k, OperatorSpec(1.0, -1.0), pairs, step=5e-3) <= 1e-5

    @pytest.mark.parametrize("profile", PROFILES)
    def test_gram_positive_definite(self, profile):
        k = RadialKernel(profile, dim=2)
        rng = np.random.default_rng(3)
        pts = rng.uniform(0, 1, size=(20, 2))
        gram = np.array([[k_eval(k, a, b) for b in pts] for a in pts])
        assert np.linalg.eigvalsh(gram).min() > 0

    @pytest.mark.parametrize("profile", PROFILES)
    @pytest.mark.parametrize("dim", [1, 2, 3])
    def test_removable_singularity(self, profile, dim):
        k = RadialKernel(profile, dim=dim)
        op = OperatorSpec(1.0, -1.0)
        for fn in (lk_at_distance, llk_at_distance):
            at_zero = float(fn(k, op, 0.0))
            near_zero = float(fn(k, op, 1e-9))
            assert near_zero == pytest.approx(at_zero, rel=1e-6)

    @pytest.mark.parametrize("profile", PROFILES)
    def test_series_branch_continuous_at_cutoff(self, profile):
        # values just below and above the series/direct switch must agree
        k = RadialKernel(profile, eps=1.0, dim=2)
        below, above = 1e-4 * (1 - 1e-9), 1e-4 * (1 + 1e-9)
        assert float(laplace_k_at_distance(k, below)) == pytest.approx(
            float(laplace_k_at_distance(k, above)), rel=1e-6
        )
        assert float(bilaplace_k_at_distance(k, below)) == pytest.approx(
            float(bilaplace_k_at_distance(k, above)), rel=1e-6
        )

    def test_amplitude_scales_linearly(self):
        base = RadialKernel("matern2", dim=2)
        scaled = RadialKernel("matern2", amplitude=3.0, dim=2)
        x, y = np.array([0.1, 0.2]), np.array([0.5, 0.9])
        assert k_eval(scaled, x, y) == pytest.approx(3.0 * k_eval(base, x, y), rel=1e-14)
        assert llk_eval(scaled, POISSON, x, y) == pytest.approx(
            3.0 * llk_eval(base, POISSON, x, y), rel=1e-14
        )

    def test_eps_chain_rule_at_origin(self):
        # Laplacian at zero picks up eps^2, the bilaplacian eps^4
        k1 = RadialKernel("gaussian", eps=1.0, dim=2)
        k2 = RadialKernel("gaussian", eps=2.0, dim=2)
        assert float(laplace_k_at_distance(k2, 0.0)) == pytest.approx(
            4.0 * float(laplace_k_at_distance(k1, 0.0)), rel=1e-12
        )
        assert float(bilaplace_k_at_distance(k2, 0.0)) == pytest.approx(
            16.0 * float(bilaplace_k_at_distance(k1, 0.0)), rel=1e-12
        )


class TestNormalization:
    @pytest.mark.parametrize("profile", PROFILES)
    def test_unit_representer_bound(self, profile):
        kernel = with_normalized_amplitude(RadialKernel(profile, dim=2), POISSON)
        diag = max(
            float(llk_at_distance(kernel, POISSON, 0.0)), float(k_at_distance(kernel, 0.0))
        )
        assert diag == pytest.approx(1.0, rel=1e-12)
