import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_field
from oracles import dense_of, ep_bruteforce
from lagrangia.bounds import CUBICS, cubic_bound_root, partial_sums, radius_estimate
from lagrangia.euler import (
    SeedError,
    defect_coefficients,
    exactness_orders,
    longitudinal_rhs,
    series_from_seed,
    transverse_rhs,
)
from lagrangia.poisson import (
    ep_compute_series,
    ep_evaluate_map,
    ep_mass_residual,
    ep_seed,
    w2,
    w3,
)
from lagrangia.presets import one_d_potential, scalar_field, two_mode_potential
from lagrangia.spectral import SpectralField, evaluate_at, max_difference, norm, spectral_derivative


def potential_3d():
    return scalar_field(
        [(1.0, [("cos", 0, 1)]), (0.7, [("cos", 1, 1), ("sin", 2, 1)]), (0.4, [("sin", 0, 1), ("cos", 2, 1)])],
        dimension=3,
    )


class TestWeights:
    def test_values(self):
        assert w2(1, 2) == pytest.approx(3 / 7, abs=1e-15)
        assert w3(1, 1, 1, 3) == pytest.approx(1 / 3, abs=1e-15)

    def test_bounds(self):
        for s in range(2, 60):
            for n in range(1, s):
                assert 0 < w2(n, s) <= 1
                assert w2(n, s) == w2(s - n, s)
            for n1 in range(1, s - 1):
                for n2 in range(1, s - n1):
                    assert 0 < w3(n1, n2, s - n1 - n2, s) <= 1

    def test_index_errors(self):
        with pytest.raises(ValueError):
            w2(0, 3)
        with pytest.raises(ValueError):
            w3(1, 1, 2, 3)


class TestSeed:
    def test_single_cosine(self):
        xi = ep_seed(scalar_field([(1.0, [("cos", 0, 1)])]))
        for a in [(0.3, 1.0, 2.0), (2.0, 0.0, 0.0)]:
            np.testing.assert_allclose(evaluate_at(xi, a), [-np.sin(a[0]), 0, 0], atol=1e-15)

    def test_zero(self):
        s = ep_compute_series(SpectralField.zeros(rank=0), 4)
        assert all(c.is_zero() for c in s.coefficients)

    def test_two_cosines(self):
        phi = scalar_field([(1.0, [("cos", 0, 1)]), (1.0, [("cos", 1, 1)])])
        xi = ep_seed(phi)
        assert spectral_derivative(xi, "curl").is_zero()
        assert max_difference(spectral_derivative(xi, "div"), -1.0 * phi) < 1e-15

    def test_rejects_vector(self):
        with pytest.raises(SeedError):
            ep_seed(SpectralField.zeros(rank=1))

    def test_gamma(self):
        s = ep_compute_series("two-mode", 1)
        # sum |p|^2 |phi_p| = 2 * 1/2 + 2 * 2 * 1/2
        assert s.gamma == pytest.approx(3.0)
        assert s.norms[0].weighted == pytest.approx(3.0)


class TestRecurrence:
    @pytest.mark.parametrize("phi", [one_d_potential(), scalar_field([(1.0, [("sin", 2, 3)]), (0.2, [("cos", 2, 1)])])])
    def test_one_dimensional_seed_terminates(self, phi):
        s = ep_compute_series(phi, 10)
        assert not s.coefficients[0].is_zero()
        for k in range(2, 11):
            assert np.max(s.coefficient(k).modulus(), initial=0) <= 1e-14
        assert transverse_rhs(3, s).is_zero()
        assert longitudinal_rhs(3, s).is_zero()

    def test_second_order_is_gradient(self):
        s = ep_compute_series("two-mode", 2)
        assert transverse_rhs(2, s).is_zero()

    def test_second_order_closed_form(self):
        # div xi_2 = (3/7) sum_{i<j} (phi_ij^2 - phi_ii phi_jj)
        phi = potential_3d()
        s = ep_compute_series(phi, 2)
        H = spectral_derivative(spectral_derivative(phi, "grad"), "grad")
        pts = np.random.default_rng(1).uniform(0, 2 * np.pi, (6, 3))
        h = evaluate_at(H, pts)
        expect = (3 / 7) * sum(h[:, i, j] ** 2 - h[:, i, i] * h[:, j, j] for i in range(3) for j in range(i + 1, 3))
        np.testing.assert_allclose(evaluate_at(spectral_derivative(s.coefficient(2), "div"), pts), expect, atol=1e-14)

    @pytest.mark.parametrize("s_order", [3, 4, 5])
    def test_literal_sums_agree(self, s_order):
        for phi in (two_mode_potential(), potential_3d()):
            ser = ep_compute_series(phi, s_order - 1)
            assert max_difference(transverse_rhs(s_order, ser), transverse_rhs(s_order, ser, literal=True)) < 1e-13
            assert max_difference(longitudinal_rhs(s_order, ser), longitudinal_rhs(s_order, ser, literal=True)) < 1e-13

    def test_third_order_transverse_nonzero(self):
        ser = ep_compute_series("two-mode", 2)
        assert norm(transverse_rhs(3, ser)) > 1e-3

    @pytest.mark.parametrize("phi,S", [(two_mode_potential(), 6), (potential_3d(), 4)])
    def test_bruteforce_oracle(self, phi, S):
        s = ep_compute_series(phi, S)
        ref, B = ep_bruteforce(phi, S)
        for k in range(1, S + 1):
            assert np.abs(dense_of(s.coefficient(k), B) - ref[k - 1]).max() < 1e-13

    @pytest.mark.parametrize("phi", [two_mode_potential(), potential_3d()])
    def test_structural_identity(self, phi):
        unit = ep_compute_series(phi, 6, weights="unit")
        inc = series_from_seed(ep_seed(phi), 6)
        for a, b in zip(unit.coefficients, inc.coefficients):
            assert max_difference(a, b) < 1e-13

    def test_weights_matter(self):
        a = ep_compute_series("two-mode", 3)
        b = ep_compute_series("two-mode", 3, weights="unit")
        assert max_difference(a.coefficient(2), b.coefficient(2)) > 0.1

    def test_bad_weights(self):
        with pytest.raises(ValueError):
            ep_compute_series("two-mode", 3, weights="other")

    def test_evaluate(self):
        s = ep_compute_series("two-mode", 4)
        smp = ep_evaluate_map(s, (0.1, 0.2), 0.0)
        np.testing.assert_allclose(smp.velocity, evaluate_at(s.coefficient(1), (0.1, 0.2)))


class TestResiduals:
    @pytest.mark.parametrize("phi,S", [(two_mode_potential(), 6), (potential_3d(), 5)])
    def test_mass_defect_orders_vanish(self, phi, S):
        s = ep_compute_series(phi, S)
        scale = s.norms[0].weighted
        for kind in ("mass", "cauchy"):
            D = defect_coefficients(s, S, kind)
            for n in exactness_orders(kind, S):
                assert norm(D[n]) <= 1e-11 * scale
        assert norm(defect_coefficients(s, S, "mass")[S + 1]) > 1e-6

    def test_one_d_exact(self):
        s = ep_compute_series("one-d", 4)
        r = ep_mass_residual(s, 4, 0.3)
        assert r.mass_residual <= 1e-14 and r.cauchy_residual <= 1e-14

    def test_zero_time(self):
        s = ep_compute_series("two-mode", 4)
        r = ep_mass_residual(s, 4, 0.0)
        assert r.mass_residual == 0.0

    def test_geometric_decay(self):
        s = ep_compute_series("two-mode", 8)
        tau = 0.05 / s.norms[0].weighted
        r6 = ep_mass_residual(s, 6, tau).mass_residual
        r8 = ep_mass_residual(s, 8, tau).mass_residual
        assert 0 < r8 < 0.1 * r6

    def test_rejects_euler_series(self):
        from lagrangia.euler import compute_series

        with pytest.raises(ValueError):
            ep_mass_residual(compute_series("ab", 3), 3, 0.1)


def test_radius_stable_between_orders():
    s20 = ep_compute_series("two-mode", 20)
    s30 = ep_compute_series("two-mode", 30)
    r20 = radius_estimate(s20.weighted_norms()).value
    r30 = radius_estimate(s30.weighted_norms()).value
    assert np.isfinite(r30) and r30 > 0
    assert abs(r30 - r20) / r30 < 0.10


def test_incompressible_bound_reused():
    s = ep_compute_series("two-mode", 25)
    for T in (0.05, 0.1, 0.2, 0.3):
        root = cubic_bound_root(*CUBICS["l1"], T)
        assert np.all(partial_sums(s.weighted_norms(), T / s.gamma) <= root + 1e-9)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_potential_mass_defect(seed_value):
    phi = random_field(np.random.default_rng(seed_value), 2, 1, rank=0, dimension=3)
    s = ep_compute_series(phi, 4)
    D = defect_coefficients(s, 4, "mass")
    g = max(1.0, s.norms[0].weighted)
    for n in range(5):
        # order-n defect coefficients scale like g**n
        assert norm(D[n]) <= 1e-13 * g ** max(n, 1)
    for c in s.coefficients:
        assert c.is_hermitian(1e-14)
