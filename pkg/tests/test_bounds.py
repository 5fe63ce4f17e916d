import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lagrangia.bounds import (
    BOUND_KINDS,
    CUBICS,
    bound_holds,
    bound_table,
    critical_T,
    critical_time,
    cubic_bound_root,
    cubic_critical_T,
    cubic_upper_root,
    l1_discriminant,
    radius_estimate,
)

Q3, Q2 = CUBICS["l1"]
TC_L1 = (8 - 5 * math.sqrt(2)) / 3


def cubic(z, T, q3=Q3, q2=Q2):
    return q3 * z**3 + q2 * z**2 - z + T


class TestCubicRoot:
    def test_zero_time(self):
        assert cubic_bound_root(Q3, Q2, 0.0) == 0.0

    def test_residual_and_bracket(self):
        z = cubic_bound_root(Q3, Q2, 0.1)
        assert abs(cubic(z, 0.1)) < 1e-10
        assert cubic(z - 1e-6, 0.1) > 0 > cubic(z + 1e-6, 0.1)

    def test_critical_value_is_double_root(self):
        Tc = cubic_critical_T(Q3, Q2)
        assert Tc == pytest.approx(TC_L1, abs=1e-14)
        assert abs(l1_discriminant(Tc)) < 1e-10
        z = cubic_bound_root(Q3, Q2, Tc)
        assert z is not None and abs(cubic(z, Tc)) < 1e-10
        assert cubic_bound_root(Q3, Q2, Tc + 1e-6) is None

    def test_discriminant_root(self):
        # positive root of -(3/4) T^2 - (5/sqrt2) T + 7/6
        a, b, c = -0.75, -5 / math.sqrt(2), 7 / 6
        root = (-b - math.sqrt(b * b - 4 * a * c)) / (2 * a)
        assert cubic_critical_T(Q3, Q2) == pytest.approx(root, abs=1e-10)

    def test_negative_time(self):
        with pytest.raises(ValueError):
            cubic_bound_root(Q3, Q2, -0.1)

    def test_quadratic_case(self):
        # q3 = 0: z^2 - z + T has roots (1 -+ sqrt(1 - 4T)) / 2
        assert cubic_bound_root(0.0, 1.0, 0.2) == pytest.approx((1 - math.sqrt(0.2)) / 2, abs=1e-11)

    def test_root_monotonicity(self):
        Ts = np.linspace(0.001, TC_L1 - 1e-4, 60)
        lo = [cubic_bound_root(Q3, Q2, T) for T in Ts]
        hi = [cubic_upper_root(Q3, Q2, T) for T in Ts]
        assert np.all(np.diff(lo) > 0)
        assert np.all(np.diff(hi) < 0)
        assert np.all(np.array(lo) < np.array(hi))


class TestCriticalTimes:
    def test_constants(self):
        assert critical_T("l1") == pytest.approx(0.3096, abs=1e-4)
        assert critical_T("l1-improved") == pytest.approx(0.3325, abs=1e-4)
        assert critical_T("ab-2d") == pytest.approx(0.4434, abs=1e-4)
        assert critical_T("normed-space") == pytest.approx(0.0204, abs=5e-4)

    def test_closed_forms(self):
        assert critical_T("l1-improved") == pytest.approx(1 + math.sqrt(2) - math.sqrt(13 / 3), abs=1e-14)
        assert critical_T("ab-2d") == pytest.approx((2 - 2**0.25) / (math.sqrt(8) - 1), abs=1e-14)

    def test_report(self):
        r = critical_time("l1", 2.0)
        assert r.t_guaranteed == pytest.approx(r.T_critical / 2.0)
        assert r.zeta_root == cubic_bound_root(Q3, Q2, r.T_critical / 2)
        doc = json.loads(r.to_json())
        assert set(doc) == {"kind", "T_critical", "zeta_root", "t_guaranteed", "sigma"}

    def test_gevrey_carries_sigma(self):
        r = critical_time("gevrey", 3.0, sigma=0.5)
        assert r.sigma == 0.5 and r.T_critical == critical_T("l1")

    def test_errors(self):
        with pytest.raises(ValueError):
            critical_time("nope", 1.0)
        with pytest.raises(ValueError):
            critical_time("l1", 0.0)

    def test_table_scales(self):
        rows = {r.kind: r for r in bound_table(2.0, grad_scale=5.0)}
        assert rows["l1"].t_guaranteed == pytest.approx(critical_T("l1") / 2.0)
        assert rows["normed-space"].t_guaranteed == pytest.approx(critical_T("normed-space") / 5.0)

    def test_conservative_ordering(self):
        g = 2.0
        assert critical_time("l1", g).t_guaranteed < critical_time("l1-improved", g).t_guaranteed
        for k in BOUND_KINDS:
            assert critical_time(k, g).t_guaranteed < math.pi / 2


class TestRadius:
    @pytest.mark.parametrize("method", ["ratio", "root-test", "domb-sykes"])
    def test_geometric(self, method):
        rho = 0.37
        c = rho ** -np.arange(1, 21, dtype=float)
        est = radius_estimate(c, method)
        assert est.value == pytest.approx(rho, rel=1e-10)
        assert not est.flagged

    def test_power_law_correction(self):
        s = np.arange(1, 41, dtype=float)
        c = s**1.5 * 2.0**s
        raw = c[-2] / c[-1]
        est = radius_estimate(c, "ratio").value
        # the 1/s intercept removes the leading algebraic correction
        assert est == pytest.approx(0.5, rel=5e-3)
        assert abs(est - 0.5) < 0.1 * abs(raw - 0.5)

    def test_alternating_zeros_use_stride(self):
        s = np.arange(1, 31)
        c = np.where(s % 2 == 1, 1.3 ** -s.astype(float) * s, 0.0)
        est = radius_estimate(c, "ratio")
        assert est.flagged and est.stride == 2
        assert est.value == pytest.approx(1.3, rel=2e-2)
        assert radius_estimate(c, "root-test").value == pytest.approx(1.3, rel=5e-2)

    def test_too_few(self):
        with pytest.raises(ValueError):
            radius_estimate([1.0, 0.5, 0.25, 0.1, 0.0])

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            radius_estimate(np.ones(10), "pade")

    def test_json(self):
        est = radius_estimate(0.5 ** np.arange(1, 11, dtype=float))
        doc = json.loads(est.to_json())
        assert doc["method"] == "ratio" and doc["orders_used"] == list(est.orders_used)


def test_bound_holds_for_geometric_majorant():
    c = 0.2 ** np.arange(1, 30, dtype=float)
    assert bound_holds(c, 1.0, 0.1)
    assert not bound_holds(c, 1.0, 0.5)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 3.0), st.floats(0.05, 3.0), st.floats(0.0, 1.0))
def test_root_is_a_root(q3, q2, frac):
    Tc = cubic_critical_T(q3, q2)
    T = frac * Tc
    z = cubic_bound_root(q3, q2, T)
    assert z is not None and z >= 0
    assert abs(cubic(z, T, q3, q2)) < 1e-10
