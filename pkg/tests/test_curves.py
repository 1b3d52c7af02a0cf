import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from warpbench import curves as cv


def central_diff(curve, t, step):
    return (curve.eval(t + step, 0) - curve.eval(t - step, 0)) / (2 * step)


class TestConcaveProfile:
    def test_forced_intermediate_slope_value(self):
        f = cv.make_concave_profile(0.5, 0.7, 0.1, lambda_mid=0.6)
        expected = 0.1 * (1.0 - math.exp(-1.0)) + 0.6 + 1.0
        assert abs(f(1.0) - expected) < 1e-12

    def test_pinned_values(self):
        f = cv.make_concave_profile(0.5, 0.7, 0.1)
        assert abs(f(0.0) - 1.0) < 1e-14
        assert abs(f(0.0, 1) - 0.7) < 1e-14

    @pytest.mark.parametrize("l1,l2", [(0.5, 0.7), (0.9, 0.95)])
    def test_three_properties_with_positive_margins(self, l1, l2):
        delta = 0.1
        f = cv.make_concave_profile(l1, l2, delta, t_max=20.0)
        ts = np.linspace(-delta, 20.0, 2048)
        m_concave = np.min(-f.eval(ts, 2))
        m_slope = np.min(f.eval(ts, 1) - l1)
        m_log = np.min(f.eval(ts, 1) / f.eval(ts, 0)
                       - l1 / (1.0 + l1 * ts))
        assert m_concave > 0
        assert m_slope > 0
        assert m_log > 0

    def test_slope_limit_is_intermediate_value(self):
        f = cv.make_concave_profile(0.5, 0.7, 0.1)
        mid = f.info["lambda_mid"]
        assert mid > 0.5
        assert abs(f(20.0, 1) - mid) < 1e-8

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            cv.make_concave_profile(0.7, 0.5, 0.1)
        with pytest.raises(ValueError):
            cv.make_concave_profile(0.5, 0.7, 0.1, lambda_mid=0.2)
        with pytest.raises(ValueError):
            # slope at the inner end reaches 1
            cv.make_concave_profile(0.5, 0.99, 5.0)


class TestDerivativeConsistency:
    CURVES = {
        "sine": cv.sine_curve(1.3, 2.0, 0.4, (0.0, 2.0)),
        "poly": cv.poly_curve([1.0, -0.3, 0.2, 0.05], (0.0, 2.0)),
        "profile": cv.make_concave_profile(0.5, 0.7, 0.1, t_max=2.0),
    }

    @pytest.mark.parametrize("name", sorted(CURVES))
    @given(x=st.floats(0.05, 0.95))
    @settings(max_examples=40, deadline=None)
    def test_first_derivative_matches_central_difference(self, name, x):
        curve = self.CURVES[name]
        lo, hi = curve.domain
        t = lo + x * (hi - lo)
        step = 1e-4 * (hi - lo)
        if not (lo + step < t < hi - step):
            return
        fd = central_diff(curve, t, step)
        exact = curve.eval(t, 1)
        assert abs(fd - exact) < 1e-6 * (1.0 + abs(exact))

    def test_ode_curve_consistency(self):
        h0, fc = cv.integrate_transfer_odes(0.1, t_max=5.0,
                                            step_budget=4096)
        for t in (0.5, 1.7, 3.3):
            fd = central_diff(fc, t, 5e-4)
            assert abs(fd - fc.eval(t, 1)) < 1e-6 * (1 + abs(fc.eval(t, 1)))


class TestTransferOdes:
    @pytest.mark.parametrize("C", [0.01, 0.1])
    def test_residuals_below_tolerance(self, C):
        h0, fc = cv.integrate_transfer_odes(C)
        res = cv.transfer_ode_residuals(h0, fc, C)
        assert max(res.values()) < 1e-8

    @pytest.mark.parametrize("C", [0.01, 0.1])
    def test_qualitative_properties_at_every_node(self, C):
        h0, fc = cv.integrate_transfer_odes(C)
        ts, hcols = h0.nodes
        _, fcols = fc.nodes
        g, g1 = hcols[0], hcols[1]
        f0, f1, f2 = fcols[0], fcols[1], fcols[2]
        assert np.all(g1 > 0)
        assert np.all(hcols[2] < 0)
        assert np.all(f1[1:] > 0)
        assert np.all(f2 > 0)
        ratio = f1 / (f0 * g * g1)
        assert np.all(ratio >= -1e-9)
        assert np.all(ratio <= 1.0 + 1e-9)
        tail = (f0 * g1)[len(ts) // 2:]
        assert np.all(np.diff(tail) <= 1e-12)

    def test_initial_values(self):
        h0, fc = cv.integrate_transfer_odes(0.25, t_max=5.0,
                                            step_budget=4096)
        assert abs(fc(0.0) - 1.0) < 1e-15
        assert abs(fc(0.0, 1)) < 1e-15
        assert abs(h0(0.0) - 1.0) < 1e-15

    def test_zero_coupling_gives_constant(self):
        _, fc = cv.integrate_transfer_odes(0.0, t_max=5.0,
                                           step_budget=4096)
        ts = np.linspace(0, 5, 200)
        assert np.max(np.abs(fc.eval(ts) - 1.0)) < 1e-15

    def test_step_budget_floor(self):
        with pytest.raises(cv.StepBudgetError):
            cv.integrate_transfer_odes(0.1, t_max=20.0, step_budget=100)


class TestSmoothJoin:
    def test_identity_when_sides_coincide(self):
        left = cv.sine_curve(1.0, 1.0, 0.0, (0.0, 1.0))
        right = cv.sine_curve(1.0, 1.0, 0.0, (0.3, 2.0))
        out = cv.smooth_join(left, right, (0.4, 0.8), (-2.0, 2.0))
        ts = np.linspace(0.0, 2.0, 400)
        assert np.max(np.abs(out.eval(ts) - np.sin(ts))) < 1e-12
        assert out.info["identity"]

    def test_two_sines_stay_inside_band(self):
        # near-parallel sines joined over a wide window around s = 0.3
        left = cv.sine_curve(1.0, 1.0, 0.0, (-0.6, 1.2))
        right = cv.sine_curve(1.0, 0.9, 0.0, (-0.6, 1.4))
        window = (-0.3, 0.9)
        ts = np.linspace(*window, 2001)
        band = (min(np.min(left.eval(ts, 2)), np.min(right.eval(ts, 2)))
                - 1e-2,
                max(np.max(left.eval(ts, 2)), np.max(right.eval(ts, 2)))
                + 1e-2)
        out = cv.smooth_join(left, right, window, band, band_tol=1e-2)
        assert out.info["band_overshoot"] < 1e-2
        assert np.max(np.abs(out.eval(np.linspace(-0.6, -0.31, 50))
                             - left.eval(np.linspace(-0.6, -0.31, 50)))) \
            < 1e-12
        tr = np.linspace(0.91, 1.4, 50)
        assert np.max(np.abs(out.eval(tr) - right.eval(tr))) < 1e-7

    def test_matching_is_seamless_at_window_ends(self):
        left = cv.sine_curve(1.0, 1.0, 0.0, (-0.6, 1.2))
        right = cv.sine_curve(1.0, 0.9, 0.0, (-0.6, 1.4))
        out = cv.smooth_join(left, right, (-0.3, 0.9), (-2.0, 2.0))
        for k in (0, 1):
            gap = abs(out.eval(0.9 - 1e-9, k) - right.eval(0.9, k))
            assert gap < 1e-7

    def test_band_infeasible_reports_overshoot(self):
        left = cv.line_curve(0.0, 1.0, (-1.0, 1.0))
        right = cv.line_curve(0.0, -1.0, (-1.0, 1.0))
        with pytest.raises(cv.JoinBandError) as err:
            cv.smooth_join(left, right, (-0.2, 0.2), (-1e-3, 1e-3),
                           band_tol=1e-3)
        assert err.value.overshoot > 0


class TestParity:
    def test_sine_is_odd_at_zero(self):
        s = cv.sine_curve(1.0, 1.0, 0.0, (0.0, 1.2))
        rep = cv.parity_margin(s, 0.0, "odd", first_derivative_target=1.0)
        assert rep.max_violation < 1e-9
        assert abs(rep.first_derivative_value - 1.0) < 1e-9
        assert rep.order_checked == 3

    def test_cosine_is_even_at_zero(self):
        c = cv.cosine_curve(1.0, 1.0, 0.0, (0.0, 1.2))
        rep = cv.parity_margin(c, 0.0, "even")
        assert rep.max_violation < 1e-9

    def test_scaled_sine_even_at_far_end(self):
        t0 = 1.4
        f = cv.sine_curve(2 * t0 / math.pi, math.pi / (2 * t0), 0.0,
                          (0.0, t0))
        rep = cv.parity_margin(f, t0, "even")
        assert rep.max_violation < 1e-9
        assert abs(rep.first_derivative_value) < 1e-9

    def test_odd_violation_detected(self):
        c = cv.cosine_curve(1.0, 1.0, 0.0, (0.0, 1.2))
        rep = cv.parity_margin(c, 0.0, "odd")
        assert rep.max_violation > 0.1

    def test_flatness_margin(self):
        const = cv.constant_curve(2.0, (0.0, 1.0))
        assert cv.flatness_margin(const, 1.0) == 0.0
        s = cv.sine_curve(1.0, 1.0, 0.0, (0.0, 1.0))
        assert cv.flatness_margin(s, 1.0) > 0.4


class TestSerialization:
    def test_node_table_columns(self, tmp_path):
        s = cv.sine_curve(1.0, 1.0, 0.0, (0.0, 1.0))
        path = tmp_path / "curve.csv"
        s.write_csv(path, per_unit=16)
        rows = np.loadtxt(path, delimiter=",", skiprows=1)
        header = path.read_text().splitlines()[0]
        assert header == "t,v0,v1,v2,v3"
        assert np.allclose(rows[:, 1], np.sin(rows[:, 0]), atol=1e-12)
        assert np.allclose(rows[:, 2], np.cos(rows[:, 0]), atol=1e-12)

    def test_ode_curve_serializes_stored_nodes(self):
        h0, _ = cv.integrate_transfer_odes(0.1, t_max=2.0,
                                           step_budget=2048)
        tab = h0.node_table()
        assert tab.shape == (2049, 5)


class TestRescaling:
    @given(R=st.floats(0.25, 4.0), x=st.floats(0.1, 0.9))
    @settings(max_examples=50, deadline=None)
    def test_metric_rescale_scales_values_and_derivatives(self, R, x):
        s = cv.sine_curve(1.0, 1.0, 0.2, (0.0, 1.0))
        sR = s.metric_rescale(R)
        t = x * 1.0
        assert abs(sR.eval(R * t, 0) - R * s.eval(t, 0)) < 1e-12 * R
        assert abs(sR.eval(R * t, 1) - s.eval(t, 1)) < 1e-12

    def test_even_extension(self):
        half = cv.cosine_curve(1.0, 1.0, 0.0, (0.0, 1.0))
        full = cv.even_extension(half)
        ts = np.linspace(-1.0, 1.0, 101)
        assert np.max(np.abs(full.eval(ts) - np.cos(ts))) < 1e-12
        assert np.max(np.abs(full.eval(-ts, 1) + full.eval(ts, 1))) < 1e-12
