import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from warpbench import curves as cv
from warpbench import curvature as kv

PI = math.pi


def round_sphere_metric(p=2, q=2):
    f = cv.sine_curve(1.0, 1.0, 0.0, (0.0, PI / 2))
    h = cv.cosine_curve(1.0, 1.0, 0.0, (0.0, PI / 2))
    return kv.DoublyWarpedMetric(p, q, f, h, collapse_start="f",
                                 collapse_end="h")


def cylinder_metric():
    dom = (0.3, 1.2)
    f = cv.curve_from_derivs(dom,
                             lambda t: 1.2 + 0.3 * np.cos(t),
                             lambda t: -0.3 * np.sin(t),
                             lambda t: -0.3 * np.cos(t),
                             lambda t: 0.3 * np.sin(t))
    h = cv.curve_from_derivs(dom,
                             lambda t: 1.5 + 0.2 * np.sin(t),
                             lambda t: 0.2 * np.cos(t),
                             lambda t: -0.2 * np.sin(t),
                             lambda t: -0.2 * np.cos(t))
    return kv.DoublyWarpedMetric(2, 3, f, h)


class TestDoublyWarped:
    def test_round_sphere_interior_values(self):
        m = round_sphere_metric()
        cp = kv.doubly_warped_curvature(m, 0.7)
        for key in ("sec_tu", "sec_tv", "sec_uv", "sec_uu", "sec_vv"):
            assert abs(cp[key] - 1.0) < 1e-9
        assert abs(cp["ric_tt"] - 4.0) < 1e-9

    def test_round_sphere_collapse_endpoints(self):
        m = round_sphere_metric()
        for t in (0.0, PI / 2):
            cp = kv.doubly_warped_curvature(m, t)
            for v in cp.entries.values():
                assert abs(v - (4.0 if abs(v) > 2 else 1.0)) < 1e-9

    def test_higher_dimensional_ricci(self):
        m = round_sphere_metric(3, 4)
        cp = kv.doubly_warped_curvature(m, 0.3)
        assert abs(cp["ric_tt"] - 7.0) < 1e-9

    def test_constant_warps_give_product_curvatures(self):
        dom = (0.0, 1.0)
        m = kv.DoublyWarpedMetric(2, 2,
                                  cv.constant_curve(0.5, dom),
                                  cv.constant_curve(2.0, dom))
        cp = kv.doubly_warped_curvature(m, 0.4)
        assert cp["sec_tu"] == 0.0
        assert cp["sec_uv"] == 0.0
        assert abs(cp["sec_uu"] - 1.0 / 0.25) < 1e-12
        assert abs(cp["sec_vv"] - 1.0 / 4.0) < 1e-12

    def test_scaled_round_family_has_constant_curvature(self):
        c = 1.7
        dom = (0.0, c * PI / 2)
        f = cv.sine_curve(c, 1.0 / c, 0.0, dom)
        h = cv.cosine_curve(c, 1.0 / c, 0.0, dom)
        m = kv.DoublyWarpedMetric(2, 2, f, h, collapse_start="f",
                                  collapse_end="h")
        ts = np.linspace(0.0, c * PI / 2, 2048)
        sweep = kv.doubly_warped_sweep(m, ts)
        for key in ("sec_tu", "sec_tv", "sec_uv", "sec_uu", "sec_vv"):
            assert np.max(np.abs(sweep[key] - 1.0 / c ** 2)) < 1e-8

    def test_endpoint_matches_interior_extrapolation(self):
        m = round_sphere_metric()
        cp0 = kv.doubly_warped_curvature(m, 0.0)
        eps = np.array([4e-4, 2e-4])
        for key in ("sec_uv", "ric_uu", "ric_vv"):
            vals = [kv.doubly_warped_curvature(m, float(e))[key]
                    for e in eps]
            extrap = vals[1] + (vals[1] - vals[0])
            assert abs(extrap - cp0[key]) < 1e-5

    def test_undeclared_zero_rejected(self):
        f = cv.sine_curve(1.0, 1.0, 0.0, (0.0, PI / 2))
        h = cv.cosine_curve(1.0, 1.0, 0.0, (0.0, PI / 2))
        m = kv.DoublyWarpedMetric(2, 2, f, h)     # no collapse declared
        with pytest.raises(kv.InvalidMetricError):
            kv.doubly_warped_curvature(m, 0.0)


class TestSliceII:
    def test_constant_warps_are_totally_geodesic(self):
        dom = (0.0, 1.0)
        m = kv.DoublyWarpedMetric(2, 2, cv.constant_curve(1.0, dom),
                                  cv.constant_curve(2.0, dom))
        prof = kv.slice_II(m, 0.5)
        assert prof.entries == {"sphere_p": 0.0, "sphere_q": 0.0}

    def test_round_sphere_slice_values(self):
        m = round_sphere_metric()
        prof = kv.slice_II(m, PI / 4)
        assert abs(prof.entries["sphere_p"] - 1.0) < 1e-12
        assert abs(prof.entries["sphere_q"] + 1.0) < 1e-12

    @given(R=st.floats(0.5, 3.0), x=st.floats(0.15, 0.85))
    @settings(max_examples=40, deadline=None)
    def test_rescaling_divides_eigenvalues_exactly(self, R, x):
        m = round_sphere_metric()
        t = x * PI / 2
        p1 = kv.slice_II(m, t)
        p2 = kv.slice_II(m.rescaled(R), R * t)
        for key in p1.entries:
            assert abs(p2.entries[key] - p1.entries[key] / R) \
                <= 1e-12 * (1 + abs(p1.entries[key] / R))

    def test_collapse_point_rejected(self):
        m = round_sphere_metric()
        with pytest.raises(kv.CollapseError):
            kv.slice_II(m, 0.0)


class TestGraphII:
    def test_constant_height_reduces_to_slice_data(self):
        f = cv.line_curve(1.0, 0.5, (0.0, 3.0))
        R = cv.sine_curve(1.0, 1.0, 0.0, (0.1, 1.4))
        alpha = cv.constant_curve(0.7, (0.1, 1.4))
        prof = kv.graph_II(f, R, alpha, 0.8)
        fv, f1 = f(0.7), f(0.7, 1)
        assert abs(prof.entries["radial"] - f1 * fv) < 1e-12
        assert abs(prof.entries["sphere"] - f1 * fv) < 1e-12
        assert prof.entries["mixed"] == 0.0

    def test_cut_cone_linear_slope_vanishing_combination(self):
        lam1, eps1 = 0.9, 0.05
        f = cv.line_curve(1.0, lam1, (-0.5, 40.0))
        R = cv.sine_curve(0.9, 1.0, 0.0, (0.01, PI / 2))
        alpha = _cut_height(lam1, eps1)
        prof = kv.graph_II(f, R, alpha, eps1)
        assert abs(prof.entries["radial"]) < 1e-12

    def test_steeper_initial_slope_gives_positive_margin(self):
        lam1, lam2, eps1 = 0.9, 0.95, 0.05
        f = cv.make_concave_profile(lam1, lam2, 0.1, t_max=40.0)
        R = cv.sine_curve(0.9, 1.0, 0.0, (0.01, PI / 2))
        alpha = _cut_height(lam1, eps1)
        prof = kv.graph_II(f, R, alpha, eps1)
        assert abs(prof.entries["radial"] - (lam2 - lam1)) < 1e-12

    def test_down_orientation_flips_signs(self):
        f = cv.line_curve(1.0, 0.5, (0.0, 3.0))
        R = cv.sine_curve(1.0, 1.0, 0.0, (0.1, 1.4))
        alpha = cv.constant_curve(0.7, (0.1, 1.4))
        up = kv.graph_II(f, R, alpha, 0.8, "up")
        down = kv.graph_II(f, R, alpha, 0.8, "down")
        for key in up.entries:
            assert up.entries[key] == -down.entries[key]


def _cut_height(lam1, eps1):
    dom = (eps1, PI / 2)

    def x(s):
        return lam1 * (np.asarray(s, float) - eps1)

    return cv.curve_from_derivs(
        dom,
        lambda s: (1.0 / np.cos(x(s)) - 1.0) / lam1,
        lambda s: np.sin(x(s)) / np.cos(x(s)) ** 2,
        lambda s: lam1 * (1 + np.sin(x(s)) ** 2) / np.cos(x(s)) ** 3,
        lambda s: lam1 ** 2 * np.tan(x(s)) / np.cos(x(s))
        * (np.tan(x(s)) ** 2 + 5.0 / np.cos(x(s)) ** 2))


class TestBundleWarped:
    def test_trivial_bundle_equal_warps_reduce_to_doubly_warped(self):
        dom = (0.0, 1.0)
        f = cv.sine_curve(1.0, 1.0, 0.3, dom)
        mb = kv.BundleWarpedMetric.trivial(2, 3, f, f)
        md = kv.DoublyWarpedMetric(3, 2, f, f)
        bw = kv.bundle_warped_ricci(mb, 0.5)
        dw = kv.doubly_warped_curvature(md, 0.5)
        assert abs(bw["ric_tt"] - dw["ric_tt"]) < 1e-12
        assert abs(bw["ric_XX_lb"] - dw["ric_uu"]) < 1e-12
        assert abs(bw["ric_VV_lb"] - dw["ric_vv"]) < 1e-12
        assert bw["ric_XV_abs_ub"] == 0.0

    def test_constant_warps_leave_only_fibre_term(self):
        r = 0.37
        dom = (0.0, 1.0)
        m = kv.BundleWarpedMetric.trivial(
            2, 3, cv.constant_curve(1.0, dom), cv.constant_curve(r, dom),
            ricci_fibre_lb=0.8)
        cp = kv.bundle_warped_ricci(m, 0.5)
        assert abs(cp["ric_VV_lb"] - 0.8 * 1 / r ** 2) < 1e-12

    def test_mixed_bound_zero_for_trivial_bundles(self):
        dom = (0.0, 1.0)
        m = kv.BundleWarpedMetric.trivial(2, 2,
                                          cv.constant_curve(1.0, dom),
                                          cv.constant_curve(1.0, dom))
        assert kv.bundle_warped_ricci(m, 0.3)["ric_XV_abs_ub"] == 0.0

    def test_unfavorable_base_term_uses_sup(self):
        dom = (0.0, 1.0)
        plain = kv.BundleWarpedMetric.trivial(
            2, 3, cv.constant_curve(1.0, dom), cv.constant_curve(1.0, dom))
        bounded = kv.BundleWarpedMetric(
            2, 3, cv.constant_curve(1.0, dom), cv.constant_curve(1.0, dom),
            a_bounds=kv.ABounds(sup_AX2=0.5, sup_deltaA=0.25))
        a = kv.bundle_warped_ricci(plain, 0.5)
        b = kv.bundle_warped_ricci(bounded, 0.5)
        assert abs((a["ric_XX_lb"] - b["ric_XX_lb"]) - 2 * 0.5) < 1e-12
        assert abs(b["ric_XV_abs_ub"] - 0.25) < 1e-12


class TestSubmersionBounds:
    def test_product_case_positive_for_every_r(self):
        for r in (0.01, 0.5, 3.0, 50.0):
            cp = kv.submersion_shrink_bounds(1.0, 1.0, kv.ABounds(), r)
            assert cp["ric_vertical_lb"] > 0
            assert cp["ric_horizontal_lb"] > 0
            assert cp["ric_mixed_abs_ub"] == 0.0
            assert cp["r_star"] == math.inf

    def test_threshold_value(self):
        cp = kv.submersion_shrink_bounds(1.0, 1.0,
                                         kv.ABounds(sup_AX2=2.0), 0.1)
        assert abs(cp["r_star"] - 0.5) < 1e-15
        assert cp["ric_horizontal_lb"] == 1.0 - 4.0 * 0.01

    def test_mixed_bound_vanishes_as_r_shrinks(self):
        vals = [kv.submersion_shrink_bounds(
            1.0, 1.0, kv.ABounds(sup_deltaA=3.0), r)["ric_mixed_abs_ub"]
            for r in (0.1, 0.01, 0.001)]
        assert vals[2] < vals[1] < vals[0]
        assert vals[2] < 1e-5

    def test_threshold_absent_without_positive_bounds(self):
        cp = kv.submersion_shrink_bounds(-1.0, 1.0, kv.ABounds(), 0.5)
        assert "r_star" not in cp.entries


class TestCohomogOne:
    def wu_metric(self):
        f0 = cv.cosine_curve(2 / PI, PI / 2, 0.0, (-1.0, 1.0))
        h0 = cv.constant_curve(2 / PI, (-1.0, 1.0))
        return kv.CohomogOneMetric(2, 2, f0, h0)

    def test_symmetric_family_diagonal_at_origin(self):
        cp = kv.cohomog1_ricci(self.wu_metric(), 0.0, "wu")
        assert abs(cp["ric_tt"] - (PI / 2) ** 2) < 1e-12
        assert abs(cp["ric_VV"] - 3 * (PI / 2) ** 2) < 1e-12
        assert abs(cp["ric_XX"] - PI ** 2 / 2) < 1e-12

    def test_projective_d2n2_matches_wu_formulas(self):
        m = self.wu_metric()
        ts = np.linspace(-0.9, 0.9, 20)
        wu = kv.cohomog1_sweep(m, ts, "wu")
        proj = kv.cohomog1_sweep(m, ts, "projective")
        for key in wu:
            assert np.max(np.abs(wu[key] - proj[key])) < 1e-12

    def test_symmetric_projective_metric_is_einstein(self):
        f0 = cv.cosine_curve(2 / PI, PI / 2, 0.0, (-1.0, 1.0))
        h0 = cv.sine_curve(4 / PI, PI / 4, PI / 4, (-1.0, 1.0))
        m = kv.CohomogOneMetric(2, 3, f0, h0)
        ts = np.concatenate([[-1.0], np.linspace(-0.95, 0.95, 21), [1.0]])
        sweep = kv.cohomog1_sweep(m, ts, "projective")
        for key in sweep:
            assert np.max(np.abs(sweep[key] - sweep["ric_tt"][0])) < 1e-9

    def test_equal_warps_match_single_warp_formula(self):
        dom = (-1.0, 1.0)
        f = cv.curve_from_derivs(
            dom,
            lambda t: 1.1 + 0.2 * np.cos(t),
            lambda t: -0.2 * np.sin(t),
            lambda t: -0.2 * np.cos(t),
            lambda t: 0.2 * np.sin(t))
        for d, n in ((2, 3), (4, 2)):
            m = kv.CohomogOneMetric(d, n, f, f)
            cp = kv.cohomog1_ricci(m, 0.4, "projective")
            nd = n * d
            fv, f1, f2 = f(0.4), f(0.4, 1), f(0.4, 2)
            single = -f2 / fv + (nd - 2) * (1 - f1 ** 2) / fv ** 2
            assert abs(cp["ric_VV"] - single) < 1e-12
            assert abs(cp["ric_XX"] - single) < 1e-12
            md = kv.DoublyWarpedMetric(d - 1, (n - 1) * d, f, f)
            dw = kv.doubly_warped_curvature(md, 0.4)
            assert abs(cp["ric_tt"] - dw["ric_tt"]) < 1e-12

    def test_wu_endpoints(self):
        cp = kv.cohomog1_ricci(self.wu_metric(), 1.0, "wu")
        assert abs(cp["ric_tt"] - (PI / 2) ** 2) < 1e-12
        assert abs(cp["ric_VV"] - (PI / 2) ** 2) < 1e-12
        assert abs(cp["ric_XX"] - PI ** 2) < 1e-12

    def test_interior_singularity_rejected(self):
        f0 = cv.sine_curve(1.0, PI, 0.0, (-1.0, 1.0))   # vanishes at 0
        h0 = cv.constant_curve(1.0, (-1.0, 1.0))
        m = kv.CohomogOneMetric(2, 2, f0, h0)
        with pytest.raises(kv.InvalidMetricError):
            kv.cohomog1_ricci(m, 0.0, "wu")


class TestFiniteDifferenceOracle:
    def test_flat_space_is_ricci_flat(self):
        ric = kv.fd_ricci(kv.flat_chart(3), [0.1, -0.2, 0.3])
        assert np.max(np.abs(ric)) < 1e-8

    def test_unit_three_sphere_eigenvalues(self):
        f = cv.sine_curve(1.0, 1.0, 0.0, (0.0, PI / 2))
        h = cv.cosine_curve(1.0, 1.0, 0.0, (0.0, PI / 2))
        m = kv.DoublyWarpedMetric(1, 1, f, h, collapse_start="f",
                                  collapse_end="h")
        chart = kv.doubly_warped_chart(m)
        ric = kv.fd_ricci(chart, [0.7, 1.1, 0.9])
        g = chart.metric([0.7, 1.1, 0.9])
        evals = np.linalg.eigvalsh(np.linalg.solve(g, ric))
        assert np.max(np.abs(evals - 2.0)) < 1e-4

    def test_oracle_matches_closed_form(self):
        rep = kv.oracle_cross_check(round_sphere_metric(), n_points=10,
                                    seed=3)
        assert rep["max_rel_error"] < 1e-4
        rep = kv.oracle_cross_check(cylinder_metric(), n_points=10, seed=4)
        assert rep["max_rel_error"] < 1e-4

    def test_stencil_guard(self):
        with pytest.raises(kv.StencilError):
            kv.fd_ricci(kv.flat_chart(2), [0.9999, 0.0])
