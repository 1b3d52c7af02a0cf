import math

import pytest

from warpbench import blocks as bk
from warpbench import feasibility as fs


class TestParamBox:
    def test_open_interval_offset(self):
        iv = fs.Interval(0.0, 1.0, open_lo=True)
        pts = iv.points(3)
        assert pts[0] > 0.0
        assert pts[-1] == 1.0

    def test_grid_size_and_order(self):
        box = fs.ParamBox({"b": (0.0, 1.0), "a": (2.0, 3.0)}, 2)
        samples = list(box.full_grid())
        assert len(samples) == 4
        assert box.names == ["a", "b"]

    def test_random_sampling_deterministic(self):
        box = fs.ParamBox({"x": (0.0, 1.0), "y": (0.0, 1.0)}, 64)
        s1 = box.random_samples(10, seed=7)
        s2 = box.random_samples(10, seed=7)
        assert s1 == s2


class TestScan:
    def test_single_point_box_returns_that_point(self):
        box = fs.ParamBox({"c": (1.0, 1.0), "C": (10.0, 10.0)}, 1)

        def conf(**kw):
            pass
        cert = fs.scan(fs.ParamBox({"t0": (math.pi / 2, math.pi / 2)}, 1),
                       "fibre-disc", budget=4)
        assert len(cert.entries) == 1
        assert cert.entries[0].params == {"t0": math.pi / 2}

    def test_shallow_slopes_yield_empty_certificate(self):
        box = fs.ParamBox({"lambda1": (0.1, 0.3)},
                          {"lambda1": 3})
        cert = fs.scan(box, "handle1-tied", budget=10,
                       fixed={"eps1": 0.05, "eps2": 0.1})
        assert cert.entries == []
        assert cert.failures == 3

    def test_handle_box_has_passing_samples(self):
        box = fs.ParamBox({"lambda1": (0.975, 0.989), "eps1": (0.01, 0.02)},
                          {"lambda1": 2, "eps1": 2})
        cert = fs.scan(box, "handle1-tied", budget=10,
                       fixed={"eps2": 0.1})
        assert cert.entries
        best = cert.best
        assert best.verdict == "pass"
        # entries are sorted by margin, descending
        margins = [e.min_margin for e in cert.entries]
        assert margins == sorted(margins, reverse=True)

    def test_determinism(self):
        box = fs.ParamBox({"lam": (0.3, 0.6), "q": (3, 3)},
                          {"lam": 16, "q": 1})
        c1 = fs.scan(box, "s1", budget=6, seed=11)
        c2 = fs.scan(box, "s1", budget=6, seed=11)
        assert c1.to_json_dict() == c2.to_json_dict()

    def test_soundness_at_double_resolution(self):
        box = fs.ParamBox({"lam": (0.4, 0.55)}, {"lam": 3})
        cert = fs.scan(box, "s1", budget=10)
        assert cert.entries
        for entry in cert.entries:
            rep = bk.build_s1_block(3, entry.params["lam"], grid=4096)
            assert rep.passed
            assert rep.min_margin() > 0


class TestRefine:
    def test_target_at_existing_best_returns_input(self):
        box = fs.ParamBox({"lam": (0.4, 0.5)}, {"lam": 2})
        cert = fs.scan(box, "s1", budget=5)
        out = fs.refine(cert, cert.best.min_margin)
        assert out is cert

    def test_refine_closed_form_toward_target(self):
        box = fs.ParamBox({"a": (0.05, 1.2, "("), "b": (1.2, 1.9)},
                          {"a": 4, "b": 3})
        cert = fs.scan(box, "handle2-closed-form", budget=20)
        assert cert.entries
        out = fs.refine(cert, 0.05)
        assert out.best.min_margin >= 0.05
        # the closed-form bound is monotone decreasing in the dig slope,
        # so a certified margin this large pins the slope to a small range
        assert out.best.params["a"] <= 0.55

    def test_empty_certificate_rejected(self):
        empty = fs.Certificate("s1", [], {"box": {}})
        with pytest.raises(fs.RefineError):
            fs.refine(empty, 0.1)

    def test_unreachable_target_raises(self):
        box = fs.ParamBox({"lam": (0.45, 0.5)}, {"lam": 2})
        cert = fs.scan(box, "s1", budget=5)
        with pytest.raises(fs.RefineError):
            fs.refine(cert, 1e9, max_iter=5)
