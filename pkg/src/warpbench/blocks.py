"""Builders for the named metric constructions: the cone-stretched core,
the two handle pieces and their assembly, the curvature-transfer cylinder,
the circle-bundle variant, fibre-disc warps, doubly warped sphere
transitions, the projective and five-dimensional cohomogeneity-one
families, and the conformal boundary-layer margin.

Every builder returns a BlockReport whose margins are minima over sample
grids; the verdict is pass iff every margin is positive.  Reports are
deterministic functions of the parameter record and grid density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._util import (PLATEAU_MASS, cumulative_hermite, grid_points,
                    plateau, smooth_step)
from .curves import (JoinBandError, SmoothCurve, constant_curve,
                     cosine_curve, curve_from_derivs, even_extension,
                     flatness_margin, integrate_transfer_odes, line_curve,
                     linear_combo, make_concave_profile, parity_margin,
                     piecewise_curve, poly_curve, sin_of, sine_curve,
                     smooth_join, table_curve)
from .curvature import (ABounds, BundleWarpedMetric, CohomogOneMetric,
                        DoublyWarpedMetric, bundle_warped_sweep,
                        cohomog1_sweep, doubly_warped_sweep, graph_ii_sweep)
from .gluing import BoundaryProfile, Corner

__all__ = [
    "Margin", "BlockReport", "BuildError", "HorizonError",
    "build_cone_metric", "build_handle1", "corner_angle_handle1",
    "build_handle2", "corner_angle_handle2", "assemble_handle",
    "build_transfer_block",
    "build_s1_block", "build_fibre_disc_warp", "build_sphere_transition",
    "projective_family_check", "wu_family_check",
    "boundary_conformal_margin",
]


class BuildError(ValueError):
    pass


class HorizonError(RuntimeError):
    """The integration horizon ended before the target slope was reached."""


_TRANSFER_ODE_CACHE: dict = {}


@dataclass(frozen=True)
class Margin:
    label: str
    min: float
    argmin: float = 0.0


@dataclass
class BlockReport:
    block: str
    params: dict
    margins: list
    boundary: dict = field(default_factory=dict)
    aux: dict = field(default_factory=dict)
    sweeps: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        for m in self.margins:
            if not m.min > 0.0:
                return f"fail:{m.label}"
        return "pass"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def min_margin(self) -> float:
        return min((m.min for m in self.margins), default=float("inf"))

    def margin(self, label: str) -> Margin:
        for m in self.margins:
            if m.label == label:
                return m
        raise KeyError(label)

    def to_json_dict(self) -> dict:
        def _aux(v):
            if isinstance(v, float) and not math.isfinite(v):
                return repr(v)
            return v
        return {
            "block": self.block,
            "params": {k: _aux(v) for k, v in self.params.items()
                       if isinstance(v, (int, float, str, bool, type(None)))},
            "margins": [{"label": m.label, "min": m.min, "argmin": m.argmin}
                        for m in self.margins],
            "verdict": self.verdict,
            "boundary": {name: {"kind": p.kind, "dimension": p.dimension,
                                "families": sorted(p.ii)}
                         for name, p in self.boundary.items()},
            "aux": {k: _aux(v) for k, v in self.aux.items()
                    if isinstance(v, (int, float, str, bool, type(None)))},
        }


def _min_margin(label: str, ts, values) -> Margin:
    i = int(np.argmin(values))
    return Margin(label, float(values[i]), float(ts[i]))


def _tab_from_samples(ts: np.ndarray, vals: np.ndarray,
                      provenance="blended") -> SmoothCurve:
    d1 = np.gradient(vals, ts)
    d2 = np.gradient(d1, ts)
    d3 = np.gradient(d2, ts)
    return table_curve(ts, (vals, d1, d2, d3), provenance)


def _reparam_columns(y_cols, r_cols):
    """Derivatives of y with respect to arc length r, both given as
    derivative columns with respect to the original parameter."""
    y0, y1, y2, y3 = y_cols
    r1, r2, r3 = r_cols
    yr = y1 / r1
    A = y2 * r1 - y1 * r2
    yrr = A / r1 ** 3
    Ad = y3 * r1 - y1 * r3
    yrrr = Ad / r1 ** 4 - 3.0 * A * r2 / r1 ** 5
    return y0, yr, yrr, yrrr


def _graph_principal_curvatures(f, R, alpha, ss, orientation="up"):
    """Principal curvatures (eigenvalues of the shape operator) of the
    graph hypersurface; the unnormalized forms divided by the squared
    lengths of the corresponding tangent vectors."""
    ii = graph_ii_sweep(f, R, alpha, ss, orientation)
    a1 = alpha.eval(ss, 1)
    fv = f.eval(alpha.eval(ss, 0), 0)
    return {"radial": ii["radial"] / (fv ** 2 + a1 ** 2),
            "sphere": ii["sphere"] / fv ** 2}


# ---------------------------------------------------------------------------
# Cone-stretched core metric.
# ---------------------------------------------------------------------------

def build_cone_metric(n: int, K: float, eps1: float, eps2: float,
                      delta: float, t: float, grid=None):
    """Sine-pieced warp with interpolation slope K_t = 1 - t(1-K) and the
    Ricci lower bound (n-1) K_t^2 certified on the grid.

    Returns (warp curve, report).  At t = 1, multiplying the metric by K^2
    turns the middle piece into K sin(s) with Ricci bound n - 1.
    """
    if n < 3:
        raise BuildError("need n >= 3")
    if not 0.0 < K < 1.0:
        raise BuildError("K must lie in (0, 1); degenerate K=1 is rejected")
    if not 0.0 <= t <= 1.0:
        raise BuildError("t must lie in [0, 1]")
    if min(eps1, eps2, delta) <= 0:
        raise BuildError("eps1, eps2, delta must be positive")
    Kt = 1.0 - t * (1.0 - K)
    eps2p = 2.0 * eps2 / (1.0 - delta)
    s_lo = (1.0 - K) * t * eps1 / (2.0 * K)
    s1 = eps1 / (2.0 * K)
    s2 = (math.pi + eps2p) / (2.0 * Kt)
    s_hi = math.pi / (2.0 * Kt) + 0.5 * eps2p * (1.0 + 1.0 / Kt)
    if not (s_lo < s1 - delta and s1 + delta < s2 - delta
            and s2 + delta < s_hi):
        raise BuildError(
            f"domain pieces are not ordered for eps1={eps1}, eps2={eps2}, "
            f"delta={delta}")

    pad = 2.0 * delta
    arg_left = line_curve(-s_lo, 1.0, (s_lo, s1 + pad))
    arg_mid = line_curve(0.0, Kt, (s1 - pad, s2 + pad))
    shift3 = 0.5 * (math.pi + eps2p) * (1.0 / Kt - 1.0)
    arg_right = line_curve(-shift3, 1.0, (s2 - pad, s_hi))

    slope_gap = 1.0 - Kt
    band_depth = slope_gap / (PLATEAU_MASS * 2.0 * delta)
    try:
        chi1 = smooth_join(arg_left, arg_mid, (s1 - delta, s1 + delta),
                           (-1.3 * band_depth - 1e-9, 1e-9),
                           band_tol=0.35 * band_depth + 1e-9)
    except JoinBandError as exc:
        raise BuildError(f"smoothing band infeasible at the inner "
                         f"junction s1={s1:.4f}: {exc}") from exc
    try:
        chi2 = smooth_join(chi1, arg_right, (s2 - delta, s2 + delta),
                           (-1e-9, 1.3 * band_depth + 1e-9),
                           band_tol=0.35 * band_depth + 1e-9)
    except JoinBandError as exc:
        raise BuildError(f"smoothing band infeasible at the outer "
                         f"junction s2={s2:.4f}: {exc}") from exc
    warp = sin_of(chi2.restrict(s_lo, s_hi))

    ss = grid_points(s_lo, s_hi, grid)
    dw = DoublyWarpedMetric(n - 1, 1, warp,
                            constant_curve(1.0, warp.domain),
                            collapse_start="f")
    sweep = doubly_warped_sweep(dw, ss)
    bound = (n - 1) * Kt * Kt
    ric_s = (n - 1) * sweep["sec_tu"]
    ric_x = sweep["sec_tu"] + (n - 2) * sweep["sec_uu"]
    # the interpolating piece attains the bound exactly, so the relative
    # margin carries the same 1e-9 floor as every >=-type certificate
    margins = [
        _min_margin("ric_radial", ss, (ric_s - bound) / bound + 1e-9),
        _min_margin("ric_sphere", ss, (ric_x - bound) / bound + 1e-9),
    ]
    for label, join in (("slope_band_s1", chi1), ("slope_band_s2", chi2)):
        a, b = join.info.get("window", (s1 - delta, s1 + delta))
        js = np.linspace(a, b, 257)
        sl = join.eval(js, 1)
        margins.append(_min_margin(f"{label}_lower", js, sl - Kt + 1e-12))
        margins.append(_min_margin(f"{label}_upper", js, 1.0 - sl + 1e-12))
    par = parity_margin(warp, s_lo, "odd", first_derivative_target=1.0,
                        fit_width=min(0.05, 0.2 * (s1 - s_lo)))
    margins.append(Margin("collapse_parity", 1e-6 - par.max_violation, s_lo))

    report = BlockReport(
        block="cone",
        params={"n": n, "K": K, "eps1": eps1, "eps2": eps2, "delta": delta,
                "t": t},
        margins=margins,
        aux={"K_t": Kt, "eps2_prime": eps2p, "s_lo": s_lo, "s1": s1,
             "s2": s2, "s_hi": s_hi, "ric_bound": bound,
             "ric_margin_floor": 1e-9,
             "parity_first_derivative": par.first_derivative_value},
        sweeps={"ricci": {"t": ss, "columns": {"ric_radial": ric_s,
                                               "ric_sphere": ric_x,
                                               "warp": warp.eval(ss)}}},
    )
    return warp, report


# ---------------------------------------------------------------------------
# First handle piece: the cut cone over a stretched core.
# ---------------------------------------------------------------------------

def _alpha_base(lambda1: float, eps1: float, domain) -> SmoothCurve:
    """alpha(s) = (sec(lambda1 (s - eps1)) - 1)/lambda1 with hand-derived
    derivatives."""
    l1 = lambda1

    def x(s):
        return l1 * (np.asarray(s, float) - eps1)

    def d0(s):
        return (1.0 / np.cos(x(s)) - 1.0) / l1

    def d1(s):
        xx = x(s)
        return np.sin(xx) / np.cos(xx) ** 2

    def d2(s):
        xx = x(s)
        return l1 * (1.0 + np.sin(xx) ** 2) / np.cos(xx) ** 3

    def d3(s):
        xx = x(s)
        sec, tan = 1.0 / np.cos(xx), np.tan(xx)
        return l1 * l1 * tan * sec * (tan ** 2 + 5.0 * sec ** 2)

    return curve_from_derivs(domain, d0, d1, d2, d3)


def _flatten_start(base: SmoothCurve, at: float, window: float,
                   rise_frac: float = 1e-3) -> SmoothCurve:
    """Replace ``base`` near its left end so that all derivatives vanish at
    ``at`` while the second derivative stays within the band spanned by the
    original one (plus a small redistribution correction).

    The rise happens over rise_frac of the window; the deleted slope and
    value mass is restored by a plateau and its tilt over the rest, so the
    curve rejoins ``base`` smoothly at ``at + window``.
    """
    w = window
    omega = max(rise_frac * w, 1e-5)
    u_nodes = np.concatenate([
        np.linspace(0.0, 2.0 * omega, 129),
        np.linspace(2.0 * omega, w, 1537)[1:],
    ])
    s_nodes = at + u_nodes

    def S(u, k=0):
        return smooth_step(np.asarray(u, float) / omega, k) / omega ** k

    def G1(u, k=0):
        x = np.asarray(u, float) / w
        return plateau(x, k) / (PLATEAU_MASS * w ** (k + 1))

    def G2(u, k=0):
        x = np.asarray(u, float) / w
        if k == 0:
            return (x - 0.5) * G1(u)
        if k == 1:
            return G1(u) / w + (x - 0.5) * G1(u, 1)
        return 2.0 * G1(u, k - 1) / w + (x - 0.5) * G1(u, k)

    a2 = base.eval(s_nodes, 2)
    a3 = base.eval(s_nodes, 3)
    b2 = a2 * S(u_nodes)
    b3 = a3 * S(u_nodes) + a2 * S(u_nodes, 1)

    def cum(y, dy):
        return cumulative_hermite(u_nodes, y, dy)

    wu = w - u_nodes
    i_b = cum(b2, b3)[-1]
    iw_b = cum(wu * b2, -b2 + wu * b3)[-1]
    g1, g1d = G1(u_nodes), G1(u_nodes, 1)
    g2, g2d = G2(u_nodes), G2(u_nodes, 1)
    mat = np.array([[cum(g1, g1d)[-1], cum(g2, g2d)[-1]],
                    [cum(wu * g1, -g1 + wu * g1d)[-1],
                     cum(wu * g2, -g2 + wu * g2d)[-1]]])
    # value and slope vanish at `at`, so the targets are the raw values
    rhs = np.array([base.eval(at + w, 1) - i_b,
                    base.eval(at + w, 0) - iw_b])
    c1, c2 = np.linalg.solve(mat, rhs)

    out2 = b2 + c1 * g1 + c2 * g2
    out3 = b3 + c1 * g1d + c2 * g2d
    out1 = cum(out2, out3)
    out0 = cum(out1, out2)

    def d2f(s):
        u = np.asarray(s, float) - at
        return (base.eval(s, 2) * S(u) + c1 * G1(u) + c2 * G2(u))

    def d3f(s):
        u = np.asarray(s, float) - at
        return (base.eval(s, 3) * S(u) + base.eval(s, 2) * S(u, 1)
                + c1 * G1(u, 1) + c2 * G2(u, 1))

    win = curve_from_derivs(
        (at, at + w),
        lambda s: _hermite(s_nodes, out0, out1, s),
        lambda s: _hermite(s_nodes, out1, out2, s),
        d2f, d3f, "blended")
    tail = base.restrict(at + w, base.t_hi)
    return piecewise_curve([(at, at + w, win),
                            (at + w, base.t_hi, tail)])


def _hermite(ts, ys, dys, t):
    from ._util import hermite_interp
    return hermite_interp(ts, ys, dys, t)


def _near_linear_ramp(x, k: int = 0, rise: float = 0.1):
    """C-infinity ramp 0 -> 1 on [0,1] with slope close to one (flat ends);
    the integral of the normalized plateau."""
    x = np.asarray(x, float)
    if k == 0:
        return _RAMP.value(x)
    return plateau(x, k - 1, rise) / _RAMP.mass


class _Ramp:
    def __init__(self, rise=0.1, n=8193):
        xs = np.linspace(0.0, 1.0, n)
        y = plateau(xs, 0, rise)
        dy = plateau(xs, 1, rise)
        cum = cumulative_hermite(xs, y, dy)
        self.mass = cum[-1]
        self._xs = xs
        self._cum = cum / cum[-1]
        self._d = y / cum[-1]
        self.rise = rise

    def value(self, x):
        x = np.asarray(x, float)
        out = _hermite(self._xs, self._cum, self._d, np.clip(x, 0.0, 1.0))
        return np.where(x <= 0, 0.0, np.where(x >= 1, 1.0, out))


_RAMP = _Ramp()


def _handle1_beta(eps2: float) -> SmoothCurve:
    """beta on [pi/2, pi/2 + eps2]: beta(pi/2)=0, beta'(pi/2)=-2, all
    derivatives vanish at the outer end, slope profile near-linear so the
    second derivative stays close to its minimal size 2/eps2."""
    a = math.pi / 2.0

    def x(s):
        return (np.asarray(s, float) - a) / eps2

    def d1(s):
        return -2.0 * (1.0 - _near_linear_ramp(x(s)))

    def d2(s):
        return 2.0 * _near_linear_ramp(x(s), 1) / eps2

    def d3(s):
        return 2.0 * _near_linear_ramp(x(s), 2) / eps2 ** 2

    ss = np.linspace(a, a + eps2, 2049)
    d1s = d1(ss)
    vals = cumulative_hermite(ss, d1s, d2(ss))
    return curve_from_derivs(
        (a, a + eps2),
        lambda s: _hermite(ss, vals, d1s, s),
        d1, d2, d3, "blended")


def corner_angle_handle1(lambda1: float, eps1: float) -> float:
    """Corner angle of the cut in the linear-slope model: arccos of
    (2 a' - F^2) / (sqrt(a'^2 + F^2) sqrt(4 + F^2)) with
    F = sec(lambda1 (pi/2 - eps1)) and a' = sin/cos^2 at the same argument.
    """
    x = lambda1 * (math.pi / 2.0 - eps1)
    if not x < math.pi / 2.0:
        raise BuildError("lambda1 (pi/2 - eps1) must stay below pi/2")
    F = 1.0 / math.cos(x)
    ap = math.sin(x) / math.cos(x) ** 2
    cos_theta = (2.0 * ap - F * F) / (math.sqrt(ap * ap + F * F)
                                      * math.sqrt(4.0 + F * F))
    return math.acos(max(-1.0, min(1.0, cos_theta)))


def build_handle1(n: int, K: float, lambda1: float, lambda2: float,
                  eps1: float, eps2: float, delta: float,
                  grid=None) -> BlockReport:
    """Cut-cone handle over the stretched core: certifies positivity of the
    graph second fundamental form on both zones, concavity of the cap
    profile, a corner angle below pi/2 and the inner-face curvature floor.
    """
    if not 0 < lambda1 < lambda2 < 1:
        raise BuildError("need 0 < lambda1 < lambda2 < 1")
    if not 0 < eps1 < math.pi / 4:
        raise BuildError("eps1 must lie in (0, pi/4); 0 is rejected")
    if not 0 < eps2 <= 1.0:
        raise BuildError("eps2 must lie in (0, 1]")
    if n < 3 or not 0 < K < 1:
        raise BuildError("need n >= 3 and K in (0, 1)")
    x_top = lambda1 * (math.pi / 2.0 - eps1)
    if x_top >= math.pi / 2.0 - 1e-9:
        raise BuildError("cut reaches the pole: decrease lambda1 or eps1")

    alpha_top_lin = (1.0 / math.cos(x_top) - 1.0) / lambda1
    f = make_concave_profile(lambda1, lambda2, delta,
                             t_max=alpha_top_lin / lambda1 + 10.0)
    lam = f.info["slope_at_inner"]

    s_hi = math.pi / 2.0
    base = _alpha_base(lambda1, eps1, (eps1, s_hi))
    w_flat = min(0.05, 0.25 * (s_hi - eps1))
    alpha = _flatten_start(base, eps1, w_flat)
    alpha_top = float(alpha.eval(s_hi, 0))

    R_sphere = sine_curve(K, 1.0, 0.0, (0.5 * eps1, s_hi + eps2 + 0.05))

    ss = np.unique(np.concatenate([
        grid_points(eps1, s_hi, grid),
        np.linspace(eps1, eps1 + w_flat, 257),
        eps1 + np.linspace(0.0, 3e-3 * w_flat, 65),
    ]))
    cap_ii = graph_ii_sweep(f, R_sphere, alpha, ss, "up")
    margins = [
        _min_margin("radial_ii_cap", ss, cap_ii["radial"]),
        _min_margin("sphere_ii_cap", ss, cap_ii["sphere"]),
    ]
    interior = ss < s_hi - 1e-9
    chain = (lambda1 * np.tan(ss[interior])
             - np.tan(lambda1 * (ss[interior] - eps1)))
    margins.append(_min_margin("tan_chain", ss[interior], chain))

    beta = _handle1_beta(eps2)
    alpha_out = beta.plus(alpha_top)
    so = grid_points(s_hi, s_hi + eps2, grid, min_points=513)
    out_ii = graph_ii_sweep(f, R_sphere, alpha_out, so, "up")
    margins.append(_min_margin("radial_ii_outer", so, out_ii["radial"]))
    margins.append(_min_margin("sphere_ii_outer", so, out_ii["sphere"]))

    # cap profile in the linear-slope model
    r_max = math.tan(x_top) / lambda1
    l1 = lambda1

    def s_of_r(r):
        return np.arctan(l1 * np.asarray(r, float)) / l1 + eps1

    def phi0(r):
        r = np.asarray(r, float)
        return np.sin(s_of_r(r)) * np.sqrt(1.0 + l1 * l1 * r * r)

    def phi1(r):
        r = np.asarray(r, float)
        sr = s_of_r(r)
        return (np.cos(sr) + l1 * l1 * r * np.sin(sr)) / np.sqrt(
            1.0 + l1 * l1 * r * r)

    def phi2(r):
        r = np.asarray(r, float)
        return (np.sin(s_of_r(r)) * (l1 * l1 - 1.0)
                / (1.0 + l1 * l1 * r * r) ** 1.5)

    def phi3(r):
        r = np.asarray(r, float)
        q = 1.0 + l1 * l1 * r * r
        sr = s_of_r(r)
        return (l1 * l1 - 1.0) * (np.cos(sr) / q ** 2.5
                                  - 3.0 * l1 * l1 * r * np.sin(sr) / q ** 2.5)

    rr = grid_points(0.0, r_max, grid, min_points=513)
    margins.append(_min_margin("cap_concavity", rr, -phi2(rr)))
    margins.append(Margin("cap_slope_gap", 1.0 - math.cos(eps1), 0.0))

    # corner angle: actual curve data against the linear-slope closed form
    ap = float(alpha.eval(s_hi, 1))
    bp = float(beta.eval(s_hi, 1))
    F = float(f.eval(alpha_top, 0))
    cos_theta = (-ap * bp - F * F) / (math.sqrt(ap * ap + F * F)
                                      * math.sqrt(bp * bp + F * F))
    theta = math.acos(max(-1.0, min(1.0, cos_theta)))
    theta_cf = corner_angle_handle1(lambda1, eps1)
    margins.append(Margin("corner_angle", math.pi / 2.0 - theta, s_hi))
    agree_tol = 10.0 * (lambda2 - lambda1)
    margins.append(Margin("angle_agreement",
                          agree_tol - abs(theta - theta_cf), s_hi))
    sign_cf = 2.0 * math.sin(x_top) - 1.0
    margins.append(Margin(
        "angle_sign_agreement",
        1.0 if (math.cos(theta) > 0) == (sign_cf > 0) else -1.0, s_hi))
    margins.append(Margin("inner_slope_gap", 1.0 - lam, -delta))

    # boundary profiles (principal curvatures over true arc length) --------
    spd = np.sqrt(alpha.eval(ss, 1) ** 2 + f.eval(alpha.eval(ss), 0) ** 2)
    u_arc = cumulative_hermite(ss, spd, np.gradient(spd, ss))
    cap_warp_vals = f.eval(alpha.eval(ss), 0) * K * np.sin(ss)
    cap_pc = _graph_principal_curvatures(f, R_sphere, alpha, ss, "up")
    cap_profile = BoundaryProfile(
        dimension=n, kind="warped-sphere",
        metric={"warp": _tab_from_samples(u_arc, cap_warp_vals),
                "descriptor": "cap"},
        ii={"radial": _tab_from_samples(u_arc, cap_pc["radial"]),
            "sphere": _tab_from_samples(u_arc, cap_pc["sphere"])})
    u_cap = float(u_arc[-1])

    # outer collar warp as a function of true arc length from the corner,
    # with analytic chain-rule derivative columns (the far end seeds the
    # next piece's boundary data, so endpoint derivatives must be clean)
    b1v, b2v, b3v = (beta.eval(so, 1), beta.eval(so, 2), beta.eval(so, 3))
    Fv = f.eval(alpha_out.eval(so), 0)
    F1 = f.eval(alpha_out.eval(so), 1) * b1v
    F2 = (f.eval(alpha_out.eval(so), 2) * b1v ** 2
          + f.eval(alpha_out.eval(so), 1) * b2v)
    F3 = (f.eval(alpha_out.eval(so), 3) * b1v ** 3
          + 3.0 * f.eval(alpha_out.eval(so), 2) * b1v * b2v
          + f.eval(alpha_out.eval(so), 1) * b3v)
    spd_o = np.sqrt(b1v ** 2 + Fv ** 2)
    spd_o1 = (b1v * b2v + Fv * F1) / spd_o
    spd_o2 = (b2v ** 2 + b1v * b3v + F1 ** 2 + Fv * F2
              - spd_o1 ** 2) / spd_o
    r_arc = cumulative_hermite(so, spd_o, spd_o1)
    sn, cn = np.sin(so), np.cos(so)
    y0 = Fv * K * sn
    y1 = K * (F1 * sn + Fv * cn)
    y2 = K * (F2 * sn + 2.0 * F1 * cn - Fv * sn)
    y3 = K * (F3 * sn + 3.0 * F2 * cn - 3.0 * F1 * sn - Fv * cn)
    outer_cols = _reparam_columns((y0, y1, y2, y3),
                                  (spd_o, spd_o1, spd_o2))
    outer_warp = table_curve(r_arc, outer_cols, "blended")
    out_pc = _graph_principal_curvatures(f, R_sphere, alpha_out, so, "up")
    # past the dug zone the face is a slice with curvature f'/f
    flat_pc = float(f.eval(alpha_out.eval(s_hi + eps2), 1)
                    / f.eval(alpha_out.eval(s_hi + eps2), 0))
    tail_len = 2.0 * float(r_arc[-1])
    outer_ii = {
        key: piecewise_curve([
            (0.0, r_arc[-1], _tab_from_samples(r_arc, out_pc[key])),
            (r_arc[-1], r_arc[-1] + tail_len,
             constant_curve(flat_pc, (r_arc[-1], r_arc[-1] + tail_len)))])
        for key in ("radial", "sphere")}
    outer_profile = BoundaryProfile(
        dimension=n, kind="warped-sphere",
        metric={"warp": outer_warp, "descriptor": "shared-collar"},
        ii=outer_ii,
        corners=[Corner("rim", theta, ("cap", "outer"),
                        {"cap": u_cap, "outer": 0.0})])
    cap_profile.corners.append(Corner("rim", theta, ("cap", "outer"),
                                      {"cap": u_cap, "outer": 0.0}))
    bottom_profile = BoundaryProfile(
        dimension=n, kind="warped-sphere",
        metric={"warp": sine_curve(K, 1.0, 0.0, (eps1, s_hi + eps2)),
                "descriptor": "stretched-core"},
        ii={"radial": -lam, "sphere": -lam})

    report = BlockReport(
        block="handle1",
        params={"n": n, "K": K, "lambda1": lambda1, "lambda2": lambda2,
                "eps1": eps1, "eps2": eps2, "delta": delta},
        margins=margins,
        boundary={"bottom": bottom_profile, "cap": cap_profile,
                  "outer": outer_profile},
        aux={"theta": theta, "theta_closed_form": theta_cf,
             "angle_tolerance": agree_tol, "lambda": lam,
             "alpha_top": alpha_top, "r_max": r_max,
             "f_scale_at_corner": F, "u_cap": u_cap,
             "outer_arc_length": float(r_arc[-1])},
        sweeps={
            "cap_face": {"t": ss, "columns": {
                "radial_ii": cap_ii["radial"],
                "sphere_ii": cap_ii["sphere"],
                "alpha": alpha.eval(ss)}},
            "outer_face": {"t": so, "columns": {
                "radial_ii": out_ii["radial"],
                "sphere_ii": out_ii["sphere"],
                "beta": beta.eval(so)}},
            "cap_profile": {"t": rr, "columns": {
                "phi": phi0(rr), "phi_dd": phi2(rr)}},
        },
    )
    report.aux["curves"] = {"f": f, "alpha": alpha, "beta": beta}
    return report


# ---------------------------------------------------------------------------
# Second handle piece: the collar dug along a slow graph.
# ---------------------------------------------------------------------------

def _chi(u, k: int = 0):
    """One on (-inf, -1], zero on [0, inf), decreasing between."""
    if k == 0:
        return 1.0 - smooth_step(np.asarray(u, float) + 1.0)
    return -smooth_step(np.asarray(u, float) + 1.0, k)


def corner_angle_handle2(a: float) -> float:
    """Corner angle of the dug collar: arccos(-a / sqrt(1 + a^2))."""
    if a < 0:
        raise BuildError("a must be nonnegative")
    return math.acos(-a / math.sqrt(1.0 + a * a))


def _flatten_slope_end(f: SmoothCurve, tau: float, t_end: float):
    """Continue f past tau with f'' < 0 so that all derivatives vanish at
    t_end (slope rides down to zero along a plateau profile)."""
    w = t_end - tau

    def S(u, k=0):
        return smooth_step(np.asarray(u, float) / w, k) / w ** k

    def D(u, k=0):
        return plateau(np.asarray(u, float) / w, k) / (
            PLATEAU_MASS * w ** (k + 1))

    u_nodes = np.linspace(0.0, w, 2049)
    base2 = f.eval(tau + u_nodes, 2) * (1.0 - S(u_nodes))
    base3 = (f.eval(tau + u_nodes, 3) * (1.0 - S(u_nodes))
             - f.eval(tau + u_nodes, 2) * S(u_nodes, 1))
    i_base = cumulative_hermite(u_nodes, base2, base3)[-1]
    c = f.eval(tau, 1) + i_base          # mass removed by the plateau
    out2 = base2 - c * D(u_nodes)
    out3 = base3 - c * D(u_nodes, 1)
    out1 = cumulative_hermite(u_nodes, out2, out3) + f.eval(tau, 1)
    out0 = cumulative_hermite(u_nodes, out1, out2) + f.eval(tau, 0)

    def d2f(s):
        u = np.asarray(s, float) - tau
        return f.eval(s, 2) * (1.0 - S(u)) - c * D(u)

    def d3f(s):
        u = np.asarray(s, float) - tau
        return (f.eval(s, 3) * (1.0 - S(u)) - f.eval(s, 2) * S(u, 1)
                - c * D(u, 1))

    win = curve_from_derivs(
        (tau, t_end),
        lambda s: _hermite(tau + u_nodes, out0, out1, s),
        lambda s: _hermite(tau + u_nodes, out1, out2, s),
        d2f, d3f, "blended")
    return piecewise_curve([(f.t_lo, tau, f), (tau, t_end, win)]), float(c)


def build_handle2(B: SmoothCurve, lambda1: float, lambda2: float, a: float,
                  b: float, eps: float, nu: float,
                  grid=None) -> BlockReport:
    """Collar piece dug along the graph s = beta(t) into a cubic extension
    of the boundary profile B; certifies the corner angle, positivity of
    the dug face's second fundamental form (with the conservative closed
    form), positive curvature of the face metric, the inner-face floor
    -nu, and flatness of the collar warp at the far end."""
    if not 0 < lambda1 < lambda2 < 1:
        raise BuildError("need 0 < lambda1 < lambda2 < 1")
    if a <= 0:
        raise BuildError("a must be positive; a=0 is rejected")
    if b <= 1.0:
        raise BuildError("b must exceed 1")
    if b >= 1.0 / (2.0 * lambda2):
        raise BuildError(f"b must stay below 1/(2 lambda2) = "
                         f"{1.0 / (2 * lambda2):.4f}")
    if eps <= 0 or nu <= 0:
        raise BuildError("eps and nu must be positive")
    if B.t_lo > 1e-12:
        raise BuildError("B must be parametrized by distance from its "
                         "boundary (domain starting at 0)")

    probe = np.linspace(0.0, min(B.t_hi, 0.5), 65)
    if B.eval(0.0, 0) <= 0 or np.any(B.eval(probe, 1) >= 0) \
            or np.any(B.eval(probe, 2) >= 0):
        raise BuildError("B must have B > 0, B' < 0 and B'' < 0 near the "
                         "boundary")

    t_end = b + 1.0
    f_raw = make_concave_profile(lambda1, lambda2, delta=0.01,
                                 t_max=t_end + 1.0)
    f, _ = _flatten_slope_end(f_raw.restrict(0.0, t_end + 0.5),
                              b + 0.5, t_end)

    def beta1(t, k=0):
        t = np.asarray(t, float)
        if k == 0:
            return a * (t / b - 1.0) * _chi(t - b)
        if k == 1:
            return (a / b) * _chi(t - b) + a * (t / b - 1.0) * _chi(t - b, 1)
        if k == 2:
            return (2.0 * a / b) * _chi(t - b, 1) \
                + a * (t / b - 1.0) * _chi(t - b, 2)
        return (3.0 * a / b) * _chi(t - b, 2) \
            + a * (t / b - 1.0) * _chi(t - b, 3)

    tb = np.linspace(0.0, t_end, 4097)
    beta_vals = cumulative_hermite(tb, beta1(tb), beta1(tb, 1))
    beta = curve_from_derivs(
        (0.0, t_end),
        lambda t: _hermite(tb, beta_vals, beta1(tb), t),
        lambda t: beta1(t, 0), lambda t: beta1(t, 1), lambda t: beta1(t, 2),
        "blended")
    beta_end = float(beta.eval(t_end, 0))
    delta_prime = 1.05 * abs(beta_end)

    # cubic Hermite extension of B to [-delta', 0]; the third derivative is
    # chosen as zero, which keeps B'' constant (hence negative) throughout
    B0, B1, B2 = B.eval(0.0, 0), B.eval(0.0, 1), B.eval(0.0, 2)
    if B1 - B2 * delta_prime >= 0 or B0 - B1 * delta_prime <= 0:
        raise BuildError(
            f"extension infeasible: collar depth {delta_prime:.4f} too "
            f"deep for B'({B1:.4f}), B''({B2:.4f})")
    ext = poly_curve([B0, B1, B2 / 2.0], (-delta_prime, 0.0))
    B_full = piecewise_curve([(-delta_prime, 0.0, ext),
                              (0.0, B.t_hi, B)])

    # dug-face second fundamental form on t in [0, 0.98 b]
    ts = grid_points(0.0, 0.98 * b, grid, min_points=1025)
    bp = beta.eval(ts, 1)
    bpp = beta.eval(ts, 2)
    fv, f1 = f.eval(ts, 0), f.eval(ts, 1)
    al1 = 1.0 / bp
    al2 = -bpp / bp ** 3
    Bv = B_full.eval(beta.eval(ts), 0)
    Bp = B_full.eval(beta.eval(ts), 1)
    denom = np.sqrt(1.0 + (al1 / fv) ** 2)
    radial = (-f1 * fv - 2.0 * (f1 / fv) * al1 ** 2 + al2) / denom
    sphere = (-f1 * fv + (Bp / Bv) * al1) / denom
    bracket = -bp ** 2 * f1 * fv - 2.0 * f1 / fv - bpp / bp
    closed_form = (-a * a * lambda2 * (1.0 + lambda2 * b)
                   - 2.0 * lambda2 / (1.0 + lambda1 * ts)
                   + 1.0 / (b - ts))
    margins = [
        _min_margin("radial_ii", ts, radial),
        _min_margin("sphere_ii", ts, sphere),
        _min_margin("closed_form_radial", ts, closed_form),
        _min_margin("conservativity", ts, bracket + 1e-9 - closed_form),
    ]

    theta = corner_angle_handle2(a)
    margins.append(Margin("corner_angle", math.pi / 2.0 + eps - theta, 0.0))
    margins.append(Margin("bottom_convexity", nu - lambda2, 0.0))

    # face metric (1 + beta'^2 f^2) dt^2 + f^2 B(beta)^2 on the glued face
    tf = grid_points(0.0, 0.98 * t_end, grid, min_points=1025)
    bchain = [B_full.eval(beta.eval(tf), k) for k in range(4)]
    b1v = beta.eval(tf, 1)
    b2v = beta.eval(tf, 2)
    b3v = beta.eval(tf, 3)
    fw = [f.eval(tf, k) for k in range(4)]
    w0 = fw[0] * bchain[0]
    w1 = fw[1] * bchain[0] + fw[0] * bchain[1] * b1v
    w2 = (fw[2] * bchain[0] + 2.0 * fw[1] * bchain[1] * b1v
          + fw[0] * (bchain[2] * b1v ** 2 + bchain[1] * b2v))
    w3 = (fw[3] * bchain[0] + 3.0 * fw[2] * bchain[1] * b1v
          + 3.0 * fw[1] * (bchain[2] * b1v ** 2 + bchain[1] * b2v)
          + fw[0] * (bchain[3] * b1v ** 3 + 3.0 * bchain[2] * b1v * b2v
                     + bchain[1] * b3v))
    r1 = np.sqrt(1.0 + b1v ** 2 * fw[0] ** 2)
    r2 = (b1v * b2v * fw[0] ** 2 + b1v ** 2 * fw[0] * fw[1]) / r1
    r3 = (b2v ** 2 * fw[0] ** 2 + b1v * b3v * fw[0] ** 2
          + 4.0 * b1v * b2v * fw[0] * fw[1]
          + b1v ** 2 * (fw[1] ** 2 + fw[0] * fw[2]) - r2 ** 2) / r1
    _, wr, wrr, _ = _reparam_columns((w0, w1, w2, w3), (r1, r2, r3))
    margins.append(_min_margin("face_sec_radial", tf, -wrr / w0))
    margins.append(_min_margin("face_sec_sphere", tf,
                               (1.0 - wr ** 2) / w0 ** 2))
    margins.append(Margin("collar_flatness",
                          1e-8 - flatness_margin(f, t_end), t_end))

    # boundary profiles (principal curvatures; formulas rewritten so the
    # vertical tail |beta'| -> 0 stays finite) -------------------------------
    arc = cumulative_hermite(tf, r1, np.gradient(r1, tf))
    bpf = np.abs(beta.eval(tf, 1))
    bppf = beta.eval(tf, 2)
    Bvf = B_full.eval(beta.eval(tf), 0)
    Bpf = B_full.eval(beta.eval(tf), 1)
    qf = 1.0 + (fw[0] * bpf) ** 2
    pc_radial = fw[0] * (bppf - bpf ** 3 * fw[1] * fw[0]
                         - 2.0 * bpf * fw[1] / fw[0]) / qf ** 1.5
    pc_sphere = (-bpf * fw[1] * fw[0] - Bpf / Bvf) / (fw[0] * np.sqrt(qf))
    dim = int(B.info.get("dimension", 0) or 0)
    graph_profile = BoundaryProfile(
        dimension=dim, kind="warped-sphere",
        metric={"warp": _tab_from_samples(arc, w0), "descriptor": "cap"},
        ii={"radial": _tab_from_samples(arc, pc_radial),
            "sphere": _tab_from_samples(arc, pc_sphere)},
        corners=[Corner("rim", theta, ("graph_face", "bottom"),
                        {"graph_face": 0.0, "bottom": 0.0})])
    bottom_profile = BoundaryProfile(
        dimension=dim, kind="warped-sphere",
        metric={"warp": B.restrict(0.0, B.t_hi),
                "descriptor": "shared-collar"},
        ii={"radial": -lambda2, "sphere": -lambda2},
        corners=[Corner("rim", theta, ("graph_face", "bottom"),
                        {"graph_face": 0.0, "bottom": 0.0})])
    f_end = float(f.eval(t_end, 0))
    top_profile = BoundaryProfile(
        dimension=dim, kind="warped-sphere",
        metric={"warp": B.metric_rescale(f_end), "collar_warp": f,
                "descriptor": "shared-collar"},
        ii={"radial": 0.0, "sphere": 0.0})

    report = BlockReport(
        block="handle2",
        params={"lambda1": lambda1, "lambda2": lambda2, "a": a, "b": b,
                "eps": eps, "nu": nu},
        margins=margins,
        boundary={"bottom": bottom_profile, "graph_face": graph_profile,
                  "top": top_profile},
        aux={"theta": theta, "t_end": t_end, "beta_end": beta_end,
             "delta_prime": delta_prime, "f_end": f_end},
        sweeps={"dug_face": {"t": ts, "columns": {
                    "radial_ii": radial, "sphere_ii": sphere,
                    "closed_form": closed_form}},
                "face_metric": {"t": tf, "columns": {
                    "warp": w0, "sec_radial": -wrr / w0,
                    "sec_sphere": (1.0 - wr ** 2) / w0 ** 2}}},
    )
    report.aux["curves"] = {"f": f, "beta": beta, "B_full": B_full}
    return report


def assemble_handle(n: int, K: float, params1: dict,
                    params2: dict) -> BlockReport:
    """Glue the two handle pieces along the shared face and run the corner
    checks: positive cross sums, angle sum below pi, and positive second
    fundamental form on the adjacent faces near the corner."""
    from .gluing import check_corner_gluing

    rep1 = build_handle1(n, K, **params1)
    if not rep1.passed:
        rep1.block = "handle-assembly"
        return rep1
    R_h = rep1.aux["f_scale_at_corner"] * K
    outer = rep1.boundary["outer"]
    B_hat = outer.metric["warp"].metric_rescale(1.0 / R_h)
    B_hat.info["dimension"] = n
    rep2 = build_handle2(B_hat, **params2)
    margins = [Margin(f"piece1:{m.label}", m.min, m.argmin)
               for m in rep1.margins]
    margins += [Margin(f"piece2:{m.label}", m.min, m.argmin)
                for m in rep2.margins]
    if not rep2.passed:
        return BlockReport("handle-assembly",
                           {"n": n, "K": K, **{f"p1_{k}": v for k, v in
                                               params1.items()},
                            **{f"p2_{k}": v for k, v in params2.items()}},
                           margins)

    atlas2 = {"outer": rep2.boundary["bottom"].rescale(R_h),
              "graph_face": rep2.boundary["graph_face"].rescale(R_h),
              "collar": rep2.boundary["top"].rescale(R_h)}
    glue = check_corner_gluing(rep1.boundary, atlas2, "outer", tol=0.0)
    margins += [Margin(f"glue:{m.label}", m.min, m.argmin)
                for m in glue.margins]

    matched = outer.metric["warp"]
    other = atlas2["outer"].metric["warp"]
    ts = np.linspace(0.0, min(matched.t_hi, other.t_hi), 257)
    match_dev = float(np.max(np.abs(matched.eval(ts) - other.eval(ts))))
    margins.append(Margin("boundary_curve_match", 1e-9 - match_dev))

    boundary = {"bottom": rep1.boundary["bottom"],
                "cap": rep1.boundary["cap"],
                "collar": atlas2["collar"]}
    return BlockReport(
        "handle-assembly",
        {"n": n, "K": K, **{f"p1_{k}": v for k, v in params1.items()},
         **{f"p2_{k}": v for k, v in params2.items()}},
        margins, boundary,
        aux={"theta1": rep1.aux["theta"], "theta2": rep2.aux["theta"],
             "angle_sum": rep1.aux["theta"] + rep2.aux["theta"],
             "rescale": R_h, "lambda": rep1.aux["lambda"]},
        sweeps={**{f"piece1_{k}": v for k, v in rep1.sweeps.items()},
                **{f"piece2_{k}": v for k, v in rep2.sweeps.items()}})


# ---------------------------------------------------------------------------
# Curvature-transfer cylinder over a fibre bundle.
# ---------------------------------------------------------------------------

def build_transfer_block(p: int, q: int, r0: float, nu: float, lam: float,
                         a: float, C: float, a_bounds: ABounds | None = None,
                         ric_base_lb: float = 1.0, ric_fibre_lb: float = 1.0,
                         t_max: float = 120.0, step_budget: int = 131072,
                         grid=None) -> BlockReport:
    """Cylinder metric built from the transfer warping system, stopped at
    the slope target lam; certifies the four Ricci bounds, domination of
    the mixed term, and the boundary curvature constraints at both ends."""
    if p < 2 or q < 2:
        raise BuildError("need fibre dim >= 2 and base dim >= 2")
    if not 0 < lam < 1:
        raise BuildError("lam must lie in (0, 1)")
    if min(r0, nu, a) <= 0 or C < 0:
        raise BuildError("r0, nu, a must be positive and C >= 0")
    a_bounds = a_bounds or ABounds()

    key = (float(C), float(t_max), int(step_budget))
    if key not in _TRANSFER_ODE_CACHE:
        if len(_TRANSFER_ODE_CACHE) > 32:
            _TRANSFER_ODE_CACHE.clear()
        _TRANSFER_ODE_CACHE[key] = integrate_transfer_odes(
            C, t_max=t_max, step_budget=step_budget)
    h0, fC = _TRANSFER_ODE_CACHE[key]
    c = r0 / h0.eval(0.0, 0)
    target = lam * c / a
    ts_nodes, fcols = fC.nodes
    fcp = fcols[1]
    if fcp[-1] <= target:
        raise HorizonError(
            f"slope never reaches lam (fC' tops out at {fcp[-1]:.4g}, "
            f"needed {target:.4g}); decrease a or increase C / t_max")
    idx = int(np.searchsorted(fcp, target))
    lo, hi = ts_nodes[max(idx - 1, 0)], ts_nodes[min(idx, len(ts_nodes) - 1)]
    from ._util import bisect_increasing
    t0 = bisect_increasing(lambda t: fC.eval(t, 1), lo, hi, target,
                           tol=1e-14)
    if abs((a / c) * fC.eval(t0, 1) - lam) > 1e-10:
        raise BuildError("slope target not met to 1e-10 by bisection")

    f = linear_combo([(fC, a / c)]).restrict(0.0, t0)
    h = linear_combo([(h0, a)]).restrict(0.0, t0)
    metric = BundleWarpedMetric(p, q, f, h, ric_base_lb, ric_fibre_lb,
                                a_bounds)
    tt = grid_points(0.0, t0, grid, min_points=1025)
    sweep = bundle_warped_sweep(metric, tt)
    margins = [
        _min_margin("ric_tt", tt, sweep["ric_tt"]),
        _min_margin("ric_XX", tt, sweep["ric_XX_lb"]),
        _min_margin("ric_VV", tt, sweep["ric_VV_lb"]),
    ]
    dom = (np.sqrt(np.maximum(sweep["ric_XX_lb"], 0.0)
                   * np.maximum(sweep["ric_VV_lb"], 0.0))
           - sweep["ric_XV_abs_ub"])
    margins.append(_min_margin("mixed_dominated", tt,
                               dom + (1e-12 if a_bounds.trivial else 0.0)))

    vertical0 = a * h0.eval(0.0, 1) / r0
    margins.append(Margin("vertical_ii_floor", nu - vertical0, 0.0))
    R = float(fC.eval(t0, 0))
    r1 = r0 * h0.eval(t0, 0) / (h0.eval(0.0, 0) * R)
    margins.append(Margin("horizontal_ii", lam * R, t0))

    bottom = BoundaryProfile(
        dimension=p + q, kind="bundle-over-base",
        metric={"fibre_scale": r0, "base_scale": 1.0,
                "descriptor": "bundle-over-core"},
        ii={"vertical": -vertical0, "horizontal": 0.0})
    h00 = h0.eval(0.0, 0)
    top = BoundaryProfile(
        dimension=p + q, kind="bundle-over-base",
        metric={"fibre_scale": R * r1, "base_scale": R,
                "descriptor": "bundle-over-core"},
        ii={"vertical": float(a * h00 * h0.eval(t0, 1)
                              / (r0 * h0.eval(t0, 0))),
            "horizontal": lam / R})

    return BlockReport(
        block="transfer",
        params={"p": p, "q": q, "r0": r0, "nu": nu, "lam": lam, "a": a,
                "C": C, "sup_AX2": a_bounds.sup_AX2,
                "sup_deltaA": a_bounds.sup_deltaA},
        margins=margins,
        boundary={"bottom": bottom, "top": top},
        aux={"t0": float(t0), "r1": float(r1), "R": R,
             "vertical_ii_at_0": -vertical0,
             "slope_check": float((a / c) * fC.eval(t0, 1))},
        sweeps={"ricci": {"t": tt, "columns": dict(sweep)}},
    )


# ---------------------------------------------------------------------------
# Trivial circle-bundle variant.
# ---------------------------------------------------------------------------

def build_s1_block(q: int, lam: float, ric_base_lb: float = 1.0,
                   grid=None) -> BlockReport:
    """Disc-bundle cylinder over a base with unit Ricci floor and a closing
    circle fibre, built from designed sinusoidal warps: the base warp is
    even at 0 with slope lam at the far end, the fibre warp closes the
    circle (odd, unit slope) and flattens at the far end."""
    if q < 2:
        raise BuildError("need base dimension >= 2")
    if not 0 < lam < 1:
        raise BuildError("lam must lie in (0, 1)")
    window = (q * lam, (q - 1) / (2.0 * lam))
    feas = window[1] - window[0]
    if feas <= 0:
        return BlockReport(
            "s1", {"q": q, "lam": lam},
            [Margin("design_window", feas, 0.0)],
            aux={"note": "sinusoidal family infeasible: 2 q lam^2 >= q-1"})
    k = 0.5 * (window[0] + window[1])
    t0 = math.pi / (2.0 * k)

    dom = (0.0, t0)
    f = curve_from_derivs(
        dom,
        lambda t: 1.0 + (lam / k) * (1.0 - np.cos(k * np.asarray(t, float))),
        lambda t: lam * np.sin(k * np.asarray(t, float)),
        lambda t: lam * k * np.cos(k * np.asarray(t, float)),
        lambda t: -lam * k * k * np.sin(k * np.asarray(t, float)))
    h = sine_curve(1.0 / k, k, 0.0, dom)

    metric = BundleWarpedMetric(1, q, f, h, ric_base_lb, 0.0, ABounds(),
                                collapse_start="h")
    tt = grid_points(0.0, t0, grid, min_points=1025)
    sweep = bundle_warped_sweep(metric, tt)
    margins = [
        _min_margin("ric_tt", tt, sweep["ric_tt"]),
        _min_margin("ric_XX", tt, sweep["ric_XX_lb"]),
        _min_margin("ric_VV", tt, sweep["ric_VV_lb"]),
        Margin("design_window", feas, 0.0),
    ]
    par_h = parity_margin(h, 0.0, "odd", first_derivative_target=1.0,
                          fit_width=0.05 * t0)
    par_f = parity_margin(f, 0.0, "even", fit_width=0.05 * t0)
    margins.append(Margin("h_parity_odd", 1e-9 - par_h.max_violation, 0.0))
    margins.append(Margin("f_parity_even", 1e-9 - par_f.max_violation, 0.0))
    margins.append(Margin("horizontal_ii", lam, t0))

    f_end = float(f.eval(t0, 0))
    R = float(h.eval(t0, 0)) / f_end
    top = BoundaryProfile(
        dimension=q + 1, kind="bundle-over-base",
        metric={"fibre_scale": R, "base_scale": 1.0,
                "descriptor": "trivial-circle"},
        ii={"horizontal": lam, "vertical": 0.0})

    return BlockReport(
        "s1", {"q": q, "lam": lam, "ric_base_lb": ric_base_lb},
        margins, boundary={"top": top},
        aux={"k": k, "t0": t0, "R": R, "base_factor_after_rescale": 1.0,
             "circle_ii_at_end": float(h.eval(t0, 1) / h.eval(t0, 0)),
             "h_first_derivative": par_h.first_derivative_value},
        sweeps={"ricci": {"t": tt, "columns": dict(sweep)}})


# ---------------------------------------------------------------------------
# Fibre-disc warp.
# ---------------------------------------------------------------------------

def build_fibre_disc_warp(p: int, t0: float, grid=None):
    """Concave disc warp h with h(0) = 0, h'(0) = 1, h(t0) = 1 and all
    derivatives vanishing at t0; the cross-section curvatures of
    dt^2 + h^2 ds_{p-1}^2 are certified positive away from the flat end.

    The curvature profile -h'' mixes a sinusoidal seed (odd at 0, so the
    closing parity and the third-derivative condition hold) with a sliding
    plateau whose position is solved so the warp tops out at exactly 1.
    """
    if p < 2:
        raise BuildError("need p >= 2")
    if t0 <= 1.0:
        raise BuildError("t0 must exceed 1")

    wT = 0.2 * t0
    w_hi = 0.985 * t0
    omega = math.pi / (1.02 * t0)
    us = np.linspace(0.0, t0, 4097)

    def taper(u, k=0):
        x = (np.asarray(u, float) - (t0 - wT)) / wT
        if k == 0:
            return 1.0 - smooth_step(x)
        return -smooth_step(x, k) / wT ** k

    def seed(u, k=0):
        u = np.asarray(u, float)
        if k == 0:
            return np.sin(omega * u) * taper(u)
        return (omega * np.cos(omega * u) * taper(u)
                + np.sin(omega * u) * taper(u, 1))

    def window(u, mu, span, k=0):
        x = (np.asarray(u, float) - mu) / span
        return plateau(x, k) / span ** k

    def masses(fn):
        y, dy = fn(us), fn(us, 1)
        i1 = cumulative_hermite(us, y, dy)[-1]
        i2 = cumulative_hermite(us, (t0 - us) * y, -y + (t0 - us) * dy)[-1]
        return i1, i2

    i1s, i2s = masses(seed)
    solved = None
    for rho in (0.35, 0.2, 0.1, 0.05):
        for span_frac in (0.4, 0.2, 0.1, 0.05):
            span = span_frac * t0

            def gap(mu):
                i1p, i2p = masses(lambda u, k=0: window(u, mu, span, k))
                return (rho * i2s / i1s
                        + (1 - rho) * i2p / i1p) - (t0 - 1.0)

            mu_lo, mu_hi = 0.01 * t0, w_hi - span
            if mu_hi <= mu_lo:
                continue
            g_lo, g_hi = gap(mu_lo), gap(mu_hi)
            if not (g_lo == 0 or g_lo * g_hi < 0):
                continue
            a_, b_ = mu_lo, mu_hi
            for _ in range(120):
                mid = 0.5 * (a_ + b_)
                if gap(a_) * gap(mid) <= 0:
                    b_ = mid
                else:
                    a_ = mid
                if b_ - a_ < 1e-13:
                    break
            solved = (rho, 0.5 * (a_ + b_), span)
            break
        if solved:
            break
    if solved is None:
        raise BuildError(
            f"no concave profile in the template family reaches height 1 "
            f"flat at t0={t0}")
    rho, mu, span = solved
    i1p, _ = masses(lambda u, k=0: window(u, mu, span, k))
    cc = rho / i1s
    cp = (1.0 - rho) / i1p

    def d2(t):
        return -cc * seed(t) - cp * window(t, mu, span)

    def d3(t):
        return -cc * seed(t, 1) - cp * window(t, mu, span, 1)

    d2us = d2(us)
    h1v = cumulative_hermite(us, d2us, d3(us)) + 1.0
    h0v = cumulative_hermite(us, h1v, d2us)
    h = curve_from_derivs(
        (0.0, t0),
        lambda t: _hermite(us, h0v, h1v, t),
        lambda t: _hermite(us, h1v, d2us, t),
        d2, d3, "blended")

    tt = grid_points(1e-3 * t0, 0.98 * t0, grid, min_points=1025)
    hv = h.eval(tt, 0)
    sec_rad = -h.eval(tt, 2) / hv
    sec_sph = (1.0 - h.eval(tt, 1) ** 2) / hv ** 2
    par = parity_margin(h, 0.0, "odd", first_derivative_target=1.0,
                        fit_width=0.05 * t0)
    margins = [
        _min_margin("sec_radial", tt, sec_rad),
        _min_margin("sec_sphere", tt, sec_sph),
        Margin("sec_radial_at_0", cc * omega, 0.0),
        Margin("parity_odd", 1e-9 - par.max_violation, 0.0),
        Margin("reach_height", 1e-9 - abs(float(h.eval(t0, 0)) - 1.0), t0),
        Margin("flat_at_end", 1e-8 - flatness_margin(h, t0), t0),
    ]
    report = BlockReport(
        "fibre-disc", {"p": p, "t0": t0}, margins,
        aux={"omega": omega, "seed_fraction": rho, "plateau_start": mu,
             "h_end": float(h.eval(t0, 0))},
        sweeps={"warp": {"t": tt, "columns": {"h": hv, "sec_radial": sec_rad,
                                              "sec_sphere": sec_sph}}})
    return h, report


# ---------------------------------------------------------------------------
# Doubly warped sphere transition checker.
# ---------------------------------------------------------------------------

def _sphere_pair_margins(A: SmoothCurve, B: SmoothCurve, tag: str,
                         grid=None) -> list:
    s0 = A.t_hi
    eps = 1e-4 * s0
    sA = grid_points(eps, s0, grid, min_points=513)
    sB = grid_points(0.0, s0 - eps, grid, min_points=513)
    # tip curvature limits -w'''/w' (the sign of w''' alone flips with the
    # closing slope: +1 at s=0 for A, -1 at s=s0 for B)
    out = [
        _min_margin(f"{tag}A_concave", sA, -A.eval(sA, 2)),
        _min_margin(f"{tag}B_concave", sB, -B.eval(sB, 2)),
        Margin(f"{tag}A_tip_curvature", -A.eval(0.0, 3) / A.eval(0.0, 1),
               0.0),
        Margin(f"{tag}B_tip_curvature", -B.eval(s0, 3) / B.eval(s0, 1), s0),
    ]
    pa0 = parity_margin(A, 0.0, "odd", 1.0, fit_width=0.05 * s0)
    pae = parity_margin(A, s0, "even", fit_width=0.05 * s0)
    pb0 = parity_margin(B, 0.0, "even", fit_width=0.05 * s0)
    pbe = parity_margin(B, s0, "odd", -1.0, fit_width=0.05 * s0)
    out.append(Margin(f"{tag}A_parity", 1e-6 - max(pa0.max_violation,
                                                   pae.max_violation), 0.0))
    out.append(Margin(f"{tag}B_parity", 1e-6 - max(pb0.max_violation,
                                                   pbe.max_violation), s0))
    return out


def build_sphere_transition(A: SmoothCurve, B: SmoothCurve, p: int, q: int,
                            grid=None) -> BlockReport:
    """Positivity characterization for ds^2 + A^2 ds_{q-1}^2 + B^2 ds_p^2:
    strict concavity of both warps away from their collapse ends, negative
    third derivatives there, the closing parities, and stability of all of
    it along the straight path to the round pair."""
    if abs(A.t_lo) > 1e-12 or abs(B.t_lo) > 1e-12 \
            or abs(A.t_hi - B.t_hi) > 1e-9:
        raise BuildError("A and B must share a domain [0, s0]")
    s0 = A.t_hi
    margins = _sphere_pair_margins(A, B, "", grid)
    Ar = sine_curve(2 * s0 / math.pi, math.pi / (2 * s0), 0.0, (0.0, s0))
    Br = cosine_curve(2 * s0 / math.pi, math.pi / (2 * s0), 0.0, (0.0, s0))
    for lam in (0.25, 0.5, 0.75):
        Am = linear_combo([(A, 1 - lam), (Ar, lam)])
        Bm = linear_combo([(B, 1 - lam), (Br, lam)])
        margins += _sphere_pair_margins(Am, Bm, f"path{lam}:", grid)
    return BlockReport(
        "sphere-transition", {"p": p, "q": q, "s0": s0}, margins,
        aux={"s0": s0})


# ---------------------------------------------------------------------------
# Projective cohomogeneity-one family.
# ---------------------------------------------------------------------------

def _projective_f0() -> SmoothCurve:
    return cosine_curve(2.0 / math.pi, math.pi / 2.0, 0.0, (-1.0, 1.0))


def _projective_h_tilde(s: float):
    amp = 4.0 / ((s + 1.0) * math.pi)
    rate = math.pi * (s + 1.0) / 4.0
    return sine_curve(amp, rate, rate, (-1.0, 1.5))


def projective_family_check(d: int, n: int, s: float, grid=None,
                            join_halfwidth: float = 0.05) -> BlockReport:
    """One member of the interpolating family: the fixed odd warp together
    with the flattened sine whose plateau starts at (1-s)/(1+s).

    Certifies Ricci positivity on the grid (endpoints included), the key
    cross-term inequality on the sine zone, and the two trigonometric
    comparison bounds it rests on.
    """
    if not 0.0 <= s <= 1.0:
        raise BuildError("s must lie in [0, 1]")
    f0 = _projective_f0()
    t_flat = (1.0 - s) / (1.0 + s)
    rate = math.pi * (s + 1.0) / 4.0
    amp = 4.0 / ((s + 1.0) * math.pi)
    if s == 0.0:
        h = _projective_h_tilde(0.0).restrict(-1.0, 1.0)
        w = 0.0
    else:
        w = min(join_halfwidth, 0.45 * (1.0 - t_flat), 0.45 * (t_flat + 1.0))
        if w <= 0:
            h = _projective_h_tilde(s).restrict(-1.0, 1.0)
        else:
            left = _projective_h_tilde(s)
            const = constant_curve(amp, (t_flat - 2 * w, 1.0))
            hpp = rate * rate * amp
            h = smooth_join(left, const, (t_flat - w, t_flat + w),
                            (-1.05 * hpp, 1e-9), band_tol=0.15 * hpp)
            h = h.restrict(-1.0, 1.0)

    metric = CohomogOneMetric(d, n, f0, h)
    ts = grid_points(-1.0, 1.0, grid)
    sweep = cohomog1_sweep(metric, ts, "projective")
    margins = [
        _min_margin("ric_tt", ts, sweep["ric_tt"]),
        _min_margin("ric_VV", ts, sweep["ric_VV"]),
        _min_margin("ric_XX", ts, sweep["ric_XX"]),
    ]

    upper = t_flat if s > 0 else 1.0
    tk = grid_points(-1.0, upper, grid, min_points=1025)
    inner = tk > -1.0 + 1e-9
    fv = f0.eval(tk, 0)
    hv, h1 = h.eval(tk, 0), h.eval(tk, 1)
    key = np.empty_like(tk)
    with np.errstate(divide="ignore", invalid="ignore"):
        key[inner] = (fv[inner] ** 2 / hv[inner] ** 4
                      - f0.eval(tk[inner], 1) * h1[inner]
                      / (fv[inner] * hv[inner]))
    key[~inner] = -h.eval(-1.0, 3) / h.eval(-1.0, 1)
    margins.append(_min_margin("key_inequality", tk, key + 1e-9))

    t_s = 0.25 * math.pi * (tk + 1.0) * (s + 1.0)
    t_0 = 0.25 * math.pi * (tk + 1.0)
    margins.append(_min_margin("trig_sin_bound", tk,
                               (1.0 + s) * np.sin(t_0) - np.sin(t_s)
                               + 1e-12))
    margins.append(_min_margin("trig_cos_bound", tk,
                               np.cos(t_0) - np.cos(t_s) + 1e-12))

    report = BlockReport(
        "projective-family",
        {"d": d, "n": n, "s": s},
        margins,
        aux={"t_flat": t_flat, "join_halfwidth": w,
             "plateau_value": amp},
        sweeps={"ricci": {"t": ts, "columns": dict(sweep)},
                "key_inequality": {"t": tk, "columns": {"key": key}}})
    report.aux["curves"] = {"f": f0, "h": h}
    return report


# ---------------------------------------------------------------------------
# The five-dimensional double-disc-bundle family.
# ---------------------------------------------------------------------------

def _wu_h_blend(eps: float, eps_outer: float) -> SmoothCurve:
    """Even warp equal to the odd partner (2/pi) cos(pi t / 2) on
    [-eps, eps] and equal to the constant 2/pi outside (-eps_outer,
    eps_outer), shaped so the positive part of its second derivative stays
    small (the curvature bound is linear in it)."""
    f0 = _projective_f0()
    a, b = eps, eps_outer
    w = b - a
    rho = 0.06

    def S(u, k=0):
        return smooth_step(np.asarray(u, float) / (rho * w), k) \
            / (rho * w) ** k

    def Ppos(u, k=0):
        span = 0.83 * w
        x = (np.asarray(u, float) - 0.02 * w) / span
        return plateau(x, k) / (PLATEAU_MASS * span ** (k + 1))

    def Pneg(u, k=0):
        span = 0.12 * w
        x = (np.asarray(u, float) - 0.87 * w) / span
        return plateau(x, k) / (PLATEAU_MASS * span ** (k + 1))

    us = np.linspace(0.0, w, 4097)

    def fade(u, k=0):
        if k == 0:
            return f0.eval(a + u, 2) * (1.0 - S(u))
        return (f0.eval(a + u, 3) * (1.0 - S(u))
                - f0.eval(a + u, 2) * S(u, 1))

    wu_ = w - us
    i_b = cumulative_hermite(us, fade(us), fade(us, 1))[-1]
    iw_b = cumulative_hermite(us, wu_ * fade(us),
                              -fade(us) + wu_ * fade(us, 1))[-1]
    cols = {}
    for name, fn in (("pos", Ppos), ("neg", Pneg)):
        cols[name] = (cumulative_hermite(us, fn(us), fn(us, 1))[-1],
                      cumulative_hermite(us, wu_ * fn(us),
                                         -fn(us) + wu_ * fn(us, 1))[-1])
    need_slope = (0.0 - f0.eval(a, 1)) - i_b
    need_value = (2.0 / math.pi - f0.eval(a, 0)
                  - f0.eval(a, 1) * w) - iw_b
    mat = np.array([[cols["pos"][0], cols["neg"][0]],
                    [cols["pos"][1], cols["neg"][1]]])
    cp, cn = np.linalg.solve(mat, np.array([need_slope, need_value]))

    def d2(t):
        u = np.asarray(t, float) - a
        return fade(u) + cp * Ppos(u) + cn * Pneg(u)

    def d3(t):
        u = np.asarray(t, float) - a
        return fade(u, 1) + cp * Ppos(u, 1) + cn * Pneg(u, 1)

    out2 = d2(a + us)
    out3 = d3(a + us)
    out1 = cumulative_hermite(us, out2, out3) + f0.eval(a, 1)
    out0 = cumulative_hermite(us, out1, out2) + f0.eval(a, 0)
    win = curve_from_derivs(
        (a, b),
        lambda t: _hermite(a + us, out0, out1, t),
        lambda t: _hermite(a + us, out1, out2, t),
        d2, d3, "blended")
    half = piecewise_curve([
        (0.0, a, f0.restrict(0.0, a)),
        (a, b, win),
        (b, 1.0, constant_curve(2.0 / math.pi, (b, 1.0)))])
    return even_extension(half)


def wu_family_check(variant: str = "g00", eps: float = 0.1,
                    eps_outer: float | None = None, grid=None) -> BlockReport:
    """Either the product-like metric (constant even warp) or the blended
    family localizing the odd warp near t = 0, checked for positive Ricci
    curvature along the straight path between the two warps."""
    f0 = _projective_f0()
    h0 = constant_curve(2.0 / math.pi, (-1.0, 1.0))
    ts = grid_points(-1.0, 1.0, grid)
    if variant == "g00":
        metric = CohomogOneMetric(2, 2, f0, h0)
        sweep = cohomog1_sweep(metric, ts, "wu")
        margins = [
            _min_margin("ric_tt", ts, sweep["ric_tt"]),
            _min_margin("ric_VV", ts, sweep["ric_VV"]),
            _min_margin("ric_XX", ts, sweep["ric_XX"]),
        ]
        at0 = cohomog1_sweep(metric, np.array([0.0]), "wu")
        return BlockReport(
            "wu-family", {"variant": "g00"}, margins,
            aux={"ric_tt_at_0": float(at0["ric_tt"][0]),
                 "ric_VV_at_0": float(at0["ric_VV"][0]),
                 "ric_XX_at_0": float(at0["ric_XX"][0])},
            sweeps={"ricci": {"t": ts, "columns": dict(sweep)}})
    if variant != "blended":
        raise BuildError(f"unknown variant {variant!r}")
    if eps_outer is None:
        eps_outer = min(0.95, eps + 0.85)
    if not 0.0 < eps < eps_outer < 1.0:
        raise BuildError("need 0 < eps < eps_outer < 1")
    h1 = _wu_h_blend(eps, eps_outer)
    margins = []
    sweeps = {}
    for lam in (0.0, 0.25, 0.5, 0.75, 1.0):
        hmix = linear_combo([(h1, 1.0 - lam), (h0, lam)])
        metric = CohomogOneMetric(2, 2, f0, hmix)
        sweep = cohomog1_sweep(metric, ts, "wu")
        worst = np.minimum(np.minimum(sweep["ric_tt"], sweep["ric_VV"]),
                           sweep["ric_XX"])
        margins.append(_min_margin(f"ric_min_path_{lam:0.2f}", ts, worst))
        if lam in (0.0, 1.0):
            sweeps[f"path_{lam:0.2f}"] = {"t": ts, "columns": dict(sweep)}
    report = BlockReport(
        "wu-family", {"variant": "blended", "eps": eps,
                      "eps_outer": eps_outer},
        margins, aux={"eps": eps, "eps_outer": eps_outer}, sweeps=sweeps)
    report.aux["curves"] = {"f": f0, "h1": h1}
    return report


def boundary_conformal_margin(c: float, C: float) -> float:
    """1 - c (3/C^2 + 1/C): positive means the conformal boundary-layer
    estimate keeps its sign for geometry constant c."""
    if c < 0:
        raise BuildError("c must be nonnegative")
    if C <= 0:
        raise BuildError("C must be positive")
    return 1.0 - c * (3.0 / (C * C) + 1.0 / C)
