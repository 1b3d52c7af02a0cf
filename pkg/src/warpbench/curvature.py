"""Closed-form curvature and second-fundamental-form evaluators for the
warped metric ansatze, plus an independent finite-difference Ricci oracle.

Conventions: boundary second fundamental forms are reported as principal
curvatures with respect to the outward unit normal; a slice {t} x M inside
a cylinder uses the +t normal unless stated otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curves import SmoothCurve

__all__ = [
    "DoublyWarpedMetric", "BundleWarpedMetric", "CohomogOneMetric",
    "CurvaturePoint", "IIProfile", "ABounds", "CoordinateChart",
    "InvalidMetricError", "CollapseError", "StencilError",
    "doubly_warped_curvature", "doubly_warped_sweep", "slice_II",
    "graph_II", "graph_ii_sweep", "bundle_warped_ricci",
    "bundle_warped_sweep", "submersion_shrink_bounds", "cohomog1_ricci",
    "cohomog1_sweep", "fd_ricci", "doubly_warped_chart", "flat_chart",
    "oracle_cross_check",
]


class InvalidMetricError(ValueError):
    pass


class CollapseError(ValueError):
    pass


class StencilError(ValueError):
    pass


@dataclass(frozen=True)
class CurvaturePoint:
    location: float
    entries: dict

    def __getitem__(self, key):
        return self.entries[key]


@dataclass(frozen=True)
class IIProfile:
    entries: dict
    normal: str = "outward"


@dataclass(frozen=True)
class ABounds:
    """Sup-norm bounds for the integrability tensor of a submersion over
    unit vectors: |A_X|^2, |A V|^2 and the divergence pairing."""
    sup_AX2: float = 0.0
    sup_AV2: float = 0.0
    sup_deltaA: float = 0.0

    def __post_init__(self):
        if min(self.sup_AX2, self.sup_AV2, self.sup_deltaA) < 0:
            raise ValueError("bounds must be nonnegative")

    @property
    def trivial(self) -> bool:
        return self.sup_AX2 == self.sup_AV2 == self.sup_deltaA == 0.0


# ---------------------------------------------------------------------------
# Doubly warped products dt^2 + f^2 ds_p^2 + h^2 ds_q^2.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DoublyWarpedMetric:
    p: int
    q: int
    f: SmoothCurve
    h: SmoothCurve
    collapse_start: str | None = None    # warp ("f" or "h") vanishing at t_lo
    collapse_end: str | None = None

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise InvalidMetricError("sphere dimensions must be >= 1")
        fd, hd = self.f.domain, self.h.domain
        if abs(fd[0] - hd[0]) > 1e-9 or abs(fd[1] - hd[1]) > 1e-9:
            raise InvalidMetricError("f and h must share a domain")
        for c in (self.collapse_start, self.collapse_end):
            if c not in (None, "f", "h"):
                raise InvalidMetricError(f"bad collapse tag {c!r}")

    @property
    def interval(self):
        return self.f.domain

    def rescaled(self, R: float) -> "DoublyWarpedMetric":
        return DoublyWarpedMetric(self.p, self.q,
                                  self.f.metric_rescale(R),
                                  self.h.metric_rescale(R),
                                  self.collapse_start, self.collapse_end)


def _endpoint_kind(m: DoublyWarpedMetric, t: float) -> str | None:
    lo, hi = m.interval
    slop = 1e-9 * (1 + hi - lo)
    if abs(t - lo) <= slop:
        return "start"
    if abs(t - hi) <= slop:
        return "end"
    return None


def _sec_pieces(m: DoublyWarpedMetric, t: float) -> dict:
    """The five sectional expressions, with collapse endpoints evaluated by
    the derivative-quotient substitutions forced by the parity conditions:
    -f''/f and (1-f'^2)/f^2 become -f'''/f' at a zero of f, and the mixed
    plane limit -f'h'/(fh) becomes -h''/h there."""
    end = _endpoint_kind(m, t)
    collapse = None
    if end == "start":
        collapse = m.collapse_start
    elif end == "end":
        collapse = m.collapse_end
    f, h = m.f, m.h
    fv, hv = f(t), h(t)
    scale = 1e-8 * (1 + abs(t))
    if collapse is None:
        if fv <= 0 or hv <= 0:
            raise InvalidMetricError(
                f"warp vanishes at t={t} without a declared collapse")
        return {
            "sec_tu": -f(t, 2) / fv,
            "sec_tv": -h(t, 2) / hv,
            "sec_uv": -f(t, 1) * h(t, 1) / (fv * hv),
            "sec_uu": (1.0 - f(t, 1) ** 2) / fv ** 2,
            "sec_vv": (1.0 - h(t, 1) ** 2) / hv ** 2,
        }
    zero, other = (f, h) if collapse == "f" else (h, f)
    if abs(zero(t)) > math.sqrt(scale):
        raise InvalidMetricError(
            f"declared collapse of {collapse} at t={t} but warp is "
            f"{zero(t):.3e}")
    if other(t) <= 0:
        raise InvalidMetricError("the non-collapsing warp must be positive")
    ratio = -zero(t, 3) / zero(t, 1)
    cross = -other(t, 2) / other(t)
    if collapse == "f":
        return {"sec_tu": ratio, "sec_uu": ratio,
                "sec_tv": cross, "sec_vv": (1.0 - h(t, 1) ** 2) / hv ** 2,
                "sec_uv": cross}
    return {"sec_tv": ratio, "sec_vv": ratio,
            "sec_tu": -f(t, 2) / fv,
            "sec_uu": (1.0 - f(t, 1) ** 2) / fv ** 2,
            "sec_uv": -f(t, 2) / fv}


def doubly_warped_curvature(m: DoublyWarpedMetric, t: float) -> CurvaturePoint:
    """Sectional values sec(t^u), sec(t^v), sec(u^v), sec(u1^u2),
    sec(v1^v2) and the Ricci diagonal of dt^2 + f^2 ds_p^2 + h^2 ds_q^2."""
    s = _sec_pieces(m, float(t))
    p, q = m.p, m.q
    entries = dict(s)
    entries["ric_tt"] = p * s["sec_tu"] + q * s["sec_tv"]
    entries["ric_uu"] = s["sec_tu"] + (p - 1) * s["sec_uu"] + q * s["sec_uv"]
    entries["ric_vv"] = s["sec_tv"] + (q - 1) * s["sec_vv"] + p * s["sec_uv"]
    return CurvaturePoint(float(t), entries)


def doubly_warped_sweep(m: DoublyWarpedMetric, ts: np.ndarray) -> dict:
    """Vectorized curvature sweep; endpoints fall back to the scalar
    evaluator so collapse substitutions apply."""
    ts = np.asarray(ts, dtype=float)
    lo, hi = m.interval
    slop = 1e-9 * (1 + hi - lo)
    inner = (ts > lo + slop) & (ts < hi - slop)
    f, h = m.f, m.h
    fv, hv = f.eval(ts, 0), h.eval(ts, 0)
    if np.any((fv[inner] <= 0) | (hv[inner] <= 0)):
        raise InvalidMetricError("warp vanishes at an interior point")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = {
            "sec_tu": -f.eval(ts, 2) / fv,
            "sec_tv": -h.eval(ts, 2) / hv,
            "sec_uv": -f.eval(ts, 1) * h.eval(ts, 1) / (fv * hv),
            "sec_uu": (1.0 - f.eval(ts, 1) ** 2) / fv ** 2,
            "sec_vv": (1.0 - h.eval(ts, 1) ** 2) / hv ** 2,
        }
    for i in np.nonzero(~inner)[0]:
        pieces = _sec_pieces(m, ts[i])
        for k in out:
            out[k][i] = pieces[k]
    p, q = m.p, m.q
    out["ric_tt"] = p * out["sec_tu"] + q * out["sec_tv"]
    out["ric_uu"] = (out["sec_tu"] + (p - 1) * out["sec_uu"]
                     + q * out["sec_uv"])
    out["ric_vv"] = (out["sec_tv"] + (q - 1) * out["sec_vv"]
                     + p * out["sec_uv"])
    return out


def slice_II(m: DoublyWarpedMetric, t: float) -> IIProfile:
    """Principal curvatures f'/f (p-block) and h'/h (q-block) of the slice
    {t} x S^p x S^q with respect to the +t normal."""
    fv, hv = m.f(t), m.h(t)
    if fv <= 0 or hv <= 0:
        raise CollapseError(f"slice at t={t} touches a collapse point")
    return IIProfile({"sphere_p": m.f(t, 1) / fv,
                      "sphere_q": m.h(t, 1) / hv}, normal="+t")


# ---------------------------------------------------------------------------
# Hypersurfaces cut along the graph of a radial height function.
# ---------------------------------------------------------------------------

def graph_ii_sweep(f: SmoothCurve, R: SmoothCurve, alpha: SmoothCurve,
                   ss: np.ndarray, orientation: str = "up") -> dict:
    """Second fundamental form of the graph t = alpha(s) inside
    dt^2 + f(t)^2 (ds^2 + R(s)^2 ds_{n-2}^2).

    radial: (f' f + 2 (f'/f) a'^2 - a'') / sqrt(1 + a'^2/f^2)
    sphere: (f' f - (R'/R) a')   / sqrt(1 + a'^2/f^2)
    and the mixed term vanishes.  orientation="down" flips both signs
    (normal pointing toward decreasing t).
    """
    if orientation not in ("up", "down"):
        raise ValueError(orientation)
    ss = np.asarray(ss, dtype=float)
    a = alpha.eval(ss, 0)
    a1 = alpha.eval(ss, 1)
    a2 = alpha.eval(ss, 2)
    fv = f.eval(a, 0)
    f1 = f.eval(a, 1)
    Rv = R.eval(ss, 0)
    R1 = R.eval(ss, 1)
    if np.any(fv <= 0):
        raise InvalidMetricError("f(alpha(s)) must be positive")
    if np.any(Rv <= 0):
        raise InvalidMetricError("R(s) must be positive")
    sgn = 1.0 if orientation == "up" else -1.0
    denom = np.sqrt(1.0 + (a1 / fv) ** 2)
    radial = sgn * (f1 * fv + 2.0 * (f1 / fv) * a1 ** 2 - a2) / denom
    sphere = sgn * (f1 * fv - (R1 / Rv) * a1) / denom
    return {"radial": radial, "sphere": sphere,
            "mixed": np.zeros_like(radial)}


def graph_II(f: SmoothCurve, R: SmoothCurve, alpha: SmoothCurve, s: float,
             orientation: str = "up") -> IIProfile:
    sweep = graph_ii_sweep(f, R, alpha, np.array([float(s)]), orientation)
    return IIProfile({k: float(v[0]) for k, v in sweep.items()},
                     normal=orientation)


# ---------------------------------------------------------------------------
# Warped submersion metrics dt^2 + f^2 (base) + h^2 (fibre).
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BundleWarpedMetric:
    """Cylinder metric over a fibre bundle, with the integrability tensor
    entering only through sup-norm bounds.

    ricci_base_lb / ricci_fibre_lb are lower Ricci bounds of the base and
    fibre metrics in units of (dim - 1), so a unit round factor has bound
    1.0 exactly.
    """
    p: int                      # fibre dimension
    q: int                      # base dimension
    f: SmoothCurve              # base warp
    h: SmoothCurve              # fibre warp
    ricci_base_lb: float = 1.0
    ricci_fibre_lb: float = 1.0
    a_bounds: ABounds = field(default_factory=ABounds)
    collapse_start: str | None = None   # optional "h": fibre sphere closes

    def __post_init__(self):
        if self.p < 1 or self.q < 2:
            raise InvalidMetricError("need fibre dim >= 1, base dim >= 2")

    @classmethod
    def trivial(cls, p, q, f, h, ricci_base_lb=1.0, ricci_fibre_lb=1.0,
                collapse_start=None):
        return cls(p, q, f, h, ricci_base_lb, ricci_fibre_lb, ABounds(),
                   collapse_start)

    @property
    def interval(self):
        return self.f.domain


def bundle_warped_sweep(m: BundleWarpedMetric, ts: np.ndarray) -> dict:
    """Lower bounds for the Ricci diagonal and an upper bound for the mixed
    term.  The favorable fibre A-term is dropped (conservative); the
    unfavorable base A-term enters with its sup norm."""
    ts = np.asarray(ts, dtype=float)
    p, q = m.p, m.q
    rb = m.ricci_base_lb * (q - 1)
    rf = m.ricci_fibre_lb * (p - 1)
    f, h, ab = m.f, m.h, m.a_bounds
    fv, hv = f.eval(ts, 0), h.eval(ts, 0)
    f1, h1 = f.eval(ts, 1), h.eval(ts, 1)
    f2, h2 = f.eval(ts, 2), h.eval(ts, 2)
    lo = m.interval[0]
    slop = 1e-9 * (1 + m.interval[1] - lo)
    if np.any(fv <= 0):
        raise InvalidMetricError("base warp must stay positive")
    interior = hv > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        ric_tt = -q * f2 / fv - p * h2 / hv
        ric_xx = (-f2 / fv + (rb - (q - 1) * f1 ** 2) / fv ** 2
                  - p * f1 * h1 / (fv * hv)
                  - 2.0 * (hv ** 2 / fv ** 4) * ab.sup_AX2)
        ric_vv = (-h2 / hv + (rf - (p - 1) * h1 ** 2) / hv ** 2
                  - q * f1 * h1 / (fv * hv))
        ric_xv = (hv / fv ** 3) * ab.sup_deltaA
    if not np.all(interior):
        if m.collapse_start != "h":
            raise InvalidMetricError(
                "fibre warp vanishes without a declared collapse")
        for i in np.nonzero(~interior)[0]:
            t = ts[i]
            if abs(t - lo) > slop:
                raise InvalidMetricError("fibre collapse away from t_lo")
            # parity-forced limits at the closing fibre sphere:
            # h''/h -> h'''/h' and f'h'/(f h) -> f''/f; the fibre-curvature
            # term vanishes for a circle fibre and needs a round fibre
            # (unit bound, |h'| = 1) otherwise.
            h1 = h.eval(t, 1)
            hr = -h.eval(t, 3) / h1
            if p > 1:
                if abs(m.ricci_fibre_lb - 1.0) > 1e-9 or abs(abs(h1) - 1) > 1e-6:
                    raise InvalidMetricError(
                        "fibre collapse needs a round fibre with unit "
                        "Ricci bound")
                fib = (p - 1) * hr
            else:
                fib = 0.0
            cross = f.eval(t, 2) / f.eval(t, 0)
            ric_tt[i] = -q * f.eval(t, 2) / f.eval(t, 0) + p * hr
            ric_xx[i] = (-f.eval(t, 2) / f.eval(t, 0)
                         + (rb - (q - 1) * f.eval(t, 1) ** 2)
                         / f.eval(t, 0) ** 2
                         - p * cross)
            ric_vv[i] = hr + fib - q * cross
            ric_xv[i] = 0.0
    return {"ric_tt": ric_tt, "ric_XX_lb": ric_xx, "ric_VV_lb": ric_vv,
            "ric_XV_abs_ub": ric_xv}


def bundle_warped_ricci(m: BundleWarpedMetric, t: float) -> CurvaturePoint:
    sweep = bundle_warped_sweep(m, np.array([float(t)]))
    return CurvaturePoint(float(t),
                          {k: float(v[0]) for k, v in sweep.items()})


def submersion_shrink_bounds(ric_base_lb: float, ric_fibre_lb: float,
                             a_bounds: ABounds, r: float) -> CurvaturePoint:
    """Ricci bounds of a submersion metric with fibres shrunk by r, with
    unit-normalized vertical directions:

        Ric(U,U) >= ric_fibre_lb / r^2
        Ric(X,X) >= ric_base_lb - 2 r^2 sup|A_X|^2
        |Ric(U,X)| <= r^2 sup|delta A|

    plus the threshold r* below which both diagonal bounds are positive
    (absent when a lower bound is not positive).
    """
    if r <= 0:
        raise ValueError("r must be positive")
    entries = {
        "ric_vertical_lb": ric_fibre_lb / r ** 2,
        "ric_horizontal_lb": ric_base_lb - 2.0 * r ** 2 * a_bounds.sup_AX2,
        "ric_mixed_abs_ub": r ** 2 * a_bounds.sup_deltaA,
    }
    if ric_base_lb > 0 and ric_fibre_lb > 0:
        if a_bounds.sup_AX2 == 0:
            entries["r_star"] = math.inf
        else:
            entries["r_star"] = math.sqrt(ric_base_lb
                                          / (2.0 * a_bounds.sup_AX2))
    return CurvaturePoint(float(r), entries)


# ---------------------------------------------------------------------------
# Cohomogeneity-one metrics on [-1, 1] (projective family and the
# five-dimensional double-disc-bundle family).
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CohomogOneMetric:
    d: int                      # real dimension of the scalar field
    n: int
    f: SmoothCurve
    h: SmoothCurve

    def __post_init__(self):
        if self.d not in (2, 4, 8):
            raise InvalidMetricError("d must be one of 2, 4, 8")
        if self.n < 2:
            raise InvalidMetricError("n must be >= 2")
        if self.d == 8 and self.n != 2:
            raise InvalidMetricError("d = 8 requires n = 2")


def _cohomog1_interior(m: CohomogOneMetric, ts, family: str) -> dict:
    d, n = m.d, m.n
    f, h = m.f, m.h
    fv, hv = f.eval(ts, 0), h.eval(ts, 0)
    f1, h1 = f.eval(ts, 1), h.eval(ts, 1)
    f2, h2 = f.eval(ts, 2), h.eval(ts, 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        if family == "projective":
            ric_tt = -(d - 1) * f2 / fv - (n - 1) * d * h2 / hv
            ric_vv = (-f2 / fv + (d - 2) * (1 - f1 ** 2) / fv ** 2
                      - (n - 1) * d * f1 * h1 / (fv * hv)
                      + (n - 1) * d * fv ** 2 / hv ** 4)
            ric_xx = (-h2 / hv + ((n - 1) * d - 1) * (1 - h1 ** 2) / hv ** 2
                      - (d - 1) * f1 * h1 / (fv * hv)
                      + 3.0 * (d - 1) / hv ** 2
                      - 2.0 * (d - 1) * fv ** 2 / hv ** 4)
        elif family == "wu":
            if (d, n) != (2, 2):
                raise InvalidMetricError("the wu formulas require d = n = 2")
            ric_tt = -f2 / fv - 2.0 * h2 / hv
            ric_vv = (-f2 / fv - 2.0 * f1 * h1 / (fv * hv)
                      + 2.0 * fv ** 2 / hv ** 4)
            ric_xx = (-h2 / hv + (1 - h1 ** 2) / hv ** 2
                      - f1 * h1 / (fv * hv) + 3.0 / hv ** 2
                      - 2.0 * fv ** 2 / hv ** 4)
        else:
            raise ValueError(family)
    return {"ric_tt": ric_tt, "ric_VV": ric_vv, "ric_XX": ric_xx}


def _cohomog1_endpoint(m: CohomogOneMetric, t: float, family: str) -> dict:
    """Endpoint values by the parity-consistent derivative substitutions.

    At an end where only f vanishes (f odd, h even there) the radial and
    V directions share the isotropic value; at t=-1 of the projective
    family both warps vanish and the whole diagonal is isotropic.
    """
    d, n = m.d, m.n
    f, h = m.f, m.h
    tol = 1e-6
    f_zero = abs(f(t)) < tol
    h_zero = abs(h(t)) < tol
    if not f_zero:
        raise InvalidMetricError(
            f"endpoint t={t} is not a collapse of f (f={f(t):.3e})")
    fr = -f(t, 3) / f(t, 1)
    if family == "projective" and h_zero:
        hr = -h(t, 3) / h(t, 1)
        iso = (d - 1) * fr + (n - 1) * d * hr
        return {"ric_tt": iso, "ric_VV": iso, "ric_XX": iso}
    hv, h1, h2 = h(t), h(t, 1), h(t, 2)
    if hv <= 0:
        raise InvalidMetricError("h must be positive at this endpoint")
    if family == "projective":
        iso = (d - 1) * fr - (n - 1) * d * h2 / hv
        ric_xx = (-h2 / hv + ((n - 1) * d - 1) * (1 - h1 ** 2) / hv ** 2
                  - (d - 1) * h2 / hv + 3.0 * (d - 1) / hv ** 2)
        return {"ric_tt": iso, "ric_VV": iso, "ric_XX": ric_xx}
    iso = fr - 2.0 * h2 / hv
    ric_xx = (-2.0 * h2 / hv + (1 - h1 ** 2) / hv ** 2 + 3.0 / hv ** 2)
    return {"ric_tt": iso, "ric_VV": iso, "ric_XX": ric_xx}


def cohomog1_ricci(m: CohomogOneMetric, t: float,
                   family: str = "projective") -> CurvaturePoint:
    t = float(t)
    lo, hi = m.f.domain
    slop = 1e-9 * (1 + hi - lo)
    if abs(t - lo) <= slop or abs(t - hi) <= slop:
        entries = _cohomog1_endpoint(m, t, family)
    else:
        if m.f(t) <= 0 or m.h(t) <= 0:
            raise InvalidMetricError(
                f"undeclared singularity at interior t={t}")
        entries = {k: float(v) for k, v in
                   _cohomog1_interior(m, t, family).items()}
    return CurvaturePoint(t, {k: float(v) for k, v in entries.items()})


def cohomog1_sweep(m: CohomogOneMetric, ts: np.ndarray,
                   family: str = "projective") -> dict:
    ts = np.asarray(ts, dtype=float)
    lo, hi = m.f.domain
    slop = 1e-9 * (1 + hi - lo)
    inner = (ts > lo + slop) & (ts < hi - slop)
    out = _cohomog1_interior(m, ts, family)
    for i in np.nonzero(~inner)[0]:
        vals = _cohomog1_endpoint(m, float(ts[i]), family)
        for k in out:
            out[k][i] = vals[k]
    return out


# ---------------------------------------------------------------------------
# Finite-difference Ricci oracle on coordinate charts.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoordinateChart:
    dim: int
    metric: object              # callable x -> (dim, dim) array
    box: tuple                  # ((lo, hi), ...) open coordinate box
    name: str = "chart"


def flat_chart(n: int) -> CoordinateChart:
    return CoordinateChart(n, lambda x: np.eye(n),
                           tuple((-1.0, 1.0) for _ in range(n)), "flat")


def _sphere_diag(angles: np.ndarray) -> np.ndarray:
    """Diagonal of the round metric on S^k in spherical angles."""
    k = len(angles)
    out = np.ones(k)
    for i in range(1, k):
        out[i] = out[i - 1] * math.sin(angles[i - 1]) ** 2
    return out


def doubly_warped_chart(m: DoublyWarpedMetric,
                        angle_margin: float = 0.5) -> CoordinateChart:
    """Spherical-coordinate chart for dt^2 + f^2 ds_p^2 + h^2 ds_q^2 with
    p, q <= 3; the box stays away from coordinate poles and collapse ends,
    where difference quotients of the metric degrade."""
    p, q = m.p, m.q
    if p > 3 or q > 3:
        raise InvalidMetricError("built-in chart supports p, q <= 3")
    lo, hi = m.interval
    pad = 0.15 * (hi - lo)

    def metric(x):
        t = x[0]
        fa = m.f(float(t)) ** 2
        ha = m.h(float(t)) ** 2
        diag = np.concatenate([[1.0],
                               fa * _sphere_diag(x[1:1 + p]),
                               ha * _sphere_diag(x[1 + p:1 + p + q])])
        return np.diag(diag)

    box = ((lo + pad, hi - pad),) + tuple(
        (angle_margin, math.pi - angle_margin) for _ in range(p + q))
    return CoordinateChart(1 + p + q, metric, box, "doubly-warped")


def fd_ricci(chart: CoordinateChart, point, step: float = 3e-4) -> np.ndarray:
    """Ricci tensor (lower indices) from second-order central differences
    of the metric through Christoffel symbols; accuracy O(step^2)."""
    x = np.asarray(point, dtype=float)
    n = chart.dim
    if len(x) != n:
        raise ValueError("point dimension mismatch")
    for i, (lo, hi) in enumerate(chart.box):
        if not lo + 2.5 * step <= x[i] <= hi - 2.5 * step:
            raise StencilError(
                f"coordinate {i} too close to the chart boundary for the "
                f"stencil")

    def christoffel(y):
        g = np.asarray(chart.metric(y), dtype=float)
        ginv = np.linalg.inv(g)
        dg = np.empty((n, n, n))
        for a in range(n):
            e = np.zeros(n)
            e[a] = step
            dg[a] = (np.asarray(chart.metric(y + e))
                     - np.asarray(chart.metric(y - e))) / (2 * step)
        # Gamma^c_{ab} = 1/2 g^{cd} (dg[a][d,b] + dg[b][d,a] - dg[d][a,b])
        term = (np.einsum("adb->dab", dg) + np.einsum("bda->dab", dg)
                - np.einsum("dab->dab", dg))
        return 0.5 * np.einsum("cd,dab->cab", ginv, term)

    gamma = christoffel(x)
    dgamma = np.empty((n, n, n, n))
    for a in range(n):
        e = np.zeros(n)
        e[a] = step
        dgamma[a] = (christoffel(x + e) - christoffel(x - e)) / (2 * step)
    ric = (np.einsum("aaij->ij", dgamma)
           - np.einsum("jaai->ij", dgamma)
           + np.einsum("aab,bij->ij", gamma, gamma)
           - np.einsum("aib,baj->ij", gamma, gamma))
    return 0.5 * (ric + ric.T)


def oracle_cross_check(m: DoublyWarpedMetric, n_points: int = 20,
                       seed: int = 0, step: float = 3e-4) -> dict:
    """Compare the closed-form Ricci diagonal against the finite-difference
    oracle at random interior chart points; returns the worst relative
    mismatch and the sampled count."""
    chart = doubly_warped_chart(m)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_points):
        x = np.array([rng.uniform(lo + 3 * step, hi - 3 * step)
                      for lo, hi in chart.box])
        ric = fd_ricci(chart, x, step)
        g = np.asarray(chart.metric(x))
        normalized = np.diag(ric) / np.diag(g)
        cf = doubly_warped_curvature(m, float(x[0]))
        expect = np.concatenate([
            [cf["ric_tt"]],
            np.full(m.p, cf["ric_uu"]),
            np.full(m.q, cf["ric_vv"])])
        denom = np.maximum(np.abs(expect), 1e-6)
        worst = max(worst, float(np.max(np.abs(normalized - expect)
                                        / denom)))
        off = ric - np.diag(np.diag(ric))
        worst = max(worst, float(np.max(np.abs(off))
                                 / max(1.0, float(np.max(np.abs(expect))))))
    return {"max_rel_error": worst, "points": n_points}
