"""Scalar warping functions on an interval, with derivatives through order 3.

A SmoothCurve is the common currency of the whole workbench: every warp
profile (closed-form, ODE-defined or blended) is one, and every consumer
only ever calls ``curve(t, k)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._util import (bump, cumulative_hermite, grid_points, hermite_interp,
                    plateau, smooth_step, PLATEAU_MASS)

__all__ = [
    "SmoothCurve", "ParityReport", "DomainError", "StepBudgetError",
    "IntegratorError", "JoinBandError",
    "curve_from_derivs", "constant_curve", "line_curve", "sine_curve",
    "cosine_curve", "poly_curve", "table_curve", "piecewise_curve",
    "linear_combo", "sin_of", "even_extension",
    "make_concave_profile", "integrate_transfer_odes",
    "transfer_ode_residuals", "smooth_join", "parity_margin",
    "flatness_margin",
]


class DomainError(ValueError):
    pass


class StepBudgetError(RuntimeError):
    pass


class IntegratorError(RuntimeError):
    """A property that holds identically for exact solutions failed
    on the node grid, signalling an integrator defect."""


class JoinBandError(RuntimeError):
    def __init__(self, overshoot: float, band):
        self.overshoot = overshoot
        self.band = band
        super().__init__(
            f"second derivative leaves band {band} by {overshoot:.3e}")


class SmoothCurve:
    """Scalar function on [t_lo, t_hi] with evaluable derivatives k <= 3."""

    __slots__ = ("t_lo", "t_hi", "provenance", "_derivs", "nodes", "info")

    def __init__(self, t_lo, t_hi, derivs, provenance="closed-form",
                 nodes=None, info=None):
        if not (np.isfinite(t_lo) and np.isfinite(t_hi) and t_lo < t_hi):
            raise DomainError(f"bad domain [{t_lo}, {t_hi}]")
        self.t_lo = float(t_lo)
        self.t_hi = float(t_hi)
        self._derivs = tuple(derivs)
        self.provenance = provenance
        self.nodes = nodes          # optional (ts, 4-column values) table
        self.info = dict(info) if info else {}

    @property
    def domain(self):
        return (self.t_lo, self.t_hi)

    def eval(self, t, k: int = 0):
        if not 0 <= k <= 3:
            raise ValueError(f"derivative order {k} not available")
        arr = np.asarray(t, dtype=float)
        slop = 1e-9 * (1.0 + self.t_hi - self.t_lo)
        if np.any(arr < self.t_lo - slop) or np.any(arr > self.t_hi + slop):
            raise DomainError(
                f"t outside [{self.t_lo}, {self.t_hi}]")
        out = self._derivs[k](np.clip(arr, self.t_lo, self.t_hi))
        if arr.ndim == 0:
            return float(out)
        return np.asarray(out, dtype=float)

    __call__ = eval

    # -- constructors-on-top -------------------------------------------------

    def restrict(self, lo, hi) -> "SmoothCurve":
        slop = 1e-9 * (1.0 + self.t_hi - self.t_lo)
        if lo < self.t_lo - slop or hi > self.t_hi + slop:
            raise DomainError("restriction exceeds domain")
        return SmoothCurve(max(lo, self.t_lo), min(hi, self.t_hi),
                           self._derivs, self.provenance, self.nodes,
                           self.info)

    def shifted(self, dt) -> "SmoothCurve":
        """Curve s(t) = self(t - dt)."""
        d = self._derivs
        derivs = [(lambda k: (lambda t, _k=k: d[_k](t - dt)))(k)
                  for k in range(4)]
        return SmoothCurve(self.t_lo + dt, self.t_hi + dt, derivs,
                           self.provenance)

    def metric_rescale(self, R: float) -> "SmoothCurve":
        """Warp transform under g -> R^2 g: t -> R * self(t / R)."""
        if R <= 0:
            raise ValueError("R must be positive")
        d = self._derivs
        derivs = [(lambda k: (lambda t, _k=k: R ** (1 - _k) * d[_k](t / R)))(k)
                  for k in range(4)]
        return SmoothCurve(self.t_lo * R, self.t_hi * R, derivs,
                           self.provenance)

    def eigen_rescale(self, R: float) -> "SmoothCurve":
        """Principal-curvature transform under g -> R^2 g: t -> self(t/R)/R."""
        if R <= 0:
            raise ValueError("R must be positive")
        d = self._derivs
        derivs = [(lambda k: (lambda t, _k=k: d[_k](t / R) / R ** (1 + _k)))(k)
                  for k in range(4)]
        return SmoothCurve(self.t_lo * R, self.t_hi * R, derivs,
                           self.provenance)

    def scaled(self, a: float) -> "SmoothCurve":
        return linear_combo([(self, a)])

    def plus(self, c: float) -> "SmoothCurve":
        d = self._derivs
        derivs = [lambda t, _d=d[0]: _d(t) + c] + [d[k] for k in (1, 2, 3)]
        return SmoothCurve(self.t_lo, self.t_hi, derivs, self.provenance)

    # -- serialization -------------------------------------------------------

    def node_table(self, per_unit=None) -> np.ndarray:
        """Columns t, v0, v1, v2, v3 (stored nodes if any, else a grid)."""
        if self.nodes is not None:
            ts, cols = self.nodes
            return np.column_stack([ts] + [cols[k] for k in range(4)])
        ts = grid_points(self.t_lo, self.t_hi, per_unit)
        return np.column_stack([ts] + [self.eval(ts, k) for k in range(4)])

    def write_csv(self, path, per_unit=None) -> None:
        tab = self.node_table(per_unit)
        header = "t,v0,v1,v2,v3"
        np.savetxt(path, tab, delimiter=",", header=header, comments="")


# ---------------------------------------------------------------------------
# Closed-form factories.
# ---------------------------------------------------------------------------

def curve_from_derivs(domain, d0, d1, d2, d3, provenance="closed-form",
                      info=None) -> SmoothCurve:
    return SmoothCurve(domain[0], domain[1], (d0, d1, d2, d3), provenance,
                       info=info)


def constant_curve(value, domain) -> SmoothCurve:
    v = float(value)
    return curve_from_derivs(
        domain,
        lambda t: np.full_like(np.asarray(t, float), v),
        lambda t: np.zeros_like(np.asarray(t, float)),
        lambda t: np.zeros_like(np.asarray(t, float)),
        lambda t: np.zeros_like(np.asarray(t, float)))


def line_curve(intercept, slope, domain) -> SmoothCurve:
    a, b = float(intercept), float(slope)
    return curve_from_derivs(
        domain,
        lambda t: a + b * np.asarray(t, float),
        lambda t: np.full_like(np.asarray(t, float), b),
        lambda t: np.zeros_like(np.asarray(t, float)),
        lambda t: np.zeros_like(np.asarray(t, float)))


def sine_curve(amplitude, rate, phase, domain) -> SmoothCurve:
    """A sin(w t + phi)."""
    A, w, phi = float(amplitude), float(rate), float(phase)
    return curve_from_derivs(
        domain,
        lambda t: A * np.sin(w * np.asarray(t, float) + phi),
        lambda t: A * w * np.cos(w * np.asarray(t, float) + phi),
        lambda t: -A * w * w * np.sin(w * np.asarray(t, float) + phi),
        lambda t: -A * w ** 3 * np.cos(w * np.asarray(t, float) + phi))


def cosine_curve(amplitude, rate, phase, domain) -> SmoothCurve:
    return sine_curve(amplitude, rate, phase + np.pi / 2.0, domain)


def poly_curve(coeffs, domain) -> SmoothCurve:
    """Polynomial sum c_j t^j with coefficients in increasing degree."""
    c = np.asarray(coeffs, dtype=float)
    ders = [c]
    for _ in range(3):
        prev = ders[-1]
        ders.append(prev[1:] * np.arange(1, len(prev)) if len(prev) > 1
                    else np.zeros(1))

    def ev(k):
        ck = ders[k][::-1]
        return lambda t: np.polyval(ck, np.asarray(t, float))

    return curve_from_derivs(domain, ev(0), ev(1), ev(2), ev(3))


def sin_of(inner: SmoothCurve, amplitude: float = 1.0) -> SmoothCurve:
    """A sin(inner(t)) with chain-rule derivatives."""
    A = float(amplitude)
    g = inner

    def d0(t):
        return A * np.sin(g.eval(t, 0))

    def d1(t):
        return A * np.cos(g.eval(t, 0)) * g.eval(t, 1)

    def d2(t):
        u, u1, u2 = g.eval(t, 0), g.eval(t, 1), g.eval(t, 2)
        return A * (np.cos(u) * u2 - np.sin(u) * u1 ** 2)

    def d3(t):
        u, u1, u2, u3 = (g.eval(t, 0), g.eval(t, 1), g.eval(t, 2),
                         g.eval(t, 3))
        return A * (np.cos(u) * u3 - 3.0 * np.sin(u) * u1 * u2
                    - np.cos(u) * u1 ** 3)

    return curve_from_derivs(g.domain, d0, d1, d2, d3, g.provenance)


def linear_combo(terms, domain=None) -> SmoothCurve:
    """Sum of weighted curves on the intersection of their domains."""
    curves = [c for c, _ in terms]
    lo = max(c.t_lo for c in curves)
    hi = min(c.t_hi for c in curves)
    if domain is not None:
        lo, hi = max(lo, domain[0]), min(hi, domain[1])

    def ev(k):
        return lambda t: sum(w * c.eval(t, k) for c, w in terms)

    prov = ("closed-form" if all(c.provenance == "closed-form"
                                 for c in curves) else "blended")
    return curve_from_derivs((lo, hi), ev(0), ev(1), ev(2), ev(3), prov)


def table_curve(ts, cols, provenance="ode-defined", info=None) -> SmoothCurve:
    """Curve backed by node columns v0..v3; Hermite between nodes."""
    ts = np.asarray(ts, dtype=float)
    cols = [np.asarray(c, dtype=float) for c in cols]

    def ev(k):
        if k < 3:
            return lambda t: hermite_interp(ts, cols[k], cols[k + 1], t)
        return lambda t: np.interp(np.asarray(t, float), ts, cols[3])

    c = curve_from_derivs((ts[0], ts[-1]), ev(0), ev(1), ev(2), ev(3),
                          provenance, info)
    c.nodes = (ts, cols)
    return c


def piecewise_curve(segments, provenance="blended") -> SmoothCurve:
    """Contiguous segments [(lo, hi, curve), ...] glued by evaluation."""
    segments = sorted(segments, key=lambda s: s[0])
    for (l1, h1, _), (l2, _, _) in zip(segments, segments[1:]):
        if abs(h1 - l2) > 1e-9 * (1 + abs(h1)):
            raise DomainError("segments are not contiguous")
    los = np.array([s[0] for s in segments])
    curves = [s[2] for s in segments]
    t_lo, t_hi = segments[0][0], segments[-1][1]

    def ev(k):
        def f(t):
            t = np.asarray(t, dtype=float)
            idx = np.clip(np.searchsorted(los, t, side="right") - 1,
                          0, len(curves) - 1)
            out = np.empty_like(t)
            for i, c in enumerate(curves):
                m = idx == i
                if np.any(m):
                    lo, hi = c.t_lo, c.t_hi
                    out[m] = c.eval(np.clip(t[m], lo, hi), k)
            return out
        return f

    return curve_from_derivs((t_lo, t_hi), ev(0), ev(1), ev(2), ev(3),
                             provenance)


def even_extension(right_half: SmoothCurve) -> SmoothCurve:
    """Even reflection of a curve on [0, b] to [-b, b]."""
    if abs(right_half.t_lo) > 1e-12:
        raise DomainError("even extension needs domain starting at 0")
    c = right_half

    def ev(k):
        sgn = -1.0 if k % 2 else 1.0
        return lambda t: np.where(np.asarray(t, float) >= 0,
                                  c.eval(np.abs(t), k),
                                  sgn * c.eval(np.abs(t), k))

    return curve_from_derivs((-c.t_hi, c.t_hi), ev(0), ev(1), ev(2), ev(3),
                             c.provenance)


# ---------------------------------------------------------------------------
# Concave stretching profile with pinned slopes.
# ---------------------------------------------------------------------------

def make_concave_profile(lambda1: float, lambda2: float, delta: float,
                         t_max: float = 20.0,
                         lambda_mid: float | None = None) -> SmoothCurve:
    """Concave f on [-delta, t_max] with f(0)=1, f'(0)=lambda2, f''<0,
    f' > lambda1 and f'/f > lambda1/(1 + lambda1 t).

    f(t) = (lambda2 - m) (1 - e^{-t}) + m t + 1 where m sits strictly
    between lambda1 (1+lambda2)/(1+lambda1) and lambda2; the default is the
    midpoint of that interval.  Raises if f'(-delta) >= 1.
    """
    if not 0.0 < lambda1 < lambda2 < 1.0:
        raise ValueError("need 0 < lambda1 < lambda2 < 1")
    if delta <= 0 or t_max <= 0:
        raise ValueError("delta and t_max must be positive")
    lower = lambda1 * (1.0 + lambda2) / (1.0 + lambda1)
    assert lower < lambda2, "interval for the intermediate slope is empty"
    m = 0.5 * (lower + lambda2) if lambda_mid is None else float(lambda_mid)
    if not lower < m < lambda2:
        raise ValueError(
            f"lambda_mid must lie in ({lower}, {lambda2})")
    A = lambda2 - m

    def d0(t):
        t = np.asarray(t, float)
        return A * (1.0 - np.exp(-t)) + m * t + 1.0

    def d1(t):
        return A * np.exp(-np.asarray(t, float)) + m

    def d2(t):
        return -A * np.exp(-np.asarray(t, float))

    def d3(t):
        return A * np.exp(-np.asarray(t, float))

    slope_at_inner = A * np.exp(delta) + m
    if slope_at_inner >= 1.0:
        raise ValueError(
            f"delta={delta} too large: slope {slope_at_inner:.6f} >= 1 at "
            f"t=-delta")
    ts = np.linspace(-delta, t_max, 2048)
    margins = {
        "concavity": float(np.min(-d2(ts))),
        "slope_floor": float(np.min(d1(ts) - lambda1)),
        "log_slope_floor": float(np.min(d1(ts) / d0(ts)
                                        - lambda1 / (1 + lambda1 * ts))),
    }
    return curve_from_derivs(
        (-delta, t_max), d0, d1, d2, d3,
        info={"lambda1": lambda1, "lambda2": lambda2, "lambda_mid": m,
              "slope_at_inner": float(slope_at_inner),
              "margins": margins})


# ---------------------------------------------------------------------------
# Coupled warping ODEs for the curvature-transfer block.
# ---------------------------------------------------------------------------

def _transfer_rhs(C: float, y: np.ndarray) -> np.ndarray:
    g, fc, fcp = y
    e = np.exp(-g * g)
    return np.array([np.exp(-0.5 * g * g), fcp, C * e * fc])


def integrate_transfer_odes(C: float, t_max: float = 20.0,
                            step_budget: int = 65536,
                            h0_init: float = 1.0):
    """Integrate g' = e^{-g^2/2} (g(0)=h0_init) and F'' = C e^{-g^2} F
    (F(0)=1, F'(0)=0) with fixed-step classical fourth-order stepping.

    Returns (g, F) as node-backed SmoothCurves whose derivatives come from
    the right-hand side, never from differencing.  The qualitative
    properties (signs, monotone tail of F g', ratio in [0,1]) are verified
    on the node grid and violations raise IntegratorError.
    """
    if C < 0:
        raise ValueError("C must be >= 0")
    if h0_init <= 0:
        raise ValueError("h0_init must be positive")
    if step_budget < 64 * t_max:
        raise StepBudgetError(
            f"step budget {step_budget} below minimum resolution for "
            f"t_max={t_max}")
    n = int(step_budget)
    h = t_max / n
    ys = np.empty((n + 1, 3))
    ys[0] = (h0_init, 1.0, 0.0)
    y = ys[0].copy()
    for i in range(n):
        k1 = _transfer_rhs(C, y)
        k2 = _transfer_rhs(C, y + 0.5 * h * k1)
        k3 = _transfer_rhs(C, y + 0.5 * h * k2)
        k4 = _transfer_rhs(C, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        ys[i + 1] = y
    ts = np.linspace(0.0, t_max, n + 1)
    g, fc, fcp = ys[:, 0], ys[:, 1], ys[:, 2]

    e_half = np.exp(-0.5 * g * g)
    e_full = np.exp(-g * g)
    g1 = e_half
    g2 = -g * e_full
    g3 = g1 * e_full * (2.0 * g * g - 1.0)
    fc2 = C * e_full * fc
    fc3 = C * e_full * (fcp - 2.0 * g * g1 * fc)

    g_curve = table_curve(ts, (g, g1, g2, g3), info={"C": C, "role": "h0"})
    fc_curve = table_curve(ts, (fc, fcp, fc2, fc3),
                           info={"C": C, "role": "fC"})
    _verify_transfer_properties(ts, g, g1, g2, fc, fcp, fc2, C)
    return g_curve, fc_curve


def _verify_transfer_properties(ts, g, g1, g2, fc, fcp, fc2, C):
    eps = 1e-9
    if np.any(g1 <= 0):
        raise IntegratorError("h0' must stay positive")
    if np.any(g2 >= 0):
        raise IntegratorError("h0'' must stay negative")
    if np.any(fcp[1:] < -eps) or (C > 0 and np.any(fcp[1:] <= 0)):
        raise IntegratorError("fC' must be positive on (0, t_max]")
    if C > 0 and np.any(fc2 <= 0):
        raise IntegratorError("fC'' must be positive")
    ratio = fcp / (fc * g * g1)
    if np.any(ratio < -eps) or np.any(ratio > 1.0 + eps):
        raise IntegratorError("fC'/(fC h0 h0') left [0, 1]")
    tail = (fc * g1)[len(ts) // 2:]
    if np.any(np.diff(tail) > eps):
        raise IntegratorError("fC h0' is not decreasing on the tail")


def transfer_ode_residuals(g_curve: SmoothCurve, fc_curve: SmoothCurve,
                           C: float, stride: int = 8) -> dict:
    """Defining-equation residuals at the stored nodes, measured with
    strided fourth-order differences of the node values (independent of the
    right-hand-side evaluations that answer derivative queries)."""
    from ._util import fd_first_derivative as _fd
    ts, gc = g_curve.nodes
    _, fcc = fc_curve.nodes
    h = ts[1] - ts[0]
    g, fc, fcp = gc[0], fcc[0], fcc[1]
    dg = _fd(g, h, stride)
    dfc = _fd(fc, h, stride)
    dfcp = _fd(fcp, h, stride)
    r1 = np.max(np.abs(dg - np.exp(-0.5 * g * g)))
    r2 = np.max(np.abs(dfc - fcp))
    r3 = np.max(np.abs(dfcp - C * np.exp(-g * g) * fc))
    return {"h0_ode": float(r1), "fC_first_order": float(r2),
            "fC_ode": float(r3)}


# ---------------------------------------------------------------------------
# Smooth joining of two curves across a window.
# ---------------------------------------------------------------------------

def _pair_basis(x, k: int = 0):
    """Antisymmetric pair of unit-mass plateaus on [0, 0.45] and [0.55, 1]
    (in window coordinates): zero net mass, order-one moment lever."""
    x = np.asarray(x, float)
    lo = plateau(x / 0.45, k) / (PLATEAU_MASS * 0.45 ** (k + 1))
    hi = plateau((x - 0.55) / 0.45, k) / (PLATEAU_MASS * 0.45 ** (k + 1))
    return lo - hi


def smooth_join(left: SmoothCurve, right: SmoothCurve, window,
                second_derivative_band, band_tol: float = 1e-2,
                grid_n: int = 2049) -> SmoothCurve:
    """Blend two curves into one that equals ``left`` before the window and
    ``right`` after it.

    The blended second derivative is the step-weighted combination of the
    two inputs plus two compactly supported corrections (a plateau and its
    tilt, both built from the standard bump) solving the slope and value
    matching conditions at the window end.  If the result leaves
    ``second_derivative_band`` widened by ``band_tol``, JoinBandError is
    raised with the measured overshoot.
    """
    a, b = float(window[0]), float(window[1])
    if not a < b:
        raise DomainError("empty join window")
    if a < left.t_lo - 1e-12 or b > left.t_hi + 1e-12:
        raise DomainError("left curve does not cover the window")
    if a < right.t_lo - 1e-12 or b > right.t_hi + 1e-12:
        raise DomainError("right curve does not cover the window")
    w = b - a
    band_lo, band_hi = float(second_derivative_band[0]), \
        float(second_derivative_band[1])

    probe = np.linspace(a, b, 65)
    scale = 1.0 + max(np.max(np.abs(left.eval(probe, 0))),
                      np.max(np.abs(right.eval(probe, 0))))
    if all(np.max(np.abs(left.eval(probe, k) - right.eval(probe, k)))
           <= 1e-12 * scale for k in range(3)):
        if right.t_hi > b:
            segs = [(left.t_lo, b, left), (b, right.t_hi, right)]
        else:
            segs = [(left.t_lo, b, left)]
        out = piecewise_curve(segs)
        out.info.update({"identity": True, "c1": 0.0, "c2": 0.0,
                         "band_overshoot": 0.0})
        return out

    ts = np.linspace(a, b, grid_n)
    x = (ts - a) / w
    W = smooth_step(x)
    W1 = smooth_step(x, 1) / w
    L = [left.eval(ts, k) for k in range(4)]
    R = [right.eval(ts, k) for k in range(4)]

    base2 = (1.0 - W) * L[2] + W * R[2]
    base3 = (1.0 - W) * L[3] + W * R[3] + W1 * (R[2] - L[2])
    P1 = plateau(x) / (PLATEAU_MASS * w)
    P1d = plateau(x, 1) / (PLATEAU_MASS * w * w)
    P2 = _pair_basis(x, 0) / w
    P2d = _pair_basis(x, 1) / (w * w)

    def integrate(y, dy):
        return cumulative_hermite(ts, y, dy)

    wt = b - ts
    i_base = integrate(base2, base3)[-1]
    iw_base = integrate(wt * base2, base2 * (-1.0) + wt * base3)[-1]
    i_p1 = integrate(P1, P1d)[-1]
    iw_p1 = integrate(wt * P1, -P1 + wt * P1d)[-1]
    i_p2 = integrate(P2, P2d)[-1]
    iw_p2 = integrate(wt * P2, -P2 + wt * P2d)[-1]

    need_slope = (R[1][-1] - L[1][0]) - i_base
    need_value = (R[0][-1] - L[0][0] - L[1][0] * w) - iw_base
    mat = np.array([[i_p1, i_p2], [iw_p1, iw_p2]])
    c1, c2 = np.linalg.solve(mat, np.array([need_slope, need_value]))

    out2 = base2 + c1 * P1 + c2 * P2
    out3 = base3 + c1 * P1d + c2 * P2d
    out1 = integrate(out2, out3) + L[1][0]
    out0 = integrate(out1, out2) + L[0][0]

    overshoot = max(0.0, float(np.max(out2) - band_hi),
                    float(band_lo - np.min(out2)))
    if overshoot > band_tol:
        raise JoinBandError(overshoot, (band_lo, band_hi))

    def w2(t):
        tt = np.asarray(t, float)
        xx = (tt - a) / w
        Wv = smooth_step(xx)
        base = ((1.0 - Wv) * left.eval(tt, 2) + Wv * right.eval(tt, 2))
        return (base + c1 * plateau(xx) / (PLATEAU_MASS * w)
                + c2 * _pair_basis(xx) / w)

    def w3(t):
        tt = np.asarray(t, float)
        xx = (tt - a) / w
        Wv = smooth_step(xx)
        W1v = smooth_step(xx, 1) / w
        base = ((1.0 - Wv) * left.eval(tt, 3) + Wv * right.eval(tt, 3)
                + W1v * (right.eval(tt, 2) - left.eval(tt, 2)))
        return (base + c1 * plateau(xx, 1) / (PLATEAU_MASS * w * w)
                + c2 * _pair_basis(xx, 1) / (w * w))

    mid = curve_from_derivs(
        (a, b),
        lambda t: hermite_interp(ts, out0, out1, t),
        lambda t: hermite_interp(ts, out1, out2, t),
        w2, w3, "blended")

    segs = []
    if left.t_lo < a:
        segs.append((left.t_lo, a, left))
    segs.append((a, b, mid))
    if right.t_hi > b:
        segs.append((b, right.t_hi, right))
    out = piecewise_curve(segs)
    out.info.update({"identity": False, "c1": float(c1), "c2": float(c2),
                     "band_overshoot": overshoot, "window": (a, b)})
    return out


# ---------------------------------------------------------------------------
# Parity and flatness measurements at interval ends.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParityReport:
    endpoint: float
    parity: str                    # "odd" | "even"
    order_checked: int
    max_violation: float           # dimensionless
    first_derivative_value: float
    first_derivative_target: float | None = None

    @property
    def first_derivative_error(self):
        if self.first_derivative_target is None:
            return None
        return abs(self.first_derivative_value
                   - self.first_derivative_target)


def parity_margin(curve: SmoothCurve, endpoint: float, parity: str,
                  first_derivative_target: float | None = None,
                  fit_width: float | None = None,
                  fit_points: int = 16) -> ParityReport:
    """Measure how far the curve is from being odd/even at an interval end.

    A one-sided degree-5 least-squares Taylor fit estimates the scaled
    coefficients; the violation is the largest offending coefficient
    (even orders for "odd", odd orders for "even") relative to the largest
    coefficient overall.
    """
    if parity not in ("odd", "even"):
        raise ValueError(parity)
    lo, hi = curve.domain
    slop = 1e-9 * (1 + hi - lo)
    if abs(endpoint - lo) <= slop:
        direction = 1.0
    elif abs(endpoint - hi) <= slop:
        direction = -1.0
    else:
        raise DomainError("endpoint must be an end of the curve domain")
    L = hi - lo
    W = fit_width if fit_width is not None else min(0.05, 0.25 * L)
    offs = direction * W * np.arange(0, fit_points + 1) / fit_points
    xs = offs / W                                # in [-1, 0] or [0, 1]
    vals = curve.eval(endpoint + offs, 0)
    V = np.vander(xs, 6, increasing=True)
    coef, *_ = np.linalg.lstsq(V, vals, rcond=None)
    scaled = coef[:4]                            # orders 0..3, scaled by W^k
    denom = max(float(np.max(np.abs(scaled))), 1e-300)
    bad = (0, 2) if parity == "odd" else (1, 3)
    violation = max(abs(float(scaled[k])) for k in bad) / denom
    d1 = float(coef[1]) / W
    return ParityReport(endpoint=float(endpoint), parity=parity,
                        order_checked=3, max_violation=float(violation),
                        first_derivative_value=d1,
                        first_derivative_target=first_derivative_target)


def flatness_margin(curve: SmoothCurve, endpoint: float) -> float:
    """max_k |curve^{(k)}(endpoint)| over k = 1..3."""
    return max(abs(curve.eval(endpoint, k)) for k in (1, 2, 3))
