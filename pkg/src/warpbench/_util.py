"""Shared numerical machinery: bump functions, smooth steps, Hermite
interpolation, high-order finite differences and small solvers.

Everything here is deterministic and vectorized over numpy arrays.
"""

from __future__ import annotations

import numpy as np

# Uniform sample density used by every "min over grid" certificate.
DEFAULT_GRID_PER_UNIT = 2048

_MIN_GRID_POINTS = 33
_MAX_GRID_POINTS = 400_001


def grid_points(lo: float, hi: float, per_unit: float | None = None,
                min_points: int = _MIN_GRID_POINTS) -> np.ndarray:
    """Uniform inclusive grid with DEFAULT_GRID_PER_UNIT samples per unit."""
    if hi <= lo:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    per_unit = DEFAULT_GRID_PER_UNIT if per_unit is None else float(per_unit)
    n = int(np.ceil((hi - lo) * per_unit)) + 1
    n = min(max(n, min_points), _MAX_GRID_POINTS)
    return np.linspace(lo, hi, n)


# ---------------------------------------------------------------------------
# The standard C^infinity bump exp(1 - 1/(1-x^2)) and machinery built from it.
# ---------------------------------------------------------------------------

def bump(x):
    """exp(1 - 1/(1-x^2)) on (-1,1), zero outside; all derivatives vanish
    at x = +-1."""
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < 1.0
    x2 = np.where(inside, x * x, 0.0)
    with np.errstate(divide="ignore", over="ignore"):
        val = np.exp(1.0 - 1.0 / (1.0 - x2))
    return np.where(inside, val, 0.0)


def bump_d1(x):
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < 1.0
    x2 = np.where(inside, x * x, 0.0)
    u = 1.0 - x2
    return np.where(inside, bump(x) * (-2.0 * x) / (u * u), 0.0)


def bump_d2(x):
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < 1.0
    xs = np.where(inside, x, 0.0)
    u = 1.0 - xs * xs
    a = -2.0 * xs / (u * u)                      # (log bump)'
    b = (-2.0 - 6.0 * xs * xs) / (u * u * u)     # (log bump)''
    return np.where(inside, bump(xs) * (a * a + b), 0.0)


def _bump_mass(n: int = 16385) -> float:
    xs = np.linspace(-1.0, 1.0, n)
    y, dy = bump(xs), bump_d1(xs)
    h = xs[1] - xs[0]
    seg = 0.5 * h * (y[:-1] + y[1:]) + (h * h / 12.0) * (dy[:-1] - dy[1:])
    return float(np.sum(seg))


BUMP_MASS = _bump_mass()


class _SmoothStep:
    """C^infinity step on [0,1]: 0 before, 1 after, flat to all orders at
    both ends.  Values come from a dense cumulative table of the bump (the
    derivative is analytic, so cubic Hermite interpolation keeps full
    double accuracy)."""

    def __init__(self, n: int = 8193):
        xs = np.linspace(0.0, 1.0, n)
        d = bump(2.0 * xs - 1.0)
        h = xs[1] - xs[0]
        # Hermite cumulative integral: exact for cubics, O(h^5) per step.
        dd = 2.0 * bump_d1(2.0 * xs - 1.0)
        seg = 0.5 * h * (d[:-1] + d[1:]) + (h * h / 12.0) * (dd[:-1] - dd[1:])
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        self._xs = xs
        self._table = cum / cum[-1]
        self._norm = cum[-1]

    def value(self, x):
        x = np.asarray(x, dtype=float)
        xc = np.clip(x, 0.0, 1.0)
        idx = np.clip(np.searchsorted(self._xs, xc) - 1, 0, len(self._xs) - 2)
        x0 = self._xs[idx]
        h = self._xs[1] - self._xs[0]
        tt = (xc - x0) / h
        y0, y1 = self._table[idx], self._table[idx + 1]
        d0 = bump(2.0 * x0 - 1.0) / self._norm * h
        d1 = bump(2.0 * (x0 + h) - 1.0) / self._norm * h
        h00 = (1 + 2 * tt) * (1 - tt) ** 2
        h10 = tt * (1 - tt) ** 2
        h01 = tt * tt * (3 - 2 * tt)
        h11 = tt * tt * (tt - 1)
        out = h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1
        return np.where(x <= 0.0, 0.0, np.where(x >= 1.0, 1.0, out))

    def d1(self, x):
        return bump(2.0 * np.asarray(x, float) - 1.0) / self._norm

    def d2(self, x):
        return 2.0 * bump_d1(2.0 * np.asarray(x, float) - 1.0) / self._norm

    def d3(self, x):
        return 4.0 * bump_d2(2.0 * np.asarray(x, float) - 1.0) / self._norm


SMOOTH_STEP = _SmoothStep()


def smooth_step(x, k: int = 0):
    """k-th derivative of the C^infinity unit step on [0,1]."""
    return (SMOOTH_STEP.value, SMOOTH_STEP.d1, SMOOTH_STEP.d2,
            SMOOTH_STEP.d3)[k](x)


def plateau(x, k: int = 0, rise: float = 0.15):
    """C^infinity plateau on [0,1]: 0 (flat) at the ends, 1 on the middle
    [rise, 1-rise].  Product of two smooth steps."""
    x = np.asarray(x, dtype=float)
    a = [smooth_step(x / rise, j) / rise ** j for j in range(k + 1)]
    b = [smooth_step((1.0 - x) / rise, j) * (-1.0 / rise) ** j
         for j in range(k + 1)]
    if k == 0:
        return a[0] * b[0]
    if k == 1:
        return a[1] * b[0] + a[0] * b[1]
    if k == 2:
        return a[2] * b[0] + 2 * a[1] * b[1] + a[0] * b[2]
    if k == 3:
        return a[3] * b[0] + 3 * a[2] * b[1] + 3 * a[1] * b[2] + a[0] * b[3]
    raise ValueError(k)


# Mass of plateau(x, rise=0.15) on [0,1]; frozen from a dense Hermite pass.
def _plateau_mass(rise: float = 0.15, n: int = 16385) -> float:
    xs = np.linspace(0.0, 1.0, n)
    y = plateau(xs, 0, rise)
    dy = plateau(xs, 1, rise)
    h = xs[1] - xs[0]
    seg = 0.5 * h * (y[:-1] + y[1:]) + (h * h / 12.0) * (dy[:-1] - dy[1:])
    return float(np.sum(seg))


PLATEAU_MASS = _plateau_mass()


# ---------------------------------------------------------------------------
# Interpolation and quadrature on node tables.
# ---------------------------------------------------------------------------

def hermite_interp(ts: np.ndarray, ys: np.ndarray, dys: np.ndarray, t):
    """Piecewise-cubic Hermite evaluation; exact at nodes, O(h^4) between.

    ts must be strictly increasing (not necessarily uniform)."""
    t = np.asarray(t, dtype=float)
    tc = np.clip(t, ts[0], ts[-1])
    idx = np.clip(np.searchsorted(ts, tc, side="right") - 1, 0, len(ts) - 2)
    h = ts[idx + 1] - ts[idx]
    x = (tc - ts[idx]) / h
    y0, y1 = ys[idx], ys[idx + 1]
    d0, d1 = dys[idx] * h, dys[idx + 1] * h
    h00 = (1 + 2 * x) * (1 - x) ** 2
    h10 = x * (1 - x) ** 2
    h01 = x * x * (3 - 2 * x)
    h11 = x * x * (x - 1)
    return h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1


def cumulative_hermite(ts: np.ndarray, y: np.ndarray, dy: np.ndarray,
                       y0: float = 0.0) -> np.ndarray:
    """Cumulative integral of y given its derivative dy at the same nodes.

    Per-segment Euler-Maclaurin corrected trapezoid (exact for cubics)."""
    h = np.diff(ts)
    seg = 0.5 * h * (y[:-1] + y[1:]) + (h * h / 12.0) * (dy[:-1] - dy[1:])
    return y0 + np.concatenate([[0.0], np.cumsum(seg)])


def fd_first_derivative(y: np.ndarray, h: float, stride: int = 1) -> np.ndarray:
    """Fourth-order first derivative of uniformly sampled values.

    Central 5-point stencil in the interior, shifted 5-point stencils near
    the ends, all with the given stride (wider stencils suppress rounding
    noise in residual checks)."""
    s = stride
    n = len(y)
    if n < 6 * s:
        raise ValueError("too few nodes for the stencil")
    d = np.empty_like(y)
    hh = h * s
    d[2 * s:n - 2 * s] = (y[:n - 4 * s] - 8 * y[s:n - 3 * s]
                          + 8 * y[3 * s:n - s] - y[4 * s:]) / (12 * hh)
    # shifted stencils near the ends: derivative at the first or second
    # point of a 5-point strided window
    c0 = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
    c1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0
    for j in range(2 * s):
        if j < s:
            idx = j + np.arange(5) * s
            coef = c0
        else:
            idx = (j - s) + np.arange(5) * s
            coef = c1
        d[j] = np.dot(coef, y[idx]) / hh
        d[n - 1 - j] = -np.dot(coef, y[n - 1 - idx]) / hh
    return d


def rank_gf2(rows: list[int]) -> int:
    """Rank over GF(2) of a matrix given as row bitmasks."""
    rank = 0
    pivots: list[int] = []
    for row in rows:
        for p in pivots:
            row = min(row, row ^ p)
        if row:
            pivots.append(row)
            rank += 1
    return rank


def bisect_increasing(fn, lo: float, hi: float, target: float,
                      tol: float = 1e-10, max_iter: int = 200) -> float:
    """Solve fn(x) = target for increasing fn by bisection."""
    flo, fhi = fn(lo) - target, fn(hi) - target
    if flo > 0 or fhi < 0:
        raise ValueError("target not bracketed")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if fn(mid) - target <= 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)
