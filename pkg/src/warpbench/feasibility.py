"""Parameter-box search: sample block builders over named parameter
intervals and emit admissibility certificates with margins.

Every certificate is deterministic given (box, predicate, budget, seed) and
every listed sample reproduces a pass when re-run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import blocks

__all__ = ["Interval", "ParamBox", "CertEntry", "Certificate",
           "RefineError", "scan", "refine", "PREDICATES"]

_OPEN_OFFSET = 1e-6


class RefineError(RuntimeError):
    pass


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    open_lo: bool = False
    open_hi: bool = False

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def points(self, n: int) -> np.ndarray:
        lo, hi = self.lo, self.hi
        off = _OPEN_OFFSET * (hi - lo if hi > lo else 1.0)
        if self.open_lo:
            lo += off
        if self.open_hi:
            hi -= off
        if n == 1:
            return np.array([0.5 * (lo + hi)])
        return np.linspace(lo, hi, n)


def _as_interval(spec) -> Interval:
    if isinstance(spec, Interval):
        return spec
    if isinstance(spec, (list, tuple)) and len(spec) >= 2:
        flags = spec[2] if len(spec) > 2 else ""
        return Interval(float(spec[0]), float(spec[1]),
                        open_lo="(" in flags, open_hi=")" in flags)
    raise ValueError(f"cannot interpret interval spec {spec!r}")


@dataclass
class ParamBox:
    params: dict                 # name -> Interval (or (lo, hi) tuple)
    resolution: object = 4       # int or dict per axis

    def __post_init__(self):
        self.params = {k: _as_interval(v) for k, v in self.params.items()}

    def axis_resolution(self, name: str) -> int:
        if isinstance(self.resolution, dict):
            return int(self.resolution.get(name, 4))
        return int(self.resolution)

    @property
    def names(self):
        return sorted(self.params)

    def grid_size(self) -> int:
        size = 1
        for name in self.names:
            size *= self.axis_resolution(name)
        return size

    def full_grid(self):
        axes = [self.params[n].points(self.axis_resolution(n))
                for n in self.names]
        mesh = np.meshgrid(*axes, indexing="ij")
        flat = [m.ravel() for m in mesh]
        for i in range(len(flat[0])):
            yield {n: float(flat[j][i]) for j, n in enumerate(self.names)}

    def random_samples(self, budget: int, seed: int):
        rng = np.random.default_rng(seed)
        axes = {n: self.params[n].points(self.axis_resolution(n))
                for n in self.names}
        seen = set()
        out = []
        attempts = 0
        while len(out) < budget and attempts < 50 * budget:
            attempts += 1
            idx = tuple(int(rng.integers(0, len(axes[n])))
                        for n in self.names)
            if idx in seen:
                continue
            seen.add(idx)
            out.append({n: float(axes[n][i])
                        for n, i in zip(self.names, idx)})
        return out

    def to_json_dict(self):
        return {n: {"lo": iv.lo, "hi": iv.hi, "open_lo": iv.open_lo,
                    "open_hi": iv.open_hi,
                    "resolution": self.axis_resolution(n)}
                for n, iv in self.params.items()}


@dataclass(frozen=True)
class CertEntry:
    params: dict
    min_margin: float
    verdict: str

    def sort_key(self):
        # descending margin, ties broken lexicographically by name/value
        return (-self.min_margin,
                tuple((k, self.params[k]) for k in sorted(self.params)))


@dataclass
class Certificate:
    predicate: str
    entries: list
    grid: dict = field(default_factory=dict)
    seed: int | None = None
    failures: int = 0

    @property
    def best(self) -> CertEntry | None:
        return self.entries[0] if self.entries else None

    def to_json_dict(self):
        return {
            "predicate": self.predicate,
            "seed": self.seed,
            "failures": self.failures,
            "grid": self.grid,
            "entries": [{"params": e.params, "min_margin": e.min_margin,
                         "verdict": e.verdict} for e in self.entries],
        }


def _margin_of(report) -> tuple:
    if hasattr(report, "min_margin"):
        return report.min_margin(), report.verdict
    raise TypeError("predicate must return a BlockReport")


def _run_predicate(fn, sample: dict, fixed: dict, grid=None) -> CertEntry:
    merged = {**fixed, **sample}
    if grid is not None:
        merged["grid"] = grid
    try:
        report = fn(**merged)
        margin, verdict = _margin_of(report)
    except (blocks.BuildError, blocks.HorizonError) as exc:
        margin, verdict = -math.inf, f"error:{type(exc).__name__}"
    return CertEntry(sample, float(margin), verdict)


def _default_collar_profile():
    """Convex boundary profile used when a handle2 scan does not supply
    one: B > 0, B' < 0, B'' < 0 near the boundary."""
    from .curves import cosine_curve
    return cosine_curve(0.9, 1.0, 0.1, (0.0, 1.0))


def _handle1_tied(lambda1, **kw):
    lambda2 = lambda1 + 0.01
    if lambda2 >= 1.0:
        raise blocks.BuildError("tied slope lambda1 + 0.01 reaches 1")
    return blocks.build_handle1(lambda1=lambda1, lambda2=lambda2, **kw)


def _handle2_defaulted(**kw):
    if kw.get("B") is None:
        kw["B"] = _default_collar_profile()
    return blocks.build_handle2(**kw)


def _handle2_closed_form(lambda1, lambda2, a, b, grid=None):
    """Just the conservative closed-form bound for the dug face's radial
    entry, as a single-margin report (monotone decreasing in a)."""
    import numpy as np
    if b >= 1.0 / (2.0 * lambda2):
        raise blocks.BuildError("b must stay below 1/(2 lambda2)")
    ts = np.linspace(0.0, 0.98 * b, 2049)
    vals = (-a * a * lambda2 * (1.0 + lambda2 * b)
            - 2.0 * lambda2 / (1.0 + lambda1 * ts) + 1.0 / (b - ts))
    i = int(np.argmin(vals))
    return blocks.BlockReport(
        "handle2-closed-form",
        {"lambda1": lambda1, "lambda2": lambda2, "a": a, "b": b},
        [blocks.Margin("closed_form_radial", float(vals[i]),
                       float(ts[i]))])


# Named predicates: a builder plus the defaults a scan does not vary.
PREDICATES = {
    "handle1": {
        "builder": blocks.build_handle1,
        "defaults": {"n": 4, "K": 0.9, "delta": 0.05},
    },
    "handle1-tied": {
        "builder": _handle1_tied,
        "defaults": {"n": 4, "K": 0.9, "delta": 0.05},
    },
    "handle2": {
        "builder": _handle2_defaulted,
        "defaults": {"B": None},
    },
    "handle2-closed-form": {
        "builder": _handle2_closed_form,
        "defaults": {"lambda1": 0.2, "lambda2": 0.25},
    },
    "handle-assembly": {
        "builder": lambda **kw: blocks.assemble_handle(
            kw.pop("n", 4), kw.pop("K", 0.9),
            {k[3:]: v for k, v in kw.items() if k.startswith("p1_")},
            {k[3:]: v for k, v in kw.items() if k.startswith("p2_")}),
        "defaults": {},
    },
    "transfer": {
        "builder": blocks.build_transfer_block,
        "defaults": {"p": 2, "q": 3, "r0": 0.1, "nu": 1.5, "lam": 0.5},
    },
    "s1": {
        "builder": blocks.build_s1_block,
        "defaults": {"q": 3},
    },
    "cone": {
        "builder": lambda **kw: blocks.build_cone_metric(**kw)[1],
        "defaults": {"n": 4, "K": 0.9, "delta": 0.02, "t": 1.0},
    },
    "fibre-disc": {
        "builder": lambda **kw: blocks.build_fibre_disc_warp(**kw)[1],
        "defaults": {"p": 3},
    },
    "projective": {
        "builder": blocks.projective_family_check,
        "defaults": {"d": 2, "n": 2},
    },
    "wu-blended": {
        "builder": lambda **kw: blocks.wu_family_check("blended", **kw),
        "defaults": {},
    },
}


def scan(box: ParamBox, predicate: str, budget: int,
         seed: int = 0, fixed: dict | None = None,
         grid=None) -> Certificate:
    """Evaluate the named block builder at every box sample (full grid when
    the budget allows, otherwise a seeded random subset) and certify the
    passing samples sorted by min-margin."""
    if predicate not in PREDICATES:
        raise KeyError(f"unknown predicate {predicate!r}; "
                       f"known: {sorted(PREDICATES)}")
    spec = PREDICATES[predicate]
    fixed = {**spec["defaults"], **(fixed or {})}
    size = box.grid_size()
    randomized = size > budget
    samples = (box.random_samples(budget, seed) if randomized
               else list(box.full_grid()))
    entries = []
    failures = 0
    for sample in samples:
        entry = _run_predicate(spec["builder"], sample, fixed, grid)
        if entry.verdict == "pass":
            entries.append(entry)
        else:
            failures += 1
    entries.sort(key=CertEntry.sort_key)
    return Certificate(
        predicate=predicate,
        entries=entries,
        grid={"box": box.to_json_dict(), "budget": budget,
              "randomized": randomized, "evaluated": len(samples),
              "fixed": {k: v for k, v in fixed.items()
                        if isinstance(v, (int, float, str, bool))}},
        seed=seed if randomized else None,
        failures=failures)


def refine(cert: Certificate, target_margin: float,
           box: ParamBox | None = None, max_iter: int = 40,
           local_resolution: int = 3, fixed: dict | None = None,
           grid=None) -> Certificate:
    """Shrinking-box bisection around the best certified sample until some
    sample reaches target_margin or the box granularity floor 1e-6."""
    if not cert.entries:
        raise RefineError("cannot refine an empty certificate")
    if cert.best.min_margin >= target_margin:
        return cert
    if box is None:
        box = ParamBox({n: (v["lo"], v["hi"])
                        for n, v in cert.grid["box"].items()})
    spec = PREDICATES[cert.predicate]
    fixed = {**spec["defaults"],
             **{k: v for k, v in cert.grid.get("fixed", {}).items()},
             **(fixed or {})}
    widths = {n: box.params[n].hi - box.params[n].lo for n in box.names}
    best = cert.best
    log = [best]
    scale = 1.0
    for _ in range(max_iter):
        scale *= 0.5
        if scale < 1e-6:
            raise RefineError(
                f"granularity floor reached with margin "
                f"{best.min_margin:.4g} < target {target_margin:.4g}")
        local = {}
        for n in box.names:
            half = 0.5 * widths[n] * scale
            c = best.params[n]
            iv = box.params[n]
            off = _OPEN_OFFSET * max(widths[n], 1e-12)
            lo = max(iv.lo + (off if iv.open_lo else 0.0), c - half)
            hi = min(iv.hi - (off if iv.open_hi else 0.0), c + half)
            local[n] = (lo, max(hi, lo))
        sub = ParamBox(local, local_resolution)
        for sample in sub.full_grid():
            entry = _run_predicate(spec["builder"], sample, fixed, grid)
            if entry.verdict == "pass" and \
                    entry.min_margin > best.min_margin:
                best = entry
        log.append(best)
        if best.min_margin >= target_margin:
            break
    else:
        raise RefineError(
            f"target margin {target_margin} unreachable in {max_iter} "
            f"iterations (best {best.min_margin:.4g})")
    if best.min_margin < target_margin:
        raise RefineError(
            f"granularity floor reached with margin "
            f"{best.min_margin:.4g} < target {target_margin:.4g}")
    unique = {tuple(sorted(e.params.items())): e for e in log}
    entries = sorted(unique.values(), key=CertEntry.sort_key)
    return Certificate(predicate=cert.predicate, entries=entries,
                       grid={**cert.grid, "refined": True,
                             "target_margin": target_margin},
                       seed=cert.seed, failures=cert.failures)
