"""Brute-force reference optimizers used to certify the closed-form solvers.

These are deliberately dumb: a dense grid scan followed by golden-section
refinement inside the best bracketing interval.  They exist so every analytic
result in this package can be checked against a search that shares none of its
algebra.  Determinism contract: pure functions of their inputs, ties broken
toward the smallest abscissa, and the returned value is never worse than any
grid sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import Infeasible, NonFinite

# 1 / golden ratio; each refinement iteration shrinks the bracket by this factor.
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class GridSpec:
    """A 1-D search grid: points equally spaced on [lo, hi], then refine_iters
    golden-section iterations inside the best grid cell pair."""

    lo: float
    hi: float
    points: int
    refine_iters: int = 0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise ValueError(f"GridSpec needs finite lo < hi, got [{self.lo}, {self.hi}]")
        if self.points < 3:
            raise ValueError("GridSpec.points must be >= 3")
        if self.refine_iters < 0:
            raise ValueError("GridSpec.refine_iters must be >= 0")

    def abscissae(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.points)


def certification_grid(lo: float, hi: float) -> GridSpec:
    """Default grid used when certifying closed forms: dense scan plus deep refinement."""
    return GridSpec(lo=lo, hi=hi, points=20001, refine_iters=40)


Objective = Callable[[np.ndarray], np.ndarray]


def grid_optimize(
    objective: Objective,
    spec: GridSpec,
    sense: str = "min",
    skip_nonfinite: bool = False,
) -> tuple[float, float]:
    """Optimize a scalar objective over spec, returning (x_best, value).

    objective must accept a 1-D numpy array of abscissae and return an array
    of the same shape.  With skip_nonfinite=False (the default) a NaN or
    infinity anywhere on the grid raises NonFinite; with True such points are
    treated as absent, and Infeasible is raised if none remain.
    """
    if sense not in ("min", "max"):
        raise ValueError(f"sense must be 'min' or 'max', got {sense!r}")
    flip = 1.0 if sense == "min" else -1.0

    xs = spec.abscissae()
    raw = np.asarray(objective(xs), dtype=float)
    if raw.shape != xs.shape:
        raise ValueError("objective must return one value per abscissa")
    finite = np.isfinite(raw)
    if not finite.all():
        if not skip_nonfinite:
            bad = int(np.flatnonzero(~finite)[0])
            raise NonFinite(f"objective is not finite at x = {xs[bad]!r}")
        if not finite.any():
            raise Infeasible("objective is non-finite at every grid point")

    vals = flip * raw
    vals[~finite] = np.inf
    # argmin takes the first (smallest-x) index on ties.
    i = int(np.argmin(vals))
    best_x = float(xs[i])
    best_v = float(vals[i])

    def probe(x: float) -> float:
        v = float(np.asarray(objective(np.array([x])), dtype=float)[0])
        return flip * v if math.isfinite(v) else math.inf

    # Golden-section refinement between the neighbours of the best grid point.
    # The incumbent only moves on a strict improvement, which preserves the
    # smallest-x tie-break and the never-worse-than-grid guarantee.
    if spec.refine_iters > 0:
        a = float(xs[max(i - 1, 0)])
        b = float(xs[min(i + 1, spec.points - 1)])
        m1 = b - _INV_PHI * (b - a)
        m2 = a + _INV_PHI * (b - a)
        f1, f2 = probe(m1), probe(m2)
        for x, v in ((m1, f1), (m2, f2)):
            if v < best_v:
                best_x, best_v = x, v
        for _ in range(spec.refine_iters):
            if f1 <= f2:
                b, m2, f2 = m2, m1, f1
                m1 = b - _INV_PHI * (b - a)
                f1 = probe(m1)
                if f1 < best_v:
                    best_x, best_v = m1, f1
            else:
                a, m1, f1 = m1, m2, f2
                m2 = a + _INV_PHI * (b - a)
                f2 = probe(m2)
                if f2 < best_v:
                    best_x, best_v = m2, f2

    return best_x, flip * best_v


def power_split_sweep(
    evaluator: Objective,
    total_w: float,
    spec: GridSpec,
) -> tuple[float, float]:
    """Maximize evaluator over the first user's power share, returning (p1, value).

    The grid is spec clipped to [0, total_w].  The evaluator marks infeasible
    splits by returning NaN or -inf; Infeasible is raised when no grid point
    is feasible.
    """
    if total_w <= 0:
        raise Infeasible("total power budget must be positive")
    lo = max(spec.lo, 0.0)
    hi = min(spec.hi, total_w)
    if not lo < hi:
        raise Infeasible("power-split grid is empty after clipping to [0, total]")
    clipped = GridSpec(lo=lo, hi=hi, points=spec.points, refine_iters=spec.refine_iters)
    return grid_optimize(evaluator, clipped, sense="max", skip_nonfinite=True)
