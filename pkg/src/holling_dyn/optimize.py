"""Nelder-Mead simplex minimization with box constraints and one restart."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["SimplexResult", "nelder_mead"]

REFLECT, EXPAND, CONTRACT, SHRINK = 1.0, 2.0, 0.5, 0.5


@dataclass
class SimplexResult:
    x: np.ndarray
    fun: float
    iterations: int
    evaluations: int
    converged: bool
    history: list = field(default_factory=list)


def _diameter(simplex):
    return float(max(np.max(np.abs(v - simplex[0])) for v in simplex[1:])) if len(simplex) > 1 else 0.0


def _run(f, x0, step, lower, upper, tol, max_iters, state):
    n = len(x0)
    clip = lambda v: np.clip(v, lower, upper)
    simplex = [clip(np.array(x0, dtype=float))]
    for i in range(n):
        v = simplex[0].copy()
        v[i] += step[i]
        if v[i] > upper[i]:
            v[i] = simplex[0][i] - step[i]
        simplex.append(clip(v))
    values = [state.evaluate(v) for v in simplex]

    it = 0
    while True:
        order = np.argsort(values, kind="stable")
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        state.history.append(values[0])
        if _diameter(simplex) < tol:
            return simplex[0], values[0], True
        if it >= max_iters:
            return simplex[0], values[0], False
        it += 1
        state.iterations += 1

        centroid = np.mean(simplex[:-1], axis=0)
        worst = simplex[-1]
        xr = clip(centroid + REFLECT * (centroid - worst))
        fr = state.evaluate(xr)
        if fr < values[0]:
            xe = clip(centroid + EXPAND * (xr - centroid))
            fe = state.evaluate(xe)
            if fe < fr:
                simplex[-1], values[-1] = xe, fe
            else:
                simplex[-1], values[-1] = xr, fr
        elif fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
        else:
            if fr < values[-1]:
                xc = clip(centroid + CONTRACT * (xr - centroid))
                fc = state.evaluate(xc)
                accept = fc <= fr
            else:
                xc = clip(centroid + CONTRACT * (worst - centroid))
                fc = state.evaluate(xc)
                accept = fc < values[-1]
            if accept:
                simplex[-1], values[-1] = xc, fc
            else:
                best = simplex[0]
                for i in range(1, n + 1):
                    simplex[i] = best + SHRINK * (simplex[i] - best)
                    values[i] = state.evaluate(simplex[i])


class _State:
    def __init__(self, f):
        self.f = f
        self.evaluations = 0
        self.iterations = 0
        self.history = []

    def evaluate(self, x):
        self.evaluations += 1
        value = self.f(x)
        return float(value) if np.isfinite(value) else np.inf


def nelder_mead(f, x0, *, step=0.1, lower=None, upper=None, tol=1e-6, max_iters=2000, restart=True):
    """Minimize ``f`` over a box by the Nelder-Mead simplex method.

    The initial simplex offsets each coordinate by ``step``.  Convergence is
    declared when the simplex diameter (max-norm distance of every vertex from
    the best one) drops below ``tol``.  With ``restart`` the search is repeated
    once from the best vertex with a fresh simplex; ``max_iters`` bounds the
    total iteration count.  ``history`` records the best value after every
    iteration and is nonincreasing.
    """
    x0 = np.asarray(x0, dtype=float)
    n = len(x0)
    lower = np.full(n, -np.inf) if lower is None else np.asarray(lower, dtype=float)
    upper = np.full(n, np.inf) if upper is None else np.asarray(upper, dtype=float)
    step = np.broadcast_to(np.asarray(step, dtype=float), (n,)).copy()
    state = _State(f)
    if n == 0:
        value = state.evaluate(x0)
        return SimplexResult(x0, value, 0, state.evaluations, True, [value])

    x, fx, converged = _run(f, x0, step, lower, upper, tol, max_iters, state)
    if restart:
        remaining = max_iters - state.iterations
        x2, fx2, converged = _run(f, x, step, lower, upper, tol, remaining, state)
        if fx2 <= fx:
            x, fx = x2, fx2
    return SimplexResult(x, fx, state.iterations, state.evaluations, converged, state.history)
