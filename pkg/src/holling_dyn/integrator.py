"""Adaptive Dormand-Prince 5(4) integration with dense output.

The scheme is the classical seven-stage FSAL pair: the 5th-order solution is
propagated, the embedded 4th-order solution gives the local error estimate,
and a PI controller picks the next step.  Output on a user grid comes from the
4th-order continuous extension, so grid points never shorten steps.

States leaving the closed positive orthant are clamped to
``IntegratorConfig.positivity_floor``; each clamp is counted in the stats.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExhausted, NonFiniteDerivative, StepUnderflow, ValidationError

__all__ = ["IntegratorConfig", "IntegratorStats", "Trajectory", "integrate"]

# Butcher tableau.
C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
]
B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# 5th minus embedded 4th order weights.
E = np.array([
    71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40,
])
# Continuous extension: y(t + theta h) = y + h * K.T @ (P @ [theta, theta^2, theta^3, theta^4]).
P = np.array([
    [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0, 0, 0, 0],
    [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

ORDER = 5
SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 10.0
# PI controller exponents (Gustafsson-type, as tuned for this pair by Hairer & Wanner).
BETA = 0.04
ALPHA = 1.0 / ORDER - 0.75 * BETA


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_steps: int = 50_000_000
    initial_step: float | None = None
    positivity_floor: float = 0.0

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValidationError("tolerances must be positive")
        if self.max_steps < 1:
            raise ValidationError("max_steps must be >= 1")
        if self.initial_step is not None and not self.initial_step > 0:
            raise ValidationError("initial_step must be positive")
        if self.positivity_floor < 0:
            raise ValidationError("positivity_floor must be >= 0")


@dataclass
class IntegratorStats:
    steps: int = 0
    rejected: int = 0
    rhs_evals: int = 0
    clamps: int = 0


@dataclass(frozen=True)
class Trajectory:
    """Time grid and matching state samples of one integration run."""

    times: np.ndarray
    states: np.ndarray
    stats: IntegratorStats = field(default_factory=IntegratorStats)

    def __len__(self):
        return len(self.times)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def component(self, i) -> np.ndarray:
        return self.states[:, i]


def _initial_step(f, t0, y0, f0, direction_span, rtol, atol, stats):
    # Hairer, Norsett & Wanner, "Solving ODEs I", II.4.
    scale = atol + rtol * np.abs(y0)
    d0 = np.max(np.abs(y0) / scale)
    d1 = np.max(np.abs(f0) / scale)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, direction_span)
    y1 = y0 + h0 * f0
    f1 = f(t0 + h0, y1)
    stats.rhs_evals += 1
    d2 = np.max(np.abs(f1 - f0) / scale) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1.0 / ORDER)
    return min(100 * h0, h1, direction_span)


def integrate(rhs, y0, t0: float, t1: float, grid=None, cfg: IntegratorConfig | None = None) -> Trajectory:
    """Integrate ``y' = rhs(t, y)`` from ``t0`` to ``t1``.

    Parameters
    ----------
    rhs
        Callable ``rhs(t, y) -> ndarray``.
    y0
        Initial state, componentwise nonnegative.
    t0, t1
        Integration interval, ``t0 <= t1``.  ``t0 == t1`` returns the initial
        state only.
    grid
        Strictly increasing output times inside ``[t0, t1]``.  When omitted the
        accepted step points (including ``t0``) are returned.
    cfg
        Tolerances and budget.  A step is accepted when every component of the
        local error estimate satisfies ``|err_i| <= abs_tol + rel_tol*|y_i|``.

    Raises
    ------
    StepUnderflow, BudgetExhausted, NonFiniteDerivative
    """
    cfg = cfg or IntegratorConfig()
    y = np.array(y0, dtype=float)
    if y.ndim != 1:
        raise ValidationError("initial state must be a 1-D vector")
    if not np.all(np.isfinite(y)) or np.any(y < 0):
        raise ValidationError("initial state must be finite and componentwise >= 0")
    t0, t1 = float(t0), float(t1)
    if not t1 >= t0:
        raise ValidationError("integration interval must satisfy t0 <= t1")

    if grid is not None:
        grid = np.asarray(grid, dtype=float)
        if grid.ndim != 1:
            raise ValidationError("grid must be one-dimensional")
        if np.any(np.diff(grid) <= 0):
            raise ValidationError("grid must be strictly increasing")
        if len(grid) and (grid[0] < t0 or grid[-1] > t1):
            raise ValidationError("grid must lie inside [t0, t1]")

    stats = IntegratorStats()
    floor = cfg.positivity_floor
    rtol, atol = cfg.rel_tol, cfg.abs_tol

    if t1 == t0:
        times = np.array([t0]) if grid is None else grid
        states = np.tile(y, (len(times), 1))
        return Trajectory(times, states, stats)

    out_t: list[float] = []
    out_y: list[np.ndarray] = []
    if grid is None:
        out_t.append(t0)
        out_y.append(y.copy())
        gi = None
    else:
        gi = 0
        while gi < len(grid) and grid[gi] <= t0:
            out_t.append(float(grid[gi]))
            out_y.append(y.copy())
            gi += 1

    n = len(y)
    K = np.empty((7, n))
    f0 = np.asarray(rhs(t0, y), dtype=float)
    stats.rhs_evals += 1
    if not np.all(np.isfinite(f0)):
        raise NonFiniteDerivative(f"non-finite derivative at t={t0}")
    K[0] = f0

    span = t1 - t0
    h = cfg.initial_step or _initial_step(rhs, t0, y, f0, span, rtol, atol, stats)
    t_scale = max(abs(t0), abs(t1), span)
    h_min = 1e2 * np.finfo(float).eps * t_scale
    err_prev = 1e-4
    t = t0
    last_rejected = False

    while t < t1:
        if stats.steps + stats.rejected >= cfg.max_steps:
            raise BudgetExhausted(f"step budget {cfg.max_steps} exhausted at t={t}")
        if h < h_min:
            raise StepUnderflow(f"step size {h:.3e} below {h_min:.3e} at t={t}")
        final_step = t + h >= t1
        if final_step:
            h = t1 - t

        for s in range(1, 6):
            ys = y + h * (A[s] @ K[:s])
            K[s] = rhs(t + C[s] * h, ys)
        y_new = y + h * (B[:6] @ K[:6])
        K[6] = rhs(t + h, y_new)
        stats.rhs_evals += 6

        if not (np.all(np.isfinite(K)) and np.all(np.isfinite(y_new))):
            stats.rejected += 1
            h *= MIN_FACTOR
            last_rejected = True
            if h < h_min:
                raise NonFiniteDerivative(f"non-finite derivative near t={t}")
            continue

        err_vec = h * (E @ K)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.max(np.abs(err_vec) / scale))

        if err <= 1.0:
            t_new = t1 if final_step else t + h
            if gi is not None:
                while gi < len(grid) and grid[gi] <= t_new:
                    theta = (grid[gi] - t) / h
                    q = P @ np.array([theta, theta**2, theta**3, theta**4])
                    yi = y + h * (q @ K)
                    if np.any(yi < 0):
                        yi = np.where(yi < 0, floor, yi)
                    out_t.append(float(grid[gi]))
                    out_y.append(yi)
                    gi += 1
            if np.any(y_new < 0):
                stats.clamps += 1
                y_new = np.where(y_new < 0, floor, y_new)
                K[6] = rhs(t_new, y_new)
                stats.rhs_evals += 1
            t = t_new
            y = y_new
            K[0] = K[6]
            stats.steps += 1
            if gi is None:
                out_t.append(t)
                out_y.append(y.copy())

            err = max(err, 1e-10)
            factor = SAFETY * err ** (-ALPHA) * err_prev**BETA
            factor = min(MAX_FACTOR, max(MIN_FACTOR, factor))
            if last_rejected:
                factor = min(1.0, factor)
            h *= factor
            err_prev = err
            last_rejected = False
        else:
            stats.rejected += 1
            factor = max(MIN_FACTOR, SAFETY * err ** (-1.0 / ORDER))
            h *= factor
            last_rejected = True

    return Trajectory(np.array(out_t), np.array(out_y), stats)
