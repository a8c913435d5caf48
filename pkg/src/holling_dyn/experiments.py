"""Numerical experiments on the model's long-run and singular-limit behavior."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import analysis
from .errors import AssumptionViolated, HypothesisViolated, NoCycleDetected, ValidationError
from .integrator import IntegratorConfig, Trajectory, integrate
from .model import FullParams, ReducedParams, embed_reduced, full_field, reduced_field

__all__ = [
    "LimitStudyResult",
    "CycleReport",
    "ExtinctionResult",
    "uniform_grid",
    "slow_manifold_split",
    "sup_errors",
    "singular_limit_study",
    "extinction_run",
    "persistence_probe",
    "hopf_boundary_rho",
    "detect_limit_cycle",
]


@dataclass(frozen=True)
class LimitStudyResult:
    epsilons: tuple[float, ...]
    sup_err_N: tuple[float, ...]
    sup_err_P: tuple[float, ...]
    horizon: float
    reduced: Trajectory | None = field(default=None, repr=False)
    full: tuple[Trajectory, ...] = field(default=(), repr=False)

    @property
    def rel_err_N(self) -> tuple[float, ...]:
        scale = np.max(np.abs(self.reduced.states[:, 0]))
        return tuple(e / scale for e in self.sup_err_N)

    @property
    def rel_err_P(self) -> tuple[float, ...]:
        scale = np.max(np.abs(self.reduced.states[:, 1]))
        return tuple(e / scale for e in self.sup_err_P)


@dataclass(frozen=True)
class CycleReport:
    found: bool
    period: float | None
    amplitude_N: float
    amplitude_P: float
    transient_discarded: float
    peak_times: np.ndarray = field(default=None, repr=False)
    orbit: Trajectory | None = field(default=None, repr=False)


class ExtinctionResult(NamedTuple):
    terminal: np.ndarray
    converged_to_E2: bool
    trajectory: Trajectory


def uniform_grid(t0: float, t1: float, step: float) -> np.ndarray:
    """Grid from t0 to t1 with spacing at most ``step``, both ends included."""
    if not step > 0:
        raise ValidationError("grid step must be positive")
    n = max(1, int(np.ceil((t1 - t0) / step - 1e-9)))
    return np.linspace(t0, t1, n + 1)


def slow_manifold_split(chi: float, kappa: float, N0: float, P0: float, m: float = 1.0) -> tuple[float, float]:
    """Quasi-steady split of total predators into searching and handling."""
    if min(chi, kappa, N0, P0) < 0:
        raise ValidationError("split inputs must be nonnegative")
    x = chi * kappa * (N0**m if N0 > 0 else 0.0)
    searching = P0 / (1.0 + x)
    return searching, P0 - searching


def sup_errors(full: Trajectory, reduced: Trajectory) -> tuple[float, float]:
    """Sup-norm gaps in prey and in total predators on a shared grid.

    ``full`` may be a three-compartment or a reduced ``(N, P)`` trajectory.
    """
    if not np.array_equal(full.times, reduced.times):
        raise ValidationError("trajectories must share their output grid")
    fs = full.states
    P_full = fs[:, 1] + fs[:, 2] if fs.shape[1] == 3 else fs[:, 1]
    err_N = float(np.max(np.abs(fs[:, 0] - reduced.states[:, 0])))
    err_P = float(np.max(np.abs(P_full - reduced.states[:, 1])))
    return err_N, err_P


def singular_limit_study(
    reduced_p: ReducedParams,
    eps_list,
    ic,
    tau: float,
    *,
    split=None,
    grid_step: float = 0.01,
    cfg: IntegratorConfig | None = None,
) -> LimitStudyResult:
    """Compare the scaled full system at each epsilon with the reduced model.

    ``ic = (N0, P0)``; the full system starts from the slow-manifold split of
    ``P0`` unless ``split = (P_S0, P_H0)`` overrides it.  Errors are sup norms
    over a uniform grid with spacing at most ``grid_step`` years.
    """
    eps = tuple(float(e) for e in eps_list)
    if not eps:
        raise ValidationError("epsilon list is empty")
    if any(e <= 0 for e in eps):
        raise ValidationError("epsilons must be positive")
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValidationError("epsilons must be strictly descending")
    N0, P0 = (float(v) for v in ic)
    if split is None:
        split = slow_manifold_split(reduced_p.chi, reduced_p.kappa, N0, P0, reduced_p.m)
    grid = uniform_grid(0.0, tau, grid_step)
    reduced = integrate(reduced_field(reduced_p), (N0, P0), 0.0, tau, grid, cfg)

    errs_N, errs_P, fulls = [], [], []
    for e in eps:
        fp = embed_reduced(reduced_p, e)
        report = analysis.check_assumptions(fp)
        if not (report.a21_holds and report.a22_holds):
            raise AssumptionViolated(f"standing assumptions fail at epsilon={e}")
        traj = integrate(full_field(fp), (N0, *split), 0.0, tau, grid, cfg)
        eN, eP = sup_errors(traj, reduced)
        errs_N.append(eN)
        errs_P.append(eP)
        fulls.append(traj)
    return LimitStudyResult(eps, tuple(errs_N), tuple(errs_P), float(tau), reduced, tuple(fulls))


def extinction_run(
    p: FullParams,
    ic,
    horizon: float,
    *,
    tol_ext: float = 1e-6,
    grid_step: float | None = 1.0,
    cfg: IntegratorConfig | None = None,
) -> ExtinctionResult:
    """Integrate under the predator-extinction hypothesis (E2 stable).

    ``converged_to_E2`` holds when total predators fall below ``tol_ext`` and
    prey sit within ``tol_ext * N_hat`` of the carrying capacity.
    """
    report = analysis.check_assumptions(p)
    if not (report.a21_holds and report.a22_holds):
        raise HypothesisViolated("standing assumptions fail")
    if not report.e2_stable:
        raise HypothesisViolated("E2 is not locally stable; predators need not go extinct")
    y0 = np.asarray(ic, dtype=float)
    if y0[0] < 0 or y0[1] + y0[2] <= 0:
        raise ValidationError("initial state needs predators present and N >= 0")
    grid = None if grid_step is None else uniform_grid(0.0, horizon, grid_step)
    traj = integrate(full_field(p), y0, 0.0, horizon, grid, cfg)
    N, S, H = traj.final
    ok = (S + H) < tol_ext and abs(N - p.N_hat) < tol_ext * p.N_hat
    return ExtinctionResult(traj.final.copy(), bool(ok), traj)


def persistence_probe(
    p: FullParams,
    ic_set,
    horizon: float = 300.0,
    window: float = 100.0,
    *,
    grid_step: float = 0.01,
    cfg: IntegratorConfig | None = None,
) -> np.ndarray:
    """Per initial condition, minima of ``N`` and ``P_S + P_H`` over the final window.

    Returns an array of shape ``(len(ic_set), 2)``.
    """
    if not analysis.check_assumptions(p).interior_exists:
        raise HypothesisViolated("persistence needs the coexistence equilibrium")
    if not 0 < window <= horizon:
        raise ValidationError("window must lie in (0, horizon]")
    grid = uniform_grid(horizon - window, horizon, grid_step)
    out = []
    for ic in ic_set:
        y0 = np.asarray(ic, dtype=float)
        if not (y0[0] > 0 and y0[1] + y0[2] > 0):
            raise ValidationError(f"initial state {tuple(y0)} is not interior")
        traj = integrate(full_field(p), y0, 0.0, horizon, grid, cfg)
        s = traj.states
        out.append((s[:, 0].min(), (s[:, 1] + s[:, 2]).min()))
    return np.array(out)


def hopf_boundary_rho(p: FullParams, lo: float, hi: float, tol: float = 1e-12) -> float:
    """Bisect on ``rho`` for the sign change of the Hurwitz product ``p1 p2 - p3``.

    ``lo`` must give a stable interior equilibrium and ``hi`` an unstable one.
    """
    def product(rho):
        return analysis.routh_hurwitz_interior(dataclasses.replace(p, rho=rho)).hurwitz_product

    f_lo, f_hi = product(lo), product(hi)
    if not (f_lo > 0 > f_hi):
        raise ValidationError("rho bracket does not straddle the stability boundary")
    while hi - lo > tol * max(1.0, abs(hi)):
        mid = 0.5 * (lo + hi)
        if product(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _refined_peaks(t, x):
    """Local maxima of a sampled signal, refined by a parabola through three samples."""
    idx = np.nonzero((x[1:-1] > x[:-2]) & (x[1:-1] >= x[2:]))[0] + 1
    times, values = [], []
    dt = t[1] - t[0]
    for i in idx:
        y0, y1, y2 = x[i - 1], x[i], x[i + 1]
        denom = y0 - 2 * y1 + y2
        shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
        times.append(t[i] + shift * dt)
        values.append(y1 - 0.25 * (y0 - y2) * shift)
    return np.array(times), np.array(values)


def detect_limit_cycle(
    p: FullParams,
    ic,
    settle: float,
    observe: float,
    *,
    grid_step: float = 0.01,
    cv_threshold: float = 0.01,
    cfg: IntegratorConfig | None = None,
) -> CycleReport:
    """Detect a periodic orbit from successive prey maxima after a transient.

    Raises
    ------
    HypothesisViolated
        When the interior equilibrium is missing or locally stable.
    NoCycleDetected
        When fewer than three prey maxima appear in the observation window.
    """
    rh = analysis.routh_hurwitz_interior(p)
    if rh.stable:
        raise HypothesisViolated("interior equilibrium is stable; no cycle expected")
    y0 = np.asarray(ic, dtype=float)
    if not (y0[0] > 0 and y0[1] + y0[2] > 0):
        raise ValidationError("initial state must be interior")
    settled = integrate(full_field(p), y0, 0.0, settle, None, cfg).final
    grid = uniform_grid(settle, settle + observe, grid_step)
    orbit = integrate(full_field(p), settled, settle, settle + observe, grid, cfg)
    N = orbit.states[:, 0]
    P = orbit.states[:, 1] + orbit.states[:, 2]
    peaks, _ = _refined_peaks(orbit.times, N)
    if len(peaks) < 3:
        raise NoCycleDetected(f"only {len(peaks)} prey maxima in {observe} years")
    spacing = np.diff(peaks)
    cv = float(np.std(spacing) / np.mean(spacing))
    found = cv < cv_threshold
    return CycleReport(
        found=found,
        period=float(np.mean(spacing)) if found else None,
        amplitude_N=float(N.max() - N.min()),
        amplitude_P=float(P.max() - P.min()),
        transient_discarded=float(settle),
        peak_times=peaks,
        orbit=orbit,
    )
