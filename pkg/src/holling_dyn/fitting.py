"""Least-squares fit of the reduced model to the hare-lynx record."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .data import FIXED_DEFAULTS, FREE_DEFAULTS, HUDSON_BAY, TABLE2, THOUSAND
from .errors import DatasetError, HollingError, ValidationError
from .integrator import IntegratorConfig, integrate
from .model import ReducedParams, param_names, reduced_field
from .optimize import nelder_mead

__all__ = [
    "Dataset",
    "FitConfig",
    "FitResult",
    "load_dataset",
    "table2_params",
    "simulate_at_years",
    "objective_sse",
    "constant_mean_sse",
    "default_fit_config",
    "fit",
]

CSV_HEADER = ("year", "hares_thousands", "lynx_thousands")
REDUCED_FIELDS = param_names(ReducedParams)


@dataclass(frozen=True)
class Dataset:
    """Yearly prey and predator counts, in individuals."""

    years: np.ndarray
    hares: np.ndarray
    lynx: np.ndarray

    def __post_init__(self):
        if not (len(self.years) == len(self.hares) == len(self.lynx)):
            raise DatasetError("years, hares and lynx must have equal lengths")
        if len(self.years) < 2:
            raise DatasetError("dataset needs at least two rows")
        if np.any(np.diff(self.years) <= 0):
            raise DatasetError("years must be strictly increasing")
        if np.any(self.hares <= 0) or np.any(self.lynx <= 0):
            raise DatasetError("counts must be positive")

    def __len__(self):
        return len(self.years)

    @property
    def initial(self) -> tuple[float, float]:
        return float(self.hares[0]), float(self.lynx[0])

    def scaled(self, factor: float) -> "Dataset":
        return Dataset(self.years, self.hares * factor, self.lynx * factor)


def _from_rows(rows) -> Dataset:
    years, hares, lynx = zip(*rows)
    return Dataset(
        np.array(years, dtype=int),
        np.array(hares, dtype=float) * THOUSAND,
        np.array(lynx, dtype=float) * THOUSAND,
    )


def load_dataset(source="embedded") -> Dataset:
    """Load the embedded record or a CSV file with header ``year,hares_thousands,lynx_thousands``."""
    if source is None or source == "embedded":
        return _from_rows(HUDSON_BAY)
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc
    reader = csv.reader(text.splitlines())
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != CSV_HEADER:
        raise DatasetError(f"header must be {','.join(CSV_HEADER)}", row=1)
    rows = []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise DatasetError(f"expected 3 fields, got {len(row)}", row=lineno)
        try:
            year = int(row[0])
            h, l = float(row[1]), float(row[2])
        except ValueError as exc:
            raise DatasetError(f"cannot parse {row!r}", row=lineno) from exc
        if not (math.isfinite(h) and math.isfinite(l)) or h <= 0 or l <= 0:
            raise DatasetError("counts must be finite and positive", row=lineno)
        if rows and year <= rows[-1][0]:
            raise DatasetError(f"year {year} does not increase", row=lineno)
        rows.append((year, h, l))
    if len(rows) < 2:
        raise DatasetError("dataset needs at least two rows")
    return _from_rows(rows)


def table2_params(**overrides) -> ReducedParams:
    return ReducedParams(**{**TABLE2, **overrides})


def simulate_at_years(p: ReducedParams, d: Dataset, cfg: IntegratorConfig | None = None) -> np.ndarray:
    """Reduced-model states ``(N, P)`` at the data years, started from the first row."""
    t = (d.years - d.years[0]).astype(float)
    traj = integrate(reduced_field(p), d.initial, 0.0, t[-1], t, cfg)
    return traj.states


def objective_sse(p: ReducedParams, d: Dataset, cfg: IntegratorConfig | None = None) -> float:
    """Sum of squared residuals of both series, equally weighted, in individuals squared.

    Integration failures give ``inf``.
    """
    try:
        sim = simulate_at_years(p, d, cfg)
    except HollingError:
        return math.inf
    sse = float(np.sum((sim[:, 0] - d.hares) ** 2) + np.sum((sim[:, 1] - d.lynx) ** 2))
    return sse if math.isfinite(sse) else math.inf


def constant_mean_sse(d: Dataset) -> float:
    return float(np.sum((d.hares - d.hares.mean()) ** 2) + np.sum((d.lynx - d.lynx.mean()) ** 2))


@dataclass(frozen=True)
class FitConfig:
    """Which reduced-model parameters are estimated and how.

    ``bounds`` maps each free parameter to a positive ``(low, high)`` interval;
    the search runs on log-parameters.  ``tolerance`` is the log-space
    simplex diameter at which the search stops.
    """

    free_params: tuple[str, ...]
    fixed_values: dict
    initial_guess: dict
    bounds: dict
    max_iters: int = 3000
    tolerance: float = 1e-4
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)

    def __post_init__(self):
        free = tuple(self.free_params)
        object.__setattr__(self, "free_params", free)
        if len(set(free)) != len(free):
            raise ValidationError("free parameters listed twice")
        names = set(free) | set(self.fixed_values)
        required = set(REDUCED_FIELDS) - {"l", "m"}
        if set(free) & set(self.fixed_values):
            raise ValidationError(f"parameters both free and fixed: {sorted(set(free) & set(self.fixed_values))}")
        unknown = names - set(REDUCED_FIELDS)
        if unknown:
            raise ValidationError(f"unknown parameters: {sorted(unknown)}")
        missing = required - names
        if missing:
            raise ValidationError(f"parameters neither free nor fixed: {sorted(missing)}")
        for name in free:
            if name not in self.initial_guess:
                raise ValidationError(f"no initial guess for {name}")
            if name not in self.bounds:
                raise ValidationError(f"no bounds for {name}")
            lo, hi = self.bounds[name]
            if not 0 < lo < hi:
                raise ValidationError(f"bounds for {name} must satisfy 0 < low < high")
            if not lo <= self.initial_guess[name] <= hi:
                raise ValidationError(f"initial guess for {name} outside its bounds")
        if self.max_iters < 0 or not self.tolerance > 0:
            raise ValidationError("max_iters must be >= 0 and tolerance > 0")

    def assemble(self, free_values) -> ReducedParams:
        values = dict(self.fixed_values)
        values.update(zip(self.free_params, (float(v) for v in free_values)))
        return ReducedParams(**values)


@dataclass(frozen=True)
class FitResult:
    params: ReducedParams
    sse: float
    iterations: int
    converged: bool
    evaluations: int = 0
    history: tuple = ()

    def to_dict(self) -> dict:
        out = {
            "params": self.params.to_dict(),
            "sse": self.sse,
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "converged": self.converged,
        }
        if not self.converged:
            out["warning"] = "iteration budget exhausted before the simplex converged"
        return out


def default_fit_config(initial_guess=None, **kwargs) -> FitConfig:
    """Start at the reference fit with mu_N and mu_P fixed, the rest free, bounds x/10 .. 10x."""
    guess = {k: TABLE2[k] for k in FREE_DEFAULTS}
    if initial_guess:
        guess.update(initial_guess)
    bounds = {k: (TABLE2[k] / 10.0, TABLE2[k] * 10.0) for k in FREE_DEFAULTS}
    return FitConfig(
        free_params=FREE_DEFAULTS,
        fixed_values=dict(FIXED_DEFAULTS),
        initial_guess=guess,
        bounds=bounds,
        **kwargs,
    )


def fit(config: FitConfig, d: Dataset) -> FitResult:
    """Nelder-Mead least squares over the free parameters in log space.

    Parameter vectors violating the reduced-model invariants score ``inf``.
    """
    names = config.free_params
    x0 = np.log([config.initial_guess[k] for k in names])
    lower = np.log([config.bounds[k][0] for k in names])
    upper = np.log([config.bounds[k][1] for k in names])

    def objective(x):
        try:
            p = config.assemble(np.exp(x))
        except ValidationError:
            return math.inf
        return objective_sse(p, d, config.integrator)

    res = nelder_mead(
        objective, x0, step=0.1, lower=lower, upper=upper,
        tol=config.tolerance, max_iters=config.max_iters,
    )
    params = config.assemble(np.exp(res.x)) if names else config.assemble([])
    return FitResult(
        params=params,
        sse=res.fun,
        iterations=res.iterations,
        converged=res.converged,
        evaluations=res.evaluations,
        history=tuple(res.history),
    )
