"""Random parameter draws satisfying the standing assumptions.

Used by the property and acceptance suites and by the baseline script, so
the draws are deterministic for a given generator state.
"""
from __future__ import annotations

import numpy as np

from . import analysis
from .model import FullParams

REGIMES = ("any", "interior", "extinction")


def _log_uniform(rng, lo, hi):
    return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))


def draw_standing(rng: np.random.Generator) -> FullParams:
    """One parameter set with positive rates, beta_N > mu_N, 0 < beta_P - mu_P < eta,
    and gamma large enough that predators die out without prey."""
    mu_N = rng.uniform(0.2, 2.0)
    beta_N = mu_N + rng.uniform(0.2, 2.0)
    mu_P = rng.uniform(0.1, 2.0)
    a = rng.uniform(0.1, 2.0)
    beta_P = mu_P + a
    eta = a + rng.uniform(0.1, 5.0)
    gamma_min = a * (mu_P + eta) / (mu_P + eta - beta_P)
    return FullParams(
        beta_N=beta_N,
        mu_N=mu_N,
        delta=_log_uniform(rng, 1e-3, 1e-1),
        kappa=_log_uniform(rng, 1e-2, 1.0),
        rho=_log_uniform(rng, 0.1, 5.0),
        gamma=gamma_min * rng.uniform(1.1, 5.0),
        mu_P=mu_P,
        eta=eta,
        beta_P=beta_P,
    )


def e2_decay_rate(p: FullParams) -> float:
    """Negated spectral abscissa at the prey-only equilibrium."""
    eq = analysis.equilibria(p)
    return -float(np.max(np.real(eq.eigenvalues_at["E2"])))


def draw(
    rng: np.random.Generator,
    regime: str = "any",
    *,
    min_decay: float = 0.0,
    min_prey_ratio: float = 0.0,
    max_tries: int = 100_000,
) -> FullParams:
    """Rejection-sample a parameter set in the requested regime.

    ``interior``: coexistence equilibrium exists with ``N* >= min_prey_ratio * N_hat``
    (small ratios give relaxation cycles that graze zero).  ``extinction``:
    E2 is stable with decay rate at least ``min_decay``.
    """
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}")
    for _ in range(max_tries):
        p = draw_standing(rng)
        report = analysis.check_assumptions(p)
        assert report.a21_holds and report.a22_holds
        if regime == "interior" and not (
            report.interior_exists and analysis.interior_equilibrium(p).N >= min_prey_ratio * p.N_hat
        ):
            continue
        if regime == "extinction" and not (report.e2_stable and e2_decay_rate(p) >= min_decay):
            continue
        return p
    raise RuntimeError(f"no draw in regime {regime!r} after {max_tries} tries")
