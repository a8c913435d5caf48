"""Equilibria, stability classification, dissipativity and Lyapunov machinery.

All closed forms here are for the base model (``l = m = 1``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import (
    AssumptionViolated,
    EmptyFeasibleInterval,
    NoInteriorEquilibrium,
    UnsupportedExponents,
    ValidationError,
)
from .model import FullParams, FullState, jacobian_full

__all__ = [
    "STABILITY_MARGIN",
    "AssumptionReport",
    "EquilibriumReport",
    "PredatorSubsystemData",
    "RouthHurwitz",
    "check_assumptions",
    "classify",
    "equilibria",
    "routh_hurwitz_interior",
    "predator_subsystem",
    "psi",
    "lyapunov_coefficients",
    "lyapunov_value",
    "dissipative_weight",
    "k_competitive_check",
    "k_competitive_pattern",
]

STABILITY_MARGIN = 1e-9


@dataclass(frozen=True)
class AssumptionReport:
    a21_holds: bool
    a22_holds: bool
    interior_exists: bool
    e2_stable: bool
    interior_stable: bool
    # The simplified coexistence-stability inequality in its published form.
    # It is not equivalent to the Routh-Hurwitz conditions and is reported
    # for reference only; ``interior_stable`` is authoritative.
    interior_stable_published: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


class RouthHurwitz(NamedTuple):
    p1: float
    p2: float
    p3: float
    stable: bool

    @property
    def hurwitz_product(self) -> float:
        return self.p1 * self.p2 - self.p3


@dataclass(frozen=True)
class EquilibriumReport:
    E1: FullState
    E2: FullState
    E_star: FullState | None
    eigenvalues_at: dict = field(default_factory=dict)
    classification_at: dict = field(default_factory=dict)

    def points(self) -> dict:
        pts = {"E1": self.E1, "E2": self.E2}
        if self.E_star is not None:
            pts["E_star"] = self.E_star
        return pts


@dataclass(frozen=True)
class PredatorSubsystemData:
    M: np.ndarray
    lambda_star: float
    left_vec: tuple[float, float]
    dissipativity_M: float


def _b_condition(p: FullParams) -> float:
    """Constant term of the E2 predator-block characteristic polynomial."""
    x = p.rho * p.kappa * p.N_hat
    return (p.mu_P + p.gamma - p.beta_P) * (p.mu_P + p.eta + x) - p.gamma * (x + p.beta_P)


def _existence_margin(p: FullParams) -> float:
    a = p.beta_P - p.mu_P
    lhs = (p.beta_N - p.mu_N) * a * p.kappa * p.rho + p.delta * a * (p.mu_P + p.eta)
    rhs = -p.delta * p.gamma * (a - p.eta)
    return lhs - rhs


def _rh_coefficients(p: FullParams) -> tuple[float, float, float]:
    a = p.beta_P - p.mu_P
    b = a - p.eta
    q = a - p.gamma
    kr = p.kappa * p.rho
    d, g, e = p.delta, p.gamma, p.eta
    r = p.beta_N - p.mu_N
    detM = q * (p.mu_P + e) + g * p.beta_P
    p1 = (-kr * q * a - g * (d + kr) * b - d * a * (p.mu_P + e)) / (kr * a)
    p2 = detM * (a * (d * (p.beta_P + e + g) + kr * r) - 2 * d * g * e) / (kr * a * a)
    p3 = detM * (-d * q * (p.mu_P + e) - g * d * p.beta_P - kr * a * r) / (kr * a)
    return p1, p2, p3


def check_assumptions(p: FullParams) -> AssumptionReport:
    a = p.beta_P - p.mu_P
    a21 = (p.beta_N - p.mu_N > 0) and (a > 0) and (a - p.eta < 0)
    a22 = (a - p.gamma) < -p.beta_P * p.gamma / (p.mu_P + p.eta)
    exists = _existence_margin(p) > 0
    e2_stable = _b_condition(p) > 0
    if exists and a21 and a22:
        p1, p2, p3 = _rh_coefficients(p)
        stable = p1 > 0 and p1 * p2 - p3 > 0 and p3 > 0
    else:
        stable = False
    published = a * (p.kappa * p.rho * (p.beta_N - p.mu_N) + p.delta * (p.eta + p.gamma)) < p.delta * (
        2 * p.gamma * p.eta - p.beta_P * a
    )
    return AssumptionReport(
        a21_holds=bool(a21),
        a22_holds=bool(a22),
        interior_exists=bool(exists),
        e2_stable=bool(e2_stable),
        interior_stable=bool(stable),
        interior_stable_published=bool(published and exists),
    )


def classify(eigenvalues, margin: float = STABILITY_MARGIN) -> str:
    """``'stable'``, ``'unstable'`` or ``'marginal'`` from the spectral abscissa."""
    top = float(np.max(np.real(eigenvalues)))
    if top > margin:
        return "unstable"
    if top < -margin:
        return "stable"
    return "marginal"


def _require_base(p: FullParams):
    if not p.base_exponents:
        raise UnsupportedExponents("closed forms need l = m = 1; solve numerically instead")


def _require_standing(p: FullParams, report: AssumptionReport | None = None):
    report = report or check_assumptions(p)
    if not (report.a21_holds and report.a22_holds):
        raise AssumptionViolated("standing assumptions on the predator rates do not hold")
    return report


def interior_equilibrium(p: FullParams) -> FullState:
    _require_base(p)
    if _existence_margin(p) <= 0:
        raise NoInteriorEquilibrium("coexistence equilibrium does not exist")
    a = p.beta_P - p.mu_P
    b = a - p.eta
    kr = p.kappa * p.rho
    N = (-a * (p.mu_P + p.eta) - p.gamma * b) / (a * kr)
    S = (p.delta * a * (p.mu_P + p.eta) + p.delta * p.gamma * b + (p.beta_N - p.mu_N) * a * kr) / (
        a * p.kappa * kr
    )
    H = -b / a * S
    return FullState(N, S, H)


def equilibria(p: FullParams, margin: float = STABILITY_MARGIN) -> EquilibriumReport:
    """Boundary and interior equilibria with their spectra.

    Raises
    ------
    UnsupportedExponents
        For ``l != 1`` or ``m != 1``.
    AssumptionViolated
        When the standing rate assumptions fail.
    """
    _require_base(p)
    report = _require_standing(p)
    pts = {"E1": FullState(0.0, 0.0, 0.0), "E2": FullState(p.N_hat, 0.0, 0.0)}
    if report.interior_exists:
        pts["E_star"] = interior_equilibrium(p)
    eigs = {k: np.linalg.eigvals(jacobian_full(p, v)) for k, v in pts.items()}
    return EquilibriumReport(
        E1=pts["E1"],
        E2=pts["E2"],
        E_star=pts.get("E_star"),
        eigenvalues_at=eigs,
        classification_at={k: classify(v, margin) for k, v in eigs.items()},
    )


def routh_hurwitz_interior(p: FullParams) -> RouthHurwitz:
    """Characteristic-polynomial coefficients at the interior equilibrium.

    ``lambda^3 + p1 lambda^2 + p2 lambda + p3``; stable iff ``p1 > 0``,
    ``p1 p2 - p3 > 0`` and ``p3 > 0``.
    """
    _require_base(p)
    if _existence_margin(p) <= 0:
        raise NoInteriorEquilibrium("coexistence equilibrium does not exist")
    p1, p2, p3 = _rh_coefficients(p)
    return RouthHurwitz(p1, p2, p3, bool(p1 > 0 and p1 * p2 - p3 > 0 and p3 > 0))


def psi(p: FullParams, lam: float) -> float:
    return ((p.mu_P + p.eta) - lam) / p.beta_P * (-(p.beta_P - p.mu_P - p.gamma) - lam) / p.gamma


def predator_subsystem(p: FullParams, N0: float | None = None, tol: float = 1e-12) -> PredatorSubsystemData:
    """Prey-free predator dynamics, its decay rate and the dissipativity bound.

    ``lambda_star`` is found by bisection of ``psi(lambda) = 1`` on
    ``(0, min(mu_P + eta, mu_P + gamma - beta_P))``, where ``psi`` decreases.
    The positive left eigenvector is normalized to ``P_S`` weight 1.  The
    dissipativity constant uses the prey bound ``max(N0, N_hat)``; ``N0``
    defaults to ``N_hat``.
    """
    M = np.array([
        [-(p.mu_P + p.eta), p.gamma],
        [p.beta_P, p.beta_P - p.mu_P - p.gamma],
    ])
    if not psi(p, 0.0) > 1:
        raise AssumptionViolated("prey-free predator extinction condition fails (psi(0) <= 1)")
    upper = min(p.mu_P + p.eta, -(p.beta_P - p.mu_P - p.gamma))
    if not upper > 0:
        raise AssumptionViolated("empty bracket for the predator decay rate")
    lo, hi = 0.0, upper
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if psi(p, mid) > 1.0:
            lo = mid
        else:
            hi = mid
    lam = 0.5 * (lo + hi)
    w_S = 1.0
    w_H = ((p.mu_P + p.eta) - lam) / p.beta_P
    n_star = p.N_hat if N0 is None else max(N0, p.N_hat)
    bound = p.rho * (w_H - w_S) * p.beta_N * n_star / min(p.mu_N, lam)
    return PredatorSubsystemData(M=M, lambda_star=lam, left_vec=(w_S, w_H), dissipativity_M=bound)


def dissipative_weight(p: FullParams, data: PredatorSubsystemData, states) -> np.ndarray:
    """Weighted sum ``rho (w_H - w_S) N + w_S P_S + w_H P_H`` bounding the attractor."""
    s = np.atleast_2d(np.asarray(states, dtype=float))
    w_S, w_H = data.left_vec
    return p.rho * (w_H - w_S) * s[:, 0] + w_S * s[:, 1] + w_H * s[:, 2]


def lyapunov_coefficients(p: FullParams) -> tuple[float, float]:
    """Weights ``(c1, c2)`` of the predator-extinction Lyapunov function.

    With ``c2 = c1 + 1/rho`` the descent inequalities reduce to
    ``lower < c1 < upper``; the midpoint is returned.
    """
    a = p.beta_P - p.mu_P
    x = p.kappa * p.N_hat
    lower = (x + p.beta_P / p.rho) / (p.mu_P + p.eta - p.beta_P)
    upper = (p.mu_P + p.gamma - p.beta_P) / (p.rho * a)
    if not (a > 0 and p.mu_P + p.eta - p.beta_P > 0 and lower < upper and _b_condition(p) > 0):
        raise EmptyFeasibleInterval(
            f"no Lyapunov weights: need {lower:.6g} < c1 < {upper:.6g} and E2 stable"
        )
    c1 = 0.5 * (lower + upper)
    return c1, c1 + 1.0 / p.rho


def lyapunov_inequalities(p: FullParams, c1: float, c2: float) -> tuple[float, float]:
    """Coefficients of ``P_S`` and ``P_H`` in the Lyapunov derivative (both must be < 0)."""
    x = p.rho * p.kappa * p.N_hat
    first = -c1 * (p.mu_P + p.eta) - c1 * x + c2 * x + c2 * p.beta_P
    second = -c2 * p.mu_P + c1 * p.gamma - c2 * p.gamma + c2 * p.beta_P
    return first, second


def lyapunov_value(p: FullParams, c1: float, c2: float, s) -> np.ndarray | float:
    """``(N - N_hat) - N_hat ln(N/N_hat) + c1 P_S + c2 P_H``; vectorized over rows of ``s``."""
    arr = np.asarray(s, dtype=float)
    N = arr[..., 0]
    if np.any(N <= 0):
        raise ValidationError("Lyapunov function diverges at N = 0")
    n_hat = p.N_hat
    x = (N - n_hat) / n_hat
    value = n_hat * (x - np.log1p(x)) + c1 * arr[..., 1] + c2 * arr[..., 2]
    return float(value) if np.ndim(value) == 0 else value


def k_competitive_pattern(J: np.ndarray) -> bool:
    return bool(
        J[0, 1] <= 0 and J[0, 2] == 0 and J[1, 0] <= 0 and J[1, 2] >= 0 and J[2, 0] >= 0 and J[2, 1] >= 0
    )


def k_competitive_check(p: FullParams, samples: int = 1000, seed: int = 0) -> bool:
    """Check the off-diagonal Jacobian sign pattern on random positive states.

    States are drawn log-uniformly over six decades around the prey carrying
    capacity.
    """
    _require_base(p)
    rng = np.random.default_rng(seed)
    scale = p.N_hat
    states = scale * 10.0 ** rng.uniform(-3, 3, size=(samples, 3))
    return all(k_competitive_pattern(jacobian_full(p, s)) for s in states)
