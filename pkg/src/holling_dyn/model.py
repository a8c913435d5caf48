"""Parameter records and vector fields of the handling/searching predator-prey model.

Four related systems are exposed:

* the full three-compartment model (prey ``N``, searching predators ``P_S``,
  handling predators ``P_H``), optionally with consumption exponent ``l`` and
  transition exponent ``m``;
* the scaled (fast handling) system, i.e. the full model with
  ``rho = chi/epsilon`` and ``gamma = 1/epsilon``, written with carrying
  capacity ``K``;
* the reduced Rosenzweig-MacArthur model in ``(N, P)`` obtained as
  ``epsilon -> 0``.

Every ``*_field`` factory returns a plain ``f(t, y) -> ndarray`` closure that the
integrator can call without attribute lookups on the hot path.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import NamedTuple

import numpy as np

from .errors import ValidationError

__all__ = [
    "FullParams",
    "FullState",
    "ReducedParams",
    "ReducedState",
    "rhs_full",
    "rhs_reduced",
    "rhs_scaled",
    "jacobian_full",
    "epsilon_embed",
    "convert_logistic",
    "embed_reduced",
    "full_field",
    "reduced_field",
    "scaled_field",
]


class FullState(NamedTuple):
    N: float
    P_S: float
    P_H: float


class ReducedState(NamedTuple):
    N: float
    P: float


def _check_positive(obj, names):
    for name in names:
        value = getattr(obj, name)
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise ValidationError(f"{name} must be a finite positive number, got {value!r}")


def _check_exponents(obj):
    for name in ("l", "m"):
        value = getattr(obj, name)
        if not (math.isfinite(value) and value >= 1):
            raise ValidationError(f"exponent {name} must be >= 1, got {value!r}")


@dataclass(frozen=True)
class FullParams:
    """Rate constants of the three-compartment model.

    ``delta`` is the quadratic crowding coefficient of the prey logistic term;
    use :func:`convert_logistic` to obtain it from a carrying capacity.
    """

    beta_N: float
    mu_N: float
    delta: float
    kappa: float
    rho: float
    gamma: float
    mu_P: float
    eta: float
    beta_P: float
    l: float = 1.0
    m: float = 1.0

    RATES = ("beta_N", "mu_N", "delta", "kappa", "rho", "gamma", "mu_P", "eta", "beta_P")

    def __post_init__(self):
        _check_positive(self, self.RATES)
        _check_exponents(self)

    @property
    def N_hat(self) -> float:
        """Prey carrying capacity (beta_N - mu_N)/delta."""
        return (self.beta_N - self.mu_N) / self.delta

    @property
    def base_exponents(self) -> bool:
        return self.l == 1 and self.m == 1

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ReducedParams:
    """Constants of the reduced (Rosenzweig-MacArthur form) model.

    The prey logistic term is parameterized by the carrying capacity ``K``;
    ``chi`` is the handling-time factor of the Holling type II response
    ``kappa N / (1 + chi kappa N)``.
    """

    beta_N: float
    mu_N: float
    K: float
    kappa: float
    chi: float
    beta_P: float
    mu_P: float
    eta: float
    l: float = 1.0
    m: float = 1.0

    RATES = ("beta_N", "mu_N", "K", "kappa", "chi", "beta_P", "mu_P", "eta")

    def __post_init__(self):
        _check_positive(self, self.RATES)
        _check_exponents(self)
        if not self.beta_N > self.mu_N:
            raise ValidationError("reduced model requires beta_N > mu_N")
        if not self.beta_P > self.mu_P:
            raise ValidationError("reduced model requires beta_P > mu_P")
        if not self.beta_P - self.mu_P - self.eta < 0:
            raise ValidationError("reduced model requires beta_P - mu_P - eta < 0")

    def to_dict(self) -> dict:
        return asdict(self)


def param_names(cls) -> tuple[str, ...]:
    return tuple(f.name for f in fields(cls))


def convert_logistic(beta_N: float, mu_N: float, K: float) -> float:
    """Quadratic coefficient delta with (beta_N-mu_N)N - delta N^2 = (beta_N-mu_N)N(1-N/K)."""
    if not beta_N > mu_N:
        raise ValidationError("intrinsic growth beta_N - mu_N must be positive")
    if not K > 0:
        raise ValidationError("carrying capacity must be positive")
    return (beta_N - mu_N) / K


def epsilon_embed(chi: float, epsilon: float) -> tuple[float, float]:
    """Return ``(rho, gamma) = (chi/epsilon, 1/epsilon)``."""
    if not (chi > 0 and epsilon > 0):
        raise ValidationError("chi and epsilon must be positive")
    return chi / epsilon, 1.0 / epsilon


def embed_reduced(p: ReducedParams, epsilon: float) -> FullParams:
    """Full-model parameters of the scaled system for a given time-scale ratio."""
    rho, gamma = epsilon_embed(p.chi, epsilon)
    return FullParams(
        beta_N=p.beta_N,
        mu_N=p.mu_N,
        delta=convert_logistic(p.beta_N, p.mu_N, p.K),
        kappa=p.kappa,
        rho=rho,
        gamma=gamma,
        mu_P=p.mu_P,
        eta=p.eta,
        beta_P=p.beta_P,
        l=p.l,
        m=p.m,
    )


def _power(x, e):
    if e == 1:
        return x
    return x**e if x > 0 else 0.0


def full_field(p: FullParams):
    r = p.beta_N - p.mu_N
    delta, kappa, gamma, beta_P = p.delta, p.kappa, p.gamma, p.beta_P
    rk = p.rho * p.kappa
    loss_S = p.mu_P + p.eta
    mu_P = p.mu_P
    l, m = p.l, p.m

    if l == 1 and m == 1:
        def f(t, y):
            N, S, H = y[0], y[1], y[2]
            flux = rk * N * S
            return np.array((
                r * N - delta * N * N - kappa * N * S,
                -loss_S * S - flux + gamma * H,
                -mu_P * H + flux - gamma * H + beta_P * (S + H),
            ))
    else:
        def f(t, y):
            N, S, H = y[0], y[1], y[2]
            flux = rk * _power(N, m) * S
            return np.array((
                r * N - delta * N * N - kappa * _power(N, l) * S,
                -loss_S * S - flux + gamma * H,
                -mu_P * H + flux - gamma * H + beta_P * (S + H),
            ))
    return f


def reduced_field(p: ReducedParams):
    r, K, kappa, chi_kappa = p.beta_N - p.mu_N, p.K, p.kappa, p.chi * p.kappa
    growth_S = p.beta_P - p.mu_P - p.eta
    eta = p.eta
    l, m = p.l, p.m

    def f(t, y):
        N, P = y[0], y[1]
        h = chi_kappa * _power(N, m)
        denom = 1.0 + h
        return np.array((
            r * N * (1.0 - N / K) - kappa * _power(N, l) * P / denom,
            growth_S * P + eta * h * P / denom,
        ))
    return f


def scaled_field(p: ReducedParams, epsilon: float):
    """Scaled system with explicit 1/epsilon factors, prey in carrying-capacity form."""
    if not epsilon > 0:
        raise ValidationError("epsilon must be positive")
    r, K, kappa, chi = p.beta_N - p.mu_N, p.K, p.kappa, p.chi
    inv_eps = 1.0 / epsilon
    loss_S = p.mu_P + p.eta
    mu_P, beta_P = p.mu_P, p.beta_P
    l, m = p.l, p.m

    def f(t, y):
        N, S, H = y[0], y[1], y[2]
        flux = chi * inv_eps * kappa * _power(N, m) * S
        return np.array((
            r * N * (1.0 - N / K) - kappa * _power(N, l) * S,
            -loss_S * S - flux + inv_eps * H,
            -mu_P * H + flux - inv_eps * H + beta_P * (S + H),
        ))
    return f


def _as_state(s, n):
    y = np.asarray(s, dtype=float)
    if y.shape != (n,):
        raise ValidationError(f"expected a state with {n} components, got shape {y.shape}")
    return y


def rhs_full(p: FullParams, s) -> np.ndarray:
    """Time derivative ``(N', P_S', P_H')`` of the full model at state ``s``."""
    return full_field(p)(0.0, _as_state(s, 3))


def rhs_reduced(p: ReducedParams, s) -> np.ndarray:
    """Time derivative ``(N', P')`` of the reduced model at state ``s``."""
    return reduced_field(p)(0.0, _as_state(s, 2))


def rhs_scaled(p: ReducedParams, epsilon: float, s) -> np.ndarray:
    return scaled_field(p, epsilon)(0.0, _as_state(s, 3))


def jacobian_full(p: FullParams, s) -> np.ndarray:
    """Analytic 3x3 Jacobian of :func:`rhs_full`.

    Rows are (N', P_S', P_H'), columns are derivatives with respect to
    (N, P_S, P_H).
    """
    N, S, H = _as_state(s, 3)
    l, m = p.l, p.m
    Nl = _power(N, l)
    Nm = _power(N, m)
    dNl = 1.0 if l == 1 else (l * N ** (l - 1) if N > 0 else 0.0)
    dNm = 1.0 if m == 1 else (m * N ** (m - 1) if N > 0 else 0.0)
    rk = p.rho * p.kappa
    return np.array([
        [p.beta_N - p.mu_N - 2.0 * p.delta * N - p.kappa * dNl * S, -p.kappa * Nl, 0.0],
        [-rk * dNm * S, -(p.mu_P + p.eta) - rk * Nm, p.gamma],
        [rk * dNm * S, rk * Nm + p.beta_P, p.beta_P - p.mu_P - p.gamma],
    ])
