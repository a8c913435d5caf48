"""Predator-prey dynamics with searching and handling predators.

Modules
-------
model        parameter records and vector fields
analysis     equilibria, stability, dissipativity and Lyapunov weights
integrator   adaptive Dormand-Prince integration with dense output
experiments  singular-limit, extinction, persistence and limit-cycle studies
fitting      least-squares fit of the reduced model to the hare-lynx record
cli          ``holling-dyn`` command-line entry point
"""
from .errors import HollingError, IntegrationError, ValidationError
from .integrator import IntegratorConfig, Trajectory, integrate
from .model import FullParams, FullState, ReducedParams, ReducedState

__version__ = "0.1.0"

__all__ = [
    "FullParams",
    "FullState",
    "ReducedParams",
    "ReducedState",
    "IntegratorConfig",
    "Trajectory",
    "integrate",
    "HollingError",
    "IntegrationError",
    "ValidationError",
]
