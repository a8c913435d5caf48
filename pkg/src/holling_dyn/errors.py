"""Exception hierarchy shared by every module of the package."""


class HollingError(Exception):
    """Base class for all package errors."""


class ValidationError(HollingError, ValueError):
    """Bad input: parameters, states or configuration out of their domain."""


class AssumptionViolated(ValidationError):
    """A standing assumption on the parameters does not hold."""


class HypothesisViolated(ValidationError):
    """The hypothesis of an experiment (e.g. stability of E2) is not satisfied."""


class UnsupportedExponents(ValidationError):
    """Closed forms exist only for the base model with l = m = 1."""


class NoInteriorEquilibrium(ValidationError):
    """The coexistence equilibrium does not exist for these parameters."""


class EmptyFeasibleInterval(ValidationError):
    """No Lyapunov coefficients satisfy the descent inequalities."""


class DatasetError(ValidationError):
    """Dataset file could not be parsed or violates its invariants."""

    def __init__(self, message, row=None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class IntegrationError(HollingError, RuntimeError):
    """Numerical failure inside the ODE integrator."""


class StepUnderflow(IntegrationError):
    pass


class BudgetExhausted(IntegrationError):
    pass


class NonFiniteDerivative(IntegrationError):
    pass


class NoCycleDetected(HollingError, RuntimeError):
    """Peak analysis found no periodic structure in the observation window."""
