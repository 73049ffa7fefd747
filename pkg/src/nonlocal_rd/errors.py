"""Exception hierarchy for the solver."""

from __future__ import annotations


class NonlocalRDError(Exception):
    """Base class for all solver errors."""


class InvalidGridError(NonlocalRDError, ValueError):
    pass


class SamplingError(NonlocalRDError, ValueError):
    pass


class EvaluationError(NonlocalRDError, ValueError):
    pass


class SingularSystemError(NonlocalRDError, ArithmeticError):
    """Raised when forward elimination meets a zero or subnormal pivot."""

    def __init__(self, pivot_index: int, pivot: float):
        self.pivot_index = pivot_index
        self.pivot = pivot
        super().__init__(f"singular pivot {pivot!r} at row {pivot_index}")


class BlowUpError(NonlocalRDError, ArithmeticError):
    pass


class ModelAssumptionError(NonlocalRDError):
    """A coefficient fell below its asserted lower bound during a run."""


class StabilityError(NonlocalRDError, ValueError):
    """Explicit step size exceeds the diffusive stability limit."""


class FitDomainError(NonlocalRDError, ValueError):
    pass


class SimulationError(NonlocalRDError):
    """Wraps a failure inside ``simulate`` with the step where it happened."""

    def __init__(self, step: int, t: float, cause: Exception):
        self.step = step
        self.t = t
        self.cause = cause
        super().__init__(f"step {step} (t={t:.6g}) failed: {cause}")


class ConfigError(NonlocalRDError, ValueError):
    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.reason = message
        self.field = field
        self.line = line
        prefix = ""
        if line is not None:
            prefix += f"line {line}: "
        if field is not None:
            prefix += f"{field}: "
        super().__init__(prefix + message)
