"""Coefficient functions: nonlocal diffusion ``a`` and the reaction/coupling source.

The step only ever needs ``alpha*w - f(w)``, so reactions expose that
combination as :meth:`source`. The u-equation adds it, the v-equation
subtracts it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import EvaluationError


def _check_finite_xi(xi: float) -> float:
    xi = float(xi)
    if not math.isfinite(xi):
        raise EvaluationError(f"diffusion argument is not finite: {xi!r}")
    return xi


@dataclass(frozen=True)
class DiffusionSpec:
    """Nonlocal diffusion ``a(xi) = 1/max(eps, |xi|) + m0``.

    With ``literal_form=True`` the coefficient is ``max(eps, 1/|xi|) + m0``
    instead, which is unbounded as ``xi -> 0``.

    ``m`` is the asserted lower bound of ``a``; it defaults to ``m0``.
    """

    epsilon: float = 1e-6
    m0: float = 1.0
    literal_form: bool = False
    m: float | None = None

    def __post_init__(self):
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ValueError(f"epsilon must be positive and finite, got {self.epsilon!r}")
        if not (self.m0 >= 0 and math.isfinite(self.m0)):
            raise ValueError(f"m0 must be nonnegative and finite, got {self.m0!r}")
        if self.m is None:
            object.__setattr__(self, "m", float(self.m0))
        if not (self.m > 0 and math.isfinite(self.m)):
            raise ValueError(f"lower bound m must be positive, got {self.m!r}")

    def __call__(self, xi: float) -> float:
        xi = _check_finite_xi(xi)
        if self.literal_form:
            with np.errstate(divide="ignore", over="ignore"):
                inv = np.float64(1.0) / np.float64(abs(xi))
            return float(max(self.epsilon, inv) + self.m0)
        return 1.0 / max(self.epsilon, abs(xi)) + self.m0

    @property
    def upper_bound(self) -> float:
        """Largest value the clamped form can take; infinite for the literal form."""
        return math.inf if self.literal_form else 1.0 / self.epsilon + self.m0


@dataclass(frozen=True)
class ConstantDiffusion:
    """``a(xi) = value`` for every ``xi``; the linear heat-equation case."""

    value: float = 1.0

    def __post_init__(self):
        if not (self.value > 0 and math.isfinite(self.value)):
            raise ValueError(f"constant diffusion must be positive, got {self.value!r}")

    def __call__(self, xi: float) -> float:
        _check_finite_xi(xi)
        return float(self.value)

    @property
    def m(self) -> float:
        return float(self.value)

    @property
    def upper_bound(self) -> float:
        return float(self.value)


def diffusion_coefficient(xi: float, spec) -> float:
    return spec(xi)


@dataclass(frozen=True)
class ReactionSpec:
    """Logistic reaction with ``f(w) - alpha*w = r*w*(kappa - w)``.

    Attributes
    ----------
    r : float
        Logistic rate, >= 0.
    kappa : float
        Carrying capacity, > 0.
    alpha : float
        Coupling parameter. It cancels out of the source term but enters the
        decay condition.
    M1 : float or None
        Asserted Lipschitz constant of ``f``. ``None`` means "estimate from
        the observed range of ``u - v`` after a run".
    """

    r: float = 1.0
    kappa: float = 10.0
    alpha: float = 0.0
    M1: float | None = None

    def __post_init__(self):
        if not (self.r >= 0 and math.isfinite(self.r)):
            raise ValueError(f"r must be nonnegative, got {self.r!r}")
        if not (self.kappa > 0 and math.isfinite(self.kappa)):
            raise ValueError(f"kappa must be positive, got {self.kappa!r}")
        if not (self.alpha >= 0 and math.isfinite(self.alpha)):
            raise ValueError(f"alpha must be nonnegative, got {self.alpha!r}")
        if self.M1 is not None and not (self.M1 >= 0 and math.isfinite(self.M1)):
            raise ValueError(f"M1 must be nonnegative, got {self.M1!r}")

    def f(self, w):
        return self.r * w * (self.kappa - w) + self.alpha * w

    def source(self, w):
        return -self.r * w * (self.kappa - w)


@dataclass(frozen=True)
class CustomReaction:
    """Arbitrary reaction ``f``; the source is ``alpha*w - f(w)``.

    ``f`` must accept numpy arrays.
    """

    fn: Callable
    alpha: float = 0.0
    M1: float | None = None

    def f(self, w):
        return self.fn(w)

    def source(self, w):
        return self.alpha * w - self.fn(w)


def no_reaction() -> CustomReaction:
    return CustomReaction(np.zeros_like, alpha=0.0, M1=0.0)


def coupling_source(w, spec):
    """``alpha*w - f(w)``; for the logistic reaction this is ``-r*w*(kappa - w)``."""
    return spec.source(w)


def lipschitz_estimate(fn: Callable[[float], float], lo: float, hi: float,
                       samples: int = 1001) -> float:
    """Largest difference quotient of ``fn`` over adjacent points of a uniform sample.

    This is a lower bound for the Lipschitz constant on ``[lo, hi]``.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if samples < 2:
        raise ValueError("need at least two samples")
    s = np.linspace(lo, hi, samples)
    values = np.array([fn(t) for t in s], dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise EvaluationError("function returned a non-finite value")
    return float(np.max(np.abs(np.diff(values)) / np.diff(s)))
