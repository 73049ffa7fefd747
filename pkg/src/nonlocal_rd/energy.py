"""Energy functional, exponential-decay condition and decay-rate fitting."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import FitDomainError
from .grid import nonlocal_form
from .stepper import FieldPair


def energy(state: FieldPair) -> float:
    """``E = 1/2 * sum_{j=1}^{J} dx * (u_j^2 + v_j^2)``."""
    u = state.u.values[1:]
    v = state.v.values[1:]
    return float(0.5 * state.grid.dx * (np.sum(u * u) + np.sum(v * v)))


def poincare_constant() -> float:
    """Optimal ``c_p`` in ``int u^2 <= c_p int u'^2`` on (0, 1) with zero ends."""
    return 1.0 / math.pi**2


def decay_threshold(M1: float, alpha: float, c_p: float) -> float:
    return 2.0 * c_p * (M1 + alpha)


def decay_condition(m: float, M1: float, alpha: float, c_p: float) -> bool:
    """True when ``m > 2 c_p (M1 + alpha)``.

    With ``M1 + alpha == 0`` this reduces to ``m > 0`` (pure dissipation).
    """
    if c_p <= 0:
        raise ValueError(f"c_p must be positive, got {c_p!r}")
    return bool(m > 0 and m > decay_threshold(M1, alpha, c_p))


def predicted_rate(m: float, M1: float, alpha: float, c_p: float) -> float | None:
    """Rate ``2m/c_p - 4(M1 + alpha)`` from the energy estimate, or None if not positive.

    Indicative only; the constants in the estimate are not sharp.
    """
    eta = 2.0 * m / c_p - 4.0 * (M1 + alpha)
    return eta if eta > 0 else None


@dataclass
class EnergyTrace:
    """Time series of the energy plus per-sample diagnostics."""

    times: list = field(default_factory=list)
    energies: list = field(default_factory=list)
    l_u: list = field(default_factory=list)
    l_v: list = field(default_factory=list)
    max_abs_u: list = field(default_factory=list)
    max_abs_v: list = field(default_factory=list)

    def append(self, state: FieldPair) -> None:
        if self.times and not state.t > self.times[-1]:
            raise ValueError("trace times must be strictly increasing")
        self.times.append(float(state.t))
        self.energies.append(energy(state))
        self.l_u.append(nonlocal_form(state.u))
        self.l_v.append(nonlocal_form(state.v))
        self.max_abs_u.append(float(np.max(np.abs(state.u.values))))
        self.max_abs_v.append(float(np.max(np.abs(state.v.values))))

    def __len__(self) -> int:
        return len(self.times)

    def rows(self):
        return zip(self.times, self.energies, self.l_u, self.l_v,
                   self.max_abs_u, self.max_abs_v)


class EnergyRecorder:
    """Observer that appends to an :class:`EnergyTrace` every ``every`` steps.

    The final step of a run is not guaranteed to be recorded unless ``every``
    divides ``K``.
    """

    def __init__(self, every: int = 1):
        self.every = every
        self.trace = EnergyTrace()

    def __call__(self, k, state, report):
        if k % self.every == 0:
            self.trace.append(state)


@dataclass(frozen=True)
class DecayFit:
    C: float
    eta: float
    rmse: float


def default_window(n: int) -> slice:
    """Last half of the samples."""
    return slice(n // 2, n)


def fit_decay_rate(trace: EnergyTrace, window: slice | None = None) -> DecayFit:
    """Least-squares fit of ``log E_k = log(C E_0) - eta t_k`` over ``window``.

    Raises
    ------
    FitDomainError
        If the window has fewer than two samples or a nonpositive energy.
    """
    t = np.asarray(trace.times, dtype=np.float64)
    E = np.asarray(trace.energies, dtype=np.float64)
    if window is None:
        window = default_window(len(t))
    tw, Ew = t[window], E[window]
    if tw.size < 2:
        raise FitDomainError(f"fit window has {tw.size} samples, need at least 2")
    if np.any(Ew <= 0):
        first = int(np.flatnonzero(Ew <= 0)[0])
        raise FitDomainError(
            f"nonpositive energy {float(Ew[first])!r} at t={float(tw[first])!r}; shrink the window"
        )
    if not E[0] > 0:
        raise FitDomainError("initial energy must be positive to normalise C")
    y = np.log(Ew)
    A = np.column_stack([np.ones_like(tw), tw])
    (intercept, slope), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (intercept + slope * tw)
    with np.errstate(over="ignore"):
        C = float(np.exp(intercept) / E[0])
    return DecayFit(C=C, eta=float(-slope),
                    rmse=float(np.sqrt(np.mean(resid**2))))
