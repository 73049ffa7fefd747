"""Implicit finite-difference time stepping for the coupled nonlocal system.

Each step solves, for the interior nodes i = 1..J-1,

    (u'_i - u_i)/dt - a(l(u)) (u'_{i+1} - 2u'_i + u'_{i-1})/dx^2 = s(u_i - v_i)
    (v'_i - v_i)/dt - a(l(v)) (v'_{i+1} - 2v'_i + v'_{i-1})/dx^2 = -s(u_i - v_i)

with ``s(w) = alpha*w - f(w)``. The nonlocal coefficient and the source are
lagged at the old time level, so each field needs one tridiagonal solve, and
both systems are built from the same old snapshot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

import numpy as np

from .errors import BlowUpError, ModelAssumptionError, SimulationError
from .grid import Field, Grid1D, nonlocal_form
from .model import DiffusionSpec, ReactionSpec, coupling_source
from .tridiag import ThomasWorkspace, TridiagonalSystem, margin_and_residual


@dataclass(frozen=True)
class FieldPair:
    u: Field
    v: Field
    t: float = 0.0

    def __post_init__(self):
        if self.u.grid != self.v.grid:
            raise ValueError("u and v must live on the same grid")
        if not self.t >= 0:
            raise ValueError(f"time must be nonnegative, got {self.t!r}")

    @property
    def grid(self) -> Grid1D:
        return self.u.grid

    def swapped(self) -> "FieldPair":
        return FieldPair(self.v, self.u, self.t)


@dataclass(frozen=True)
class SchemeConfig:
    T: float
    K: int
    grid: Grid1D
    diffusion: object = field(default_factory=DiffusionSpec)
    reaction: object = field(default_factory=ReactionSpec)
    check_lower_bound: bool = True

    def __post_init__(self):
        if not (self.T > 0 and math.isfinite(self.T)):
            raise ValueError(f"T must be positive, got {self.T!r}")
        if isinstance(self.K, bool) or int(self.K) != self.K or self.K < 0:
            raise ValueError(f"K must be a nonnegative integer, got {self.K!r}")

    @property
    def dt(self) -> float:
        # K = 0 is an empty run; dt is never used then
        return self.T / self.K if self.K else self.T


@dataclass(frozen=True)
class StepReport:
    a_u: float
    a_v: float
    margin_u: float
    margin_v: float
    residual_u: float
    residual_v: float


def lagged_coefficient(field_now: Field, cfg: SchemeConfig) -> float:
    """Diffusion coefficient ``a(l(field))`` evaluated at the old time level."""
    a = cfg.diffusion(nonlocal_form(field_now))
    if cfg.check_lower_bound and math.isfinite(a) and a < cfg.diffusion.m:
        raise ModelAssumptionError(
            f"diffusion coefficient {a!r} fell below the asserted bound m={cfg.diffusion.m!r}"
        )
    return a


def assemble(field_now: Field, other_now: Field, sign: int, cfg: SchemeConfig,
             a: float | None = None) -> TridiagonalSystem:
    """Build the interior tridiagonal system for one field.

    ``sign=+1`` assembles the u-equation (``field_now=u, other_now=v``) and
    ``sign=-1`` the v-equation (``field_now=v, other_now=u``). In both cases
    the source is evaluated at ``w = u - v``.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    grid = cfg.grid
    if a is None:
        a = lagged_coefficient(field_now, cfg)
    mu = a * cfg.dt / grid.dx**2
    if not math.isfinite(mu):
        raise BlowUpError(
            f"non-finite mu={mu!r} from diffusion coefficient a={a!r} "
            f"(l={nonlocal_form(field_now)!r})"
        )
    n = grid.n_interior
    w = sign * (field_now.interior - other_now.interior)
    rhs = field_now.interior + cfg.dt * sign * coupling_source(w, cfg.reaction)
    if not np.all(np.isfinite(rhs)):
        raise BlowUpError("non-finite right-hand side (reaction term overflowed)")
    off = np.full(n - 1, -mu)
    return TridiagonalSystem.trusted(off, np.full(n, 1.0 + 2.0 * mu), off, rhs)


class Stepper:
    """Holds per-run scratch buffers so repeated steps do not reallocate them."""

    def __init__(self, cfg: SchemeConfig):
        self.cfg = cfg
        self._ws = ThomasWorkspace(cfg.grid.n_interior)

    def step(self, state: FieldPair) -> tuple[FieldPair, StepReport]:
        cfg = self.cfg
        if state.grid != cfg.grid:
            raise ValueError("state grid does not match the scheme grid")
        a_u = lagged_coefficient(state.u, cfg)
        a_v = lagged_coefficient(state.v, cfg)
        sys_u = assemble(state.u, state.v, +1, cfg, a=a_u)
        sys_v = assemble(state.v, state.u, -1, cfg, a=a_v)
        x_u = self._ws.solve(sys_u)
        x_v = self._ws.solve(sys_v)
        margin_u, residual_u = margin_and_residual(sys_u, x_u)
        margin_v, residual_v = margin_and_residual(sys_v, x_v)
        for name, x, res in (("u", x_u, residual_u), ("v", x_v, residual_v)):
            # a NaN anywhere in x makes the residual NaN or inf
            if not math.isfinite(res) or not np.isfinite(x).all():
                raise BlowUpError(f"non-finite values in {name} after the solve")
        report = StepReport(a_u, a_v, margin_u, margin_v, residual_u, residual_v)
        new = FieldPair(Field.from_interior(x_u, cfg.grid),
                        Field.from_interior(x_v, cfg.grid),
                        state.t + cfg.dt)
        return new, report


def step(state: FieldPair, cfg: SchemeConfig) -> tuple[FieldPair, StepReport]:
    return Stepper(cfg).step(state)


Observer = Callable[[int, FieldPair, "StepReport | None"], None]


def simulate(state0: FieldPair, cfg: SchemeConfig,
             observers: Iterable[Observer] = ()) -> FieldPair:
    """Advance ``state0`` by ``cfg.K`` implicit steps.

    Every observer is called as ``obs(k, state, report)`` for the initial
    state (``k=0``, ``report=None``) and after each step; observers decide
    their own cadence. Times are ``t_k = state0.t + k*dt``.

    Raises
    ------
    SimulationError
        Wrapping whatever went wrong, with the failing step index and time.
    """
    observers = list(observers)
    for obs in observers:
        obs(0, state0, None)
    stepper = Stepper(cfg)
    state = state0
    for k in range(cfg.K):
        try:
            new, report = stepper.step(state)
        except Exception as exc:
            raise SimulationError(k, state.t, exc) from exc
        # exact time levels, no accumulated rounding
        state = FieldPair(new.u, new.v, state0.t + (k + 1) * cfg.dt)
        for obs in observers:
            obs(k + 1, state, report)
    return state
