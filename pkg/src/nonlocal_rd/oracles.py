"""Independent reference computations for cross-checking the implicit solver.

None of these share code paths with the Thomas solve or the implicit step:
the dense solve goes through LAPACK, and the explicit integrator applies the
discrete Laplacian directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularSystemError, StabilityError
from .grid import Field, nonlocal_form
from .model import coupling_source
from .stepper import FieldPair, SchemeConfig, Stepper


@dataclass(frozen=True, eq=False)
class DenseSystem:
    matrix: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.matrix, dtype=np.float64)
        b = np.asarray(self.rhs, dtype=np.float64)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"matrix must be square, got shape {A.shape}")
        if b.shape != (A.shape[0],):
            raise ValueError(f"rhs must have length {A.shape[0]}, got shape {b.shape}")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("dense system has non-finite entries")
        object.__setattr__(self, "matrix", A)
        object.__setattr__(self, "rhs", b)


def dense_solve(system: DenseSystem) -> np.ndarray:
    """Gaussian elimination with partial pivoting (LAPACK ``gesv``)."""
    try:
        return np.linalg.solve(system.matrix, system.rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(-1, 0.0) from exc


def exact_heat_mode(x, t: float, a: float, delta: float):
    """``delta * exp(-a pi^2 t) * sin(pi x)``, the first Dirichlet heat mode."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    x = np.asarray(x, dtype=np.float64)
    out = delta * math.exp(-a * math.pi**2 * t) * np.sin(np.pi * x)
    # sin(pi) is not exactly zero in floating point
    out = np.where((x == 0.0) | (x == 1.0), 0.0, out)
    return out if out.ndim else float(out)


def _laplacian(values: np.ndarray, dx: float) -> np.ndarray:
    return (values[2:] - 2.0 * values[1:-1] + values[:-2]) / dx**2


def explicit_euler_step(state: FieldPair, cfg: SchemeConfig,
                        dt: float | None = None) -> FieldPair:
    """One forward-Euler step with the same lagged coefficient and source.

    Raises
    ------
    StabilityError
        If ``dt * max(a_u, a_v) > dx^2 / 2`` for this step's coefficients.
    """
    dt = cfg.dt if dt is None else dt
    dx = cfg.grid.dx
    a_u = cfg.diffusion(nonlocal_form(state.u))
    a_v = cfg.diffusion(nonlocal_form(state.v))
    a_max = max(a_u, a_v)
    if not (math.isfinite(a_max) and dt * a_max <= 0.5 * dx * dx):
        raise StabilityError(
            f"dt={dt!r} exceeds dx^2/(2a)={0.5 * dx * dx / a_max!r} (a={a_max!r})"
        )
    u, v = state.u.values, state.v.values
    s = coupling_source(u[1:-1] - v[1:-1], cfg.reaction)
    u_new = u[1:-1] + dt * (a_u * _laplacian(u, dx) + s)
    v_new = v[1:-1] + dt * (a_v * _laplacian(v, dx) - s)
    return FieldPair(Field.from_interior(u_new, cfg.grid),
                     Field.from_interior(v_new, cfg.grid), state.t + dt)


def max_gap(a: FieldPair, b: FieldPair) -> float:
    return float(max(np.max(np.abs(a.u.values - b.u.values)),
                     np.max(np.abs(a.v.values - b.v.values))))


@dataclass
class CrossCheck:
    """Result of running the implicit scheme against explicit Euler.

    ``horizon`` is the last implicit time level the explicit run reached
    while staying inside its stability limit; ``complete`` says whether that
    is the full ``T``.
    """

    horizon: float
    steps: int
    substeps: int
    gap: float
    max_gap: float
    complete: bool
    stopped_because: str | None = None
    gaps: list = field(default_factory=list, repr=False)


def cross_check(state0: FieldPair, cfg: SchemeConfig, explicit_dt: float) -> CrossCheck:
    """Run both integrators and compare them at every implicit time level.

    Explicit Euler takes ``n = ceil(cfg.dt / explicit_dt)`` equal substeps per
    implicit step. The comparison stops early, without error, at the first
    explicit substep that would violate stability.
    """
    n = max(1, math.ceil(cfg.dt / explicit_dt * (1 - 1e-12)))
    h = cfg.dt / n
    stepper = Stepper(cfg)
    imp, exp_ = state0, state0
    gaps = []
    stopped = None
    k_done = 0
    for k in range(cfg.K):
        trial = exp_
        try:
            for _ in range(n):
                trial = explicit_euler_step(trial, cfg, dt=h)
        except StabilityError as exc:
            stopped = f"explicit oracle unstable during step {k}: {exc}"
            break
        imp, _ = stepper.step(imp)
        exp_ = trial
        k_done = k + 1
        gaps.append(max_gap(imp, exp_))
    return CrossCheck(
        horizon=state0.t + k_done * cfg.dt, steps=k_done, substeps=n,
        gap=gaps[-1] if gaps else 0.0, max_gap=max(gaps, default=0.0),
        complete=k_done == cfg.K, stopped_because=stopped, gaps=gaps,
    )
