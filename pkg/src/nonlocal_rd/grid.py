"""Uniform mesh of the unit interval and nodal fields with zero boundary values."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidGridError, SamplingError


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=np.float64)
    values.flags.writeable = False
    return values


@dataclass(frozen=True)
class Grid1D:
    """Uniform mesh of (0, 1) with ``J`` intervals.

    Attributes
    ----------
    J : int
        Number of intervals; the mesh has ``J + 1`` nodes.
    dx : float
        Mesh spacing ``1 / J``.
    nodes : ndarray
        Node coordinates ``x_i = i * dx``, read-only.
    """

    J: int
    dx: float = field(init=False)
    nodes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if isinstance(self.J, bool) or int(self.J) != self.J or self.J < 2:
            raise InvalidGridError(f"J must be an integer >= 2, got {self.J!r}")
        object.__setattr__(self, "J", int(self.J))
        object.__setattr__(self, "dx", 1.0 / self.J)
        x = np.arange(self.J + 1, dtype=np.float64) * self.dx
        x[-1] = 1.0
        object.__setattr__(self, "nodes", _frozen(x))

    @property
    def n_interior(self) -> int:
        return self.J - 1


def build_grid(J: int) -> Grid1D:
    return Grid1D(J)


@dataclass(frozen=True, eq=False)
class Field:
    """Nodal values on a grid; both boundary entries are held at zero."""

    values: np.ndarray
    grid: Grid1D

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.shape != (self.grid.J + 1,):
            raise ValueError(
                f"field needs {self.grid.J + 1} values, got shape {values.shape}"
            )
        if values[0] != 0.0 or values[-1] != 0.0:
            raise ValueError("boundary values must be zero")
        object.__setattr__(self, "values", _frozen(values))

    @classmethod
    def from_interior(cls, interior: np.ndarray, grid: Grid1D) -> "Field":
        interior = np.asarray(interior, dtype=np.float64)
        if interior.shape != (grid.J - 1,):
            raise ValueError(f"need {grid.J - 1} interior values, got shape {interior.shape}")
        values = np.zeros(grid.J + 1)
        values[1:-1] = interior
        return cls._wrap(values, grid)

    @classmethod
    def _wrap(cls, values: np.ndarray, grid: Grid1D) -> "Field":
        # caller guarantees a fresh float64 array of the right length with zero ends
        values.flags.writeable = False
        obj = object.__new__(cls)
        object.__setattr__(obj, "values", values)
        object.__setattr__(obj, "grid", grid)
        return obj

    @classmethod
    def zeros(cls, grid: Grid1D) -> "Field":
        return cls(np.zeros(grid.J + 1), grid)

    @property
    def interior(self) -> np.ndarray:
        return self.values[1:-1]

    def __neg__(self) -> "Field":
        return Field(-self.values, self.grid)

    def scaled(self, s: float) -> "Field":
        return Field(s * self.values, self.grid)


def nonlocal_form(field: Field) -> float:
    """Rectangle-rule integral ``sum_{j=1}^{J} dx * u_j`` of a field over (0, 1)."""
    return float(field.grid.dx * np.sum(field.values[1:]))


def sample_initial(grid: Grid1D, profile: Callable[[np.ndarray], np.ndarray]) -> Field:
    """Sample ``profile`` at the interior nodes; boundary entries are set to zero.

    ``profile`` is called once on the array of interior node coordinates and
    may return an array or a scalar (broadcast).
    """
    x = grid.nodes[1:-1]
    with np.errstate(all="ignore"):
        sampled = np.broadcast_to(np.asarray(profile(x), dtype=np.float64), x.shape)
    bad = np.flatnonzero(~np.isfinite(sampled))
    if bad.size:
        i = int(bad[0]) + 1
        raise SamplingError(f"profile is not finite at x={float(grid.nodes[i])!r} (node {i})")
    return Field.from_interior(sampled, grid)
