"""Thomas algorithm for tridiagonal linear systems."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import SingularSystemError

_TINY = np.finfo(np.float64).tiny


@dataclass(frozen=True, eq=False)
class TridiagonalSystem:
    """Tridiagonal system ``A x = rhs``.

    Row ``i`` reads ``sub[i-1] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]``.
    """

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        arrays = {}
        for name in ("sub", "diag", "sup", "rhs"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            if arr.ndim != 1:
                raise ValueError(f"{name} must be one-dimensional")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} has non-finite entries")
            arrays[name] = arr
        n = arrays["diag"].size
        if n < 1:
            raise ValueError("system must have at least one row")
        if arrays["rhs"].size != n:
            raise ValueError(f"rhs has length {arrays['rhs'].size}, expected {n}")
        for name in ("sub", "sup"):
            if arrays[name].size != n - 1:
                raise ValueError(f"{name} has length {arrays[name].size}, expected {n - 1}")
        for name, arr in arrays.items():
            object.__setattr__(self, name, arr)

    @classmethod
    def trusted(cls, sub, diag, sup, rhs) -> "TridiagonalSystem":
        """Build without validation; for float64 arrays the caller has checked."""
        obj = object.__new__(cls)
        for name, arr in (("sub", sub), ("diag", diag), ("sup", sup), ("rhs", rhs)):
            object.__setattr__(obj, name, arr)
        return obj

    @property
    def n(self) -> int:
        return self.diag.size

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.diag * x
        y[1:] += self.sub * x[:-1]
        y[:-1] += self.sup * x[1:]
        return y

    def to_dense(self) -> np.ndarray:
        n = self.n
        A = np.diag(self.diag)
        if n > 1:
            A[np.arange(1, n), np.arange(n - 1)] = self.sub
            A[np.arange(n - 1), np.arange(1, n)] = self.sup
        return A

    def residual(self, x: np.ndarray) -> float:
        """Infinity norm of ``A x - rhs``."""
        return float(np.max(np.abs(self.matvec(x) - self.rhs)))

    def norm_inf(self) -> float:
        row = np.abs(self.diag).copy()
        row[1:] += np.abs(self.sub)
        row[:-1] += np.abs(self.sup)
        return float(row.max())


@njit(cache=True)
def _thomas_kernel(sub, diag, sup, rhs, c, d, x):
    # returns -1 on success, else the index of the offending pivot
    n = diag.size
    beta = diag[0]
    if abs(beta) < _TINY:
        return 0
    if n > 1:
        c[0] = sup[0] / beta
    d[0] = rhs[0] / beta
    for i in range(1, n):
        beta = diag[i] - sub[i - 1] * c[i - 1]
        if abs(beta) < _TINY:
            return i
        if i < n - 1:
            c[i] = sup[i] / beta
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / beta
    x[n - 1] = d[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = d[i] - c[i] * x[i + 1]
    return -1


@njit(cache=True)
def _margin_and_residual(sub, diag, sup, rhs, x):
    n = diag.size
    margin = np.inf
    resid = 0.0
    for i in range(n):
        row = abs(diag[i])
        ax = diag[i] * x[i]
        if i > 0:
            row -= abs(sub[i - 1])
            ax += sub[i - 1] * x[i - 1]
        if i < n - 1:
            row -= abs(sup[i])
            ax += sup[i] * x[i + 1]
        margin = min(margin, row)
        resid = max(resid, abs(ax - rhs[i]))
    return margin, resid


def margin_and_residual(system: TridiagonalSystem, x: np.ndarray) -> tuple[float, float]:
    """``dominance_margin(system)`` and ``system.residual(x)`` in one pass."""
    m, r = _margin_and_residual(system.sub, system.diag, system.sup, system.rhs, x)
    return float(m), float(r)


def _pivot_value(system: TridiagonalSystem, index: int) -> float:
    beta = system.diag[0]
    for i in range(1, index + 1):
        beta = system.diag[i] - system.sub[i - 1] * (system.sup[i - 1] / beta)
    return float(beta)


class ThomasWorkspace:
    """Reusable scratch buffers for repeated solves of size ``n``.

    Not thread-safe: one workspace per thread.
    """

    def __init__(self, n: int):
        self.n = n
        self._c = np.empty(max(n - 1, 1))
        self._d = np.empty(n)

    def solve(self, system: TridiagonalSystem, out: np.ndarray | None = None) -> np.ndarray:
        if system.n != self.n:
            raise ValueError(f"workspace sized for n={self.n}, got n={system.n}")
        x = np.empty(self.n) if out is None else out
        status = _thomas_kernel(system.sub, system.diag, system.sup, system.rhs,
                                self._c, self._d, x)
        if status >= 0:
            raise SingularSystemError(status, _pivot_value(system, status))
        return x


def thomas_solve(system: TridiagonalSystem) -> np.ndarray:
    """Solve a tridiagonal system by forward elimination and back substitution.

    No pivoting is performed; the solve is safe for strictly diagonally
    dominant matrices.

    Raises
    ------
    SingularSystemError
        If a pivot is zero or subnormal; ``pivot_index`` names the row.
    """
    return ThomasWorkspace(system.n).solve(system)


def dominance_margin(system: TridiagonalSystem) -> float:
    """Smallest ``|diag_i| - |sub_{i-1}| - |sup_i|`` over the rows."""
    margin = np.abs(system.diag).copy()
    margin[1:] -= np.abs(system.sub)
    margin[:-1] -= np.abs(system.sup)
    return float(margin.min())
