"""Shared builders for solver tests."""

import numpy as np

from nonlocal_rd.grid import build_grid, sample_initial
from nonlocal_rd.model import ConstantDiffusion, no_reaction
from nonlocal_rd.stepper import FieldPair, SchemeConfig


def sine_pair(grid, delta=1.0, v_sign=-1.0):
    u = sample_initial(grid, lambda x: delta * np.sin(np.pi * x))
    return FieldPair(u, u.scaled(v_sign), 0.0)


def heat_config(J, K, T, a=1.0):
    return SchemeConfig(T, K, build_grid(J), ConstantDiffusion(a), no_reaction())
