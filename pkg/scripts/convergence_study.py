"""Time and space convergence of the implicit scheme on the first heat mode.

Compares simulated L-inf errors with the closed-form discrete prediction
(1 + dt*lam_h)^(-K) for the sine mode, lam_h = (2 - 2cos(pi dx))/dx^2.

    python scripts/convergence_study.py
"""

import math

import numpy as np

from nonlocal_rd.grid import build_grid, sample_initial
from nonlocal_rd.model import ConstantDiffusion, no_reaction
from nonlocal_rd.oracles import exact_heat_mode
from nonlocal_rd.stepper import FieldPair, SchemeConfig, simulate

T = 0.1


def simulated_error(J, K):
    g = build_grid(J)
    cfg = SchemeConfig(T, K, g, ConstantDiffusion(1.0), no_reaction())
    u = sample_initial(g, lambda x: np.sin(np.pi * x))
    final = simulate(FieldPair(u, u.scaled(0.0)), cfg)
    return float(np.max(np.abs(final.u.values - exact_heat_mode(g.nodes, T, 1.0, 1.0))))


def predicted_error(J, K):
    dx, dt = 1 / J, T / K
    lam = (2 - 2 * math.cos(math.pi * dx)) / dx**2
    return abs((1 + dt * lam) ** (-K) - math.exp(-math.pi**2 * T))


def table(title, pairs, simulate_up_to=200_000):
    print(title)
    prev = None
    for J, K in pairs:
        pred = predicted_error(J, K)
        sim = simulated_error(J, K) if K <= simulate_up_to else float("nan")
        ratio = "" if prev is None else f"  ratio {prev / pred:.3f}"
        print(f"  J={J:5d} K={K:8d}  predicted {pred:.4e}  simulated {sim:.4e}{ratio}")
        prev = pred


if __name__ == "__main__":
    table("halving dt at J=400:", [(400, 1000), (400, 2000), (400, 4000)])
    table("halving dt at J=200:", [(200, 2000), (200, 4000)])
    table("halving dx at K=1e5:", [(100, 100_000), (200, 100_000), (400, 100_000)])
    table("halving dx at K=1e6 (prediction only):", [(200, 10**6), (400, 10**6)])
