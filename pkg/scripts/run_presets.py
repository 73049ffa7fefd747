"""Run the extinction and persistence presets and print a side-by-side summary.

    python scripts/run_presets.py --J 400 --K 400 --out runs/
"""

import argparse
from pathlib import Path

import numpy as np

from nonlocal_rd.cli import simulate_config
from nonlocal_rd.config import resolve_config


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--J", type=int, default=400)
    p.add_argument("--K", type=int, default=400)
    p.add_argument("--delta", type=float, default=1.95)
    p.add_argument("--out", default="runs")
    args = p.parse_args()

    for name in ("extinction", "persistence"):
        cfg = resolve_config(flags=dict(J=args.J, K=args.K, delta=args.delta), preset=name)
        result = simulate_config(cfg, Path(args.out) / name)
        E = np.array(result.trace.energies)
        t = np.array(result.trace.times)
        positive = np.flatnonzero(E > 0)
        last = t[positive[-1]] if positive.size else float("nan")
        print(f"{name:12s} m0={cfg.m0:<4} E0={E[0]:.4g} E(T)={E[-1]:.4g} "
              f"E(T/4)={E[len(E) // 4]:.4g} last positive E at t={last:.4g} "
              f"max a_u={max(1 / max(cfg.epsilon, abs(l)) + cfg.m0 for l in result.trace.l_u):.4g}")


if __name__ == "__main__":
    main()
