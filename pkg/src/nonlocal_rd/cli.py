"""Command-line driver: run a configured simulation or cross-check it.

Usage::

    nonlocal-rd --preset extinction --set J=400 --set K=400 --output-dir out/ext
    nonlocal-rd --config run.yaml --verify
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import RunConfig, load_config, replace
from .energy import (EnergyRecorder, FitDomainError, decay_condition, decay_threshold,
                     fit_decay_rate, poincare_constant, predicted_rate)
from .errors import ConfigError, NonlocalRDError, SimulationError
from .model import ConstantDiffusion, lipschitz_estimate
from .oracles import DenseSystem, cross_check, dense_solve, exact_heat_mode
from .stepper import FieldPair, SchemeConfig, assemble, simulate
from .tridiag import TridiagonalSystem, thomas_solve

log = logging.getLogger(__name__)

ENERGY_HEADER = ("t", "E", "l_u", "l_v", "max_abs_u", "max_abs_v")
SNAPSHOT_HEADER = ("x", "u", "v")


def _fmt(x: float) -> str:
    # shortest round-trip representation
    return repr(float(x))


class SnapshotWriter:
    """Observer writing ``snap_<k>.csv`` every ``every`` steps (and at the last step)."""

    def __init__(self, directory: Path, every: int, K: int):
        self.directory = Path(directory)
        self.every = every
        self.K = K
        self.width = len(str(K))
        self.written: list[Path] = []

    def __call__(self, k, state, report):
        if k % self.every and k != self.K:
            return
        path = self.directory / f"snap_{k:0{self.width}d}.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(SNAPSHOT_HEADER)
            for x, u, v in zip(state.grid.nodes, state.u.values, state.v.values):
                writer.writerow((_fmt(x), _fmt(u), _fmt(v)))
        self.written.append(path)


class DifferenceRange:
    """Observer tracking the range of ``u - v`` over a run."""

    def __init__(self):
        self.lo = np.inf
        self.hi = -np.inf

    def __call__(self, k, state, report):
        w = state.u.values - state.v.values
        self.lo = min(self.lo, float(w.min()))
        self.hi = max(self.hi, float(w.max()))


def write_energy_csv(path: Path, trace) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ENERGY_HEADER)
        for row in trace.rows():
            writer.writerow(tuple(_fmt(x) for x in row))


@dataclass
class RunResult:
    final: FieldPair | None
    trace: object
    summary: dict
    exit_status: int
    error: str | None = None


def _decay_diagnostics(cfg: RunConfig, trace, w_range: DifferenceRange) -> dict:
    diffusion = cfg.diffusion()
    reaction = cfg.reaction()
    c_p = poincare_constant()
    out: dict = {}
    try:
        fit = fit_decay_rate(trace)
        out.update(C=fit.C, eta=fit.eta, fit_rmse=fit.rmse)
    except FitDomainError as exc:
        out.update(C=float("nan"), eta=float("nan"), fit_rmse=float("nan"),
                   fit_error=str(exc))
    if reaction.M1 is not None:
        M1, source = reaction.M1, "asserted"
    elif cfg.r == 0:
        M1, source = cfg.alpha, "exact (no logistic term)"
    else:
        lo, hi = w_range.lo, w_range.hi
        if not hi > lo:
            hi = lo + 1e-12
        M1 = lipschitz_estimate(reaction.f, lo, hi, 2001)
        source = f"estimated on u-v in [{lo:.6g}, {hi:.6g}]"
    out.update(m=diffusion.m, M1=M1, M1_source=source, alpha=cfg.alpha, c_p=c_p,
               threshold=decay_threshold(M1, cfg.alpha, c_p),
               decay_condition=decay_condition(diffusion.m, M1, cfg.alpha, c_p),
               eta_pred=predicted_rate(diffusion.m, M1, cfg.alpha, c_p))
    return out


def simulate_config(cfg: RunConfig, output_dir: Path | None = None) -> RunResult:
    """Run ``cfg``; when ``output_dir`` is given write CSVs and the summary there."""
    scheme = cfg.scheme()
    state0 = cfg.initial_state(scheme.grid)
    recorder = EnergyRecorder(every=1)
    w_range = DifferenceRange()
    observers = [recorder, w_range]
    if output_dir is not None:
        output_dir = Path(output_dir)
        output_dir.mkdir(parents=True, exist_ok=True)
        observers.append(SnapshotWriter(output_dir, cfg.snapshot_cadence, cfg.K))
    start = time.perf_counter()
    final, error, status = None, None, 0
    try:
        final = simulate(state0, scheme, observers)
    except SimulationError as exc:
        error, status = str(exc), 2
    wall = time.perf_counter() - start
    summary = dict(preset=cfg.preset, J=cfg.J, K=cfg.K, T=cfg.T, wall_time_s=wall,
                   status="ok" if error is None else "aborted")
    if error is not None:
        summary["error"] = error
    summary.update(_decay_diagnostics(cfg, recorder.trace, w_range))
    if output_dir is not None:
        write_energy_csv(output_dir / "energy.csv", recorder.trace)
        with open(output_dir / "run_summary.txt", "w") as fh:
            for key, value in summary.items():
                fh.write(f"{key}: {value}\n")
    return RunResult(final, recorder.trace, summary, status, error)


def run(cfg: RunConfig) -> int:
    result = simulate_config(cfg, Path(cfg.output_dir))
    s = result.summary
    print(f"run {s['status']}: J={cfg.J} K={cfg.K} T={cfg.T} in {s['wall_time_s']:.2f}s")
    if result.error:
        print(f"  error: {result.error}")
    print(f"  fitted C={s['C']:.6g} eta={s['eta']:.6g} (rmse {s['fit_rmse']:.3g})")
    if "fit_error" in s:
        print(f"  fit unavailable: {s['fit_error']}")
    verdict = "holds" if s["decay_condition"] else "fails"
    print(f"  decay condition m > 2 c_p (M1+alpha): {verdict} "
          f"(m={s['m']:.6g}, threshold={s['threshold']:.6g}, M1 {s['M1_source']})")
    print(f"  eta_pred={s['eta_pred']}")
    print(f"  outputs in {cfg.output_dir}")
    return result.exit_status


@dataclass
class Check:
    name: str
    passed: bool
    detail: str


@dataclass
class VerifyReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, passed, detail):
        self.checks.append(Check(name, bool(passed), detail))

    def lines(self):
        for c in self.checks:
            yield f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}"


def _rel_err(x, ref):
    return float(np.max(np.abs(x - ref)) / max(np.max(np.abs(ref)), np.finfo(float).tiny))


def verify(cfg: RunConfig, seed: int = 0) -> VerifyReport:
    """Cross-check ``cfg`` on a reduced grid against the independent oracles.

    The grid is reduced to ``J' = min(J, 200)``; the implicit run keeps
    ``K``, and explicit Euler subcycles at ``dt <= dx'^2/4``. Explicit Euler
    is only stable while ``a * dt <= dx^2/2``, so when the nonlocal
    coefficient grows the comparison covers the horizon it reached.
    """
    report = VerifyReport()
    J = min(cfg.J, 200)
    scheme = cfg.scheme(J=J)
    state0 = cfg.initial_state(scheme.grid)

    # tridiagonal vs dense on the first assembled system and random ones
    rng = np.random.default_rng(seed)
    worst = 0.0
    systems = [assemble(state0.u, state0.v, +1, scheme)] if cfg.K else []
    for _ in range(20):
        n = int(rng.integers(2, 200))
        sub, sup = rng.uniform(-1, 1, n - 1), rng.uniform(-1, 1, n - 1)
        diag = rng.uniform(0.1, 1, n) * rng.choice([-1, 1], n)
        diag += np.sign(diag) * (np.r_[0, np.abs(sub)] + np.r_[np.abs(sup), 0])
        systems.append(TridiagonalSystem(sub, diag, sup, rng.normal(size=n)))
    for s in systems:
        worst = max(worst, _rel_err(thomas_solve(s), dense_solve(DenseSystem(s.to_dense(), s.rhs))))
    report.add("thomas vs dense", worst <= 1e-12, f"max relative error {worst:.3e}")

    if cfg.K:
        cc = cross_check(state0, scheme, scheme.grid.dx**2 / 4)
        detail = (f"L-inf gap {cc.gap:.3e} at t={cc.horizon:.6g} of T={cfg.T} "
                  f"({cc.substeps} explicit substeps per step)")
        if not cc.complete:
            detail += f"; stopped early: {cc.stopped_because}"
        report.add("implicit vs explicit Euler", cc.steps > 0 and cc.max_gap <= 1e-2, detail)

    if isinstance(scheme.diffusion, ConstantDiffusion) and cfg.r == 0:
        final = simulate(state0, scheme)
        a = scheme.diffusion.value
        exact = exact_heat_mode(scheme.grid.nodes, final.t, a, cfg.delta)
        err = float(max(np.max(np.abs(final.u.values - exact)),
                        np.max(np.abs(final.v.values + exact))))
        report.add("implicit vs exact heat mode", err <= 1e-3, f"L-inf error {err:.3e}")
    return report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nonlocal-rd", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="flat key: value config file")
    p.add_argument("--preset", help="extinction or persistence")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   dest="overrides", help="override one config key (repeatable)")
    p.add_argument("--output-dir", help="directory for energy.csv and snapshots")
    p.add_argument("--verify", action="store_true", default=None,
                   help="run oracle cross-checks instead of the simulation")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        cfg = load_config(args.config, args.overrides, preset=args.preset,
                          output_dir=args.output_dir, verify=args.verify)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        if cfg.verify:
            report = verify(cfg)
            for line in report.lines():
                print(line)
            return 0 if report.passed else 1
        return run(cfg)
    except (NonlocalRDError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
