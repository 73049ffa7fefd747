"""Acceptance criteria, one test per criterion, each at its stated tolerance.

Every test prints a PASS/FAIL line (also collected in the terminal summary).
"""

import csv
import filecmp
import math
import time

import numpy as np
import pytest

from helpers import heat_config, sine_pair
from nonlocal_rd.cli import run, simulate_config
from nonlocal_rd.config import resolve_config
from nonlocal_rd.energy import (EnergyRecorder, decay_condition, energy, fit_decay_rate,
                                poincare_constant)
from nonlocal_rd.errors import FitDomainError
from nonlocal_rd.grid import Field, build_grid, sample_initial
from nonlocal_rd.model import DiffusionSpec, ReactionSpec, coupling_source
from nonlocal_rd.oracles import DenseSystem, cross_check, dense_solve, exact_heat_mode
from nonlocal_rd.stepper import FieldPair, SchemeConfig, simulate, step
from nonlocal_rd.tridiag import TridiagonalSystem, thomas_solve


def _read_energy(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))[1:]
    return np.array([[float(x) for x in r] for r in rows])


def test_c1_tridiagonal_oracle_equivalence(record_criterion):
    rng = np.random.default_rng(20261016)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 501))
        sub, sup = rng.uniform(-1, 1, n - 1), rng.uniform(-1, 1, n - 1)
        off = np.r_[0, np.abs(sub)] + np.r_[np.abs(sup), 0]
        diag = (off + rng.uniform(0.05, 1, n)) * rng.choice([-1.0, 1.0], n)
        s = TridiagonalSystem(sub, diag, sup, rng.normal(size=n))
        x = thomas_solve(s)
        ref = dense_solve(DenseSystem(s.to_dense(), s.rhs))
        worst = max(worst, np.max(np.abs(x - ref)) / np.max(np.abs(ref)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 5.0
    record_criterion("C1 tridiagonal oracle equivalence", ok,
                     f"max rel err {worst:.2e} (<=1e-12), {elapsed:.2f}s (<5s)")
    assert ok


def _heat_error(J, K, T=0.1):
    cfg = heat_config(J, K, T)
    final = simulate(sine_pair(cfg.grid, delta=1.0, v_sign=0.0), cfg)
    return float(np.max(np.abs(final.u.values - exact_heat_mode(cfg.grid.nodes, T, 1.0, 1.0))))


def test_c2_exact_solution_convergence(record_criterion):
    start = time.perf_counter()
    e_base = _heat_error(200, 2000)
    e_half_dt = _heat_error(200, 4000)
    e_dx = _heat_error(200, 100_000)
    e_half_dx = _heat_error(400, 100_000)
    elapsed = time.perf_counter() - start
    r_t = e_base / e_half_dt
    r_x = e_dx / e_half_dx
    checks = [e_base <= 1e-3, 1.7 <= r_t <= 2.3, 3.4 <= r_x <= 4.6, elapsed < 30.0]
    ok = all(checks)
    record_criterion(
        "C2 exact-solution convergence", ok,
        f"err {e_base:.3e} (<=1e-3) {checks[0]}; dt ratio {r_t:.3f} in [1.7,2.3] {checks[1]}; "
        f"dx ratio J=200->400 at K=1e5 {r_x:.3f} in [3.4,4.6] {checks[2]}; "
        f"{elapsed:.1f}s (<30s)")
    assert ok


def test_c3_energy_decay_rate(record_criterion):
    start = time.perf_counter()
    cfg = heat_config(200, 2000, 0.1)
    rec = EnergyRecorder()
    simulate(sine_pair(cfg.grid, delta=1.0, v_sign=0.0), cfg, [rec])
    fit = fit_decay_rate(rec.trace)
    elapsed = time.perf_counter() - start
    lo, hi = 0.9 * 2 * math.pi**2, 1.1 * 2 * math.pi**2
    ok = lo <= fit.eta <= hi and elapsed < 10.0
    record_criterion("C3 energy decay rate", ok,
                     f"eta {fit.eta:.4f} in [{lo:.2f}, {hi:.2f}], {elapsed:.2f}s (<10s)")
    assert ok


def _preset_run(name, out):
    cfg = resolve_config(flags=dict(J=400, K=400, output_dir=str(out)), preset=name)
    assert run(cfg) == 0
    return cfg, _read_energy(out / "energy.csv")


def test_c4_extinction(record_criterion, tmp_path):
    start = time.perf_counter()
    cfg, rows = _preset_run("extinction", tmp_path)
    final_max = float(max(rows[-1, 4], rows[-1, 5]))
    E = rows[:, 1]
    k0 = cfg.K // 10
    steps = np.diff(E[k0:])
    decreasing = bool(np.all(steps < 0))
    scheme = cfg.scheme()
    cc = cross_check(cfg.initial_state(scheme.grid), scheme, scheme.grid.dx**2 / 4)
    elapsed = time.perf_counter() - start
    checks = [final_max <= 0.05 * cfg.delta, decreasing,
              cc.complete and cc.gap <= 1e-2, elapsed < 10.0]
    ok = all(checks)
    detail = (f"final max|u|,|v| {final_max:.3e} (<= {0.05 * cfg.delta:.4f}) {checks[0]}; "
              f"E strictly decreasing after step {k0}: {decreasing}")
    if not decreasing:
        first = k0 + int(np.flatnonzero(steps >= 0)[0])
        detail += f" (E_{first}={float(E[first])!r}, E_{first + 1}={float(E[first + 1])!r})"
    detail += (f"; explicit cross-check at dx^2/4 reached t={cc.horizon:.4g} of T={cfg.T} "
               f"with gap {cc.gap:.2e} {checks[2]}; {elapsed:.1f}s (<10s)")
    record_criterion("C4 extinction experiment", ok, detail)
    assert ok


def test_c5_persistence(record_criterion, tmp_path):
    start = time.perf_counter()
    _, ext = _preset_run("extinction", tmp_path / "ext")
    _, per = _preset_run("persistence", tmp_path / "per")
    elapsed = time.perf_counter() - start
    E_ext, E_per = float(ext[-1, 1]), float(per[-1, 1])
    energy_ok = bool(E_per >= 10 * E_ext)
    note = " (both zero: holds only vacuously)" if E_per == E_ext == 0.0 else ""
    etas = {}
    for name, rows in (("extinction", ext), ("persistence", per)):
        rec = EnergyRecorder()
        rec.trace.times, rec.trace.energies = list(rows[:, 0]), list(rows[:, 1])
        try:
            etas[name] = fit_decay_rate(rec.trace).eta
        except FitDomainError as exc:
            etas[name] = f"unavailable ({exc})"
    eta_ok = (all(isinstance(v, float) for v in etas.values())
              and etas["persistence"] * 5 <= etas["extinction"])
    ok = energy_ok and eta_ok and elapsed < 10.0
    record_criterion(
        "C5 persistence experiment", ok,
        f"final E persistence {E_per!r} vs extinction {E_ext!r} (>=10x) {energy_ok}{note}; "
        f"eta extinction {etas['extinction']}, persistence {etas['persistence']} (5x) {eta_ok}; "
        f"{elapsed:.1f}s (<10s)")
    assert ok


def test_c6_invariant_suite(record_criterion, tmp_path):
    start = time.perf_counter()
    results = {}
    rng = np.random.default_rng(6)

    g = build_grid(100)
    cfg = SchemeConfig(0.2, 100, g, DiffusionSpec(1e-6, 0.1), ReactionSpec(1.0, 10.0))
    u = sample_initial(g, lambda x: 1.95 * np.sin(np.pi * x))
    sym = []
    simulate(FieldPair(u, u), cfg,
             [lambda k, s, r: sym.append(np.array_equal(s.u.values, s.v.values))])
    results["symmetry propagation"] = all(sym) and len(sym) == 101

    z = FieldPair(Field.zeros(g), Field.zeros(g))
    nz, _ = step(z, cfg)
    results["zero fixed point"] = not np.any(nz.u.values) and not np.any(nz.v.values)

    pair = FieldPair(Field.from_interior(rng.normal(size=99), g),
                     Field.from_interior(rng.normal(size=99), g))
    e0 = energy(pair)
    results["quadratic energy scaling"] = all(
        abs(energy(FieldPair(pair.u.scaled(s), pair.v.scaled(s))) - s * s * e0) <= 1e-12 * s * s * e0
        for s in rng.uniform(-20, 20, 50))

    spec = DiffusionSpec(1e-6, 1.0)
    xs = np.concatenate([[0.0], np.logspace(-12, 12, 1001)])
    results["diffusion bounds"] = all(spec.m0 <= spec(x) <= 1 / spec.epsilon + spec.m0 for x in xs)
    results["diffusion evenness"] = all(spec(x) == spec(-x) for x in xs)

    rs = ReactionSpec(1.0, 10.0)
    results["coupling roots 0 and kappa"] = coupling_source(0.0, rs) == 0 and coupling_source(10.0, rs) == 0

    margins = []
    hc = heat_config(64, 20, 20 * 0.25 / 64**2)  # mu = 0.25, exact arithmetic
    simulate(sine_pair(hc.grid), hc,
             [lambda k, s, r: r is None or margins.extend([r.margin_u, r.margin_v])])
    results["dominance margin == 1"] = margins and all(m == 1.0 for m in margins)

    c_p = poincare_constant()
    mono = True
    for m, M1, alpha, d in rng.uniform(0, 5, (500, 4)):
        before = decay_condition(m, M1, alpha, c_p)
        if before and not decay_condition(m + d, M1, alpha, c_p):
            mono = False
        if not before and (decay_condition(m, M1 + d, alpha, c_p)
                           or decay_condition(m, M1, alpha + d, c_p)):
            mono = False
    results["decay_condition monotone"] = mono

    for name in ("a", "b"):
        run(resolve_config(flags=dict(J=60, K=30, output_dir=str(tmp_path / name)),
                           preset="extinction"))
    names = sorted(p.name for p in (tmp_path / "a").glob("*.csv"))
    _, mismatch, errors = filecmp.cmpfiles(tmp_path / "a", tmp_path / "b", names, shallow=False)
    results["CSV bit-determinism"] = bool(names) and not mismatch and not errors

    elapsed = time.perf_counter() - start
    ok = all(results.values()) and elapsed < 10.0
    failed = [k for k, v in results.items() if not v]
    record_criterion("C6 invariant suite", ok,
                     f"{len(results) - len(failed)}/{len(results)} invariants hold"
                     + (f", failed: {failed}" if failed else "") + f"; {elapsed:.1f}s (<10s)")
    assert ok


def test_c7_full_scale_smoke_run(record_criterion):
    cfg = resolve_config(preset="extinction")
    assert cfg.J == cfg.K == 10_000
    start = time.perf_counter()
    result = simulate_config(cfg)
    elapsed = time.perf_counter() - start
    E = result.trace.energies
    ratio = E[-1] / E[0]
    ok = result.exit_status == 0 and ratio <= 1e-3 and elapsed < 300
    record_criterion("C7 full-scale smoke run", ok,
                     f"status {result.summary['status']}, E_final/E_0 = {ratio:.3e} (<=1e-3), "
                     f"{elapsed:.1f}s (<300s)")
    assert ok
