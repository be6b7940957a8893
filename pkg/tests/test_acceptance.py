"""Acceptance criteria for the package, one test per criterion.

Each test prints a single ``[PASS]`` or ``[FAIL]`` line (also collected in the
terminal summary) and then asserts the same outcome, so a red criterion stays
red in the pytest result as well.
"""

import time
import timeit

import numpy as np

from conftest import random_params
from sica_nsfd import (
    CAPE_VERDE,
    INITIAL_CONDITIONS,
    cumulative_cases,
    derived_constants,
    endemic_equilibrium,
    lyapunov_dfe,
    lyapunov_ee,
    positivity_scan,
    roots_inside_unit_disk_oracle,
    schur_cohn,
    simulate,
)
from sica_nsfd.data import load_cape_verde
from sica_nsfd.nsfd import LYAPUNOV_SLACK, conservation_violations
from sica_nsfd.presets import REPORTED_ENDEMIC, REPORTED_R0
from sica_nsfd.reference import Scheme, integrate
from sica_nsfd.stability import char_poly_dfe, char_poly_numeric

STEP_GRID = (1e-3, 1e-1, 1.0, 10.0, 1e2)
LOW_BETA = 0.1


def best_time(fn, number=200):
    """Best-of-five mean wall time per call, in seconds."""
    return min(timeit.repeat(fn, number=number, repeat=5)) / number


def positivity_runs():
    rng = np.random.default_rng(7)
    for _ in range(100):
        p = random_params(rng)
        s0 = rng.uniform(1.0, 2.0 * p.Lambda / p.mu, 4)
        for h in STEP_GRID:
            yield simulate(p, s0, h, 1000)


def first_positive(traj):
    """First step at which every compartment is positive (logs need it)."""
    return int(np.argmax(np.all(traj.states > 0, axis=1)))


def test_criterion_01_r0(acceptance_report):
    r0 = derived_constants(CAPE_VERDE).r0
    rel = abs(r0 - REPORTED_R0) / REPORTED_R0
    dt = best_time(lambda: derived_constants(CAPE_VERDE).r0)
    ok = rel <= 0.01 and dt < 1e-3
    acceptance_report(1, ok, f"R0={r0:.6f} vs {REPORTED_R0} (rel {rel:.2%} <= 1%), "
                             f"{dt * 1e6:.1f} us < 1 ms")
    assert ok


def test_criterion_02_endemic_point(acceptance_report):
    p = CAPE_VERDE
    k = derived_constants(p)
    S, I, C, A = endemic_equilibrium(p).state
    rel = np.max(np.abs(np.array([S, I, C, A]) - REPORTED_ENDEMIC) / REPORTED_ENDEMIC)
    ratio_err = max(abs(A / I - p.rho / k.C2) / (p.rho / k.C2),
                    abs(C / I - p.phi / k.C3) / (p.phi / k.C3))
    dt = best_time(lambda: endemic_equilibrium(p))
    ok = rel <= 0.01 and ratio_err <= 1e-10 and dt < 1e-3
    acceptance_report(2, ok, f"max componentwise rel {rel:.3%} <= 1%, ratio identities "
                             f"{ratio_err:.1e} <= 1e-10, {dt * 1e6:.1f} us < 1 ms")
    assert ok


def test_criterion_03_global_endemic_stability(acceptance_report):
    p = CAPE_VERDE
    target = endemic_equilibrium(p).state.as_array()
    details, ok = [], True
    t0 = time.perf_counter()
    for key, s0 in INITIAL_CONDITIONS.items():
        traj = simulate(p, s0, 1.0, 10_000)
        rel = np.max(np.abs(traj.states - target) / target, axis=1)
        inside = rel <= 5e-3
        # first step after which the trajectory never leaves the 0.5% band
        settled = np.flip(np.logical_and.accumulate(np.flip(inside)))
        n_conv = int(np.argmax(settled)) if settled.any() else None
        series = lyapunov_ee(p, traj, start=first_positive(traj))
        mono = series.is_monotone(LYAPUNOV_SLACK)
        ok &= n_conv is not None and mono
        details.append(f"init {key}: within 0.5% from n={n_conv}, V~ monotone={mono}")
    dt = time.perf_counter() - t0
    ok &= dt < 1.0
    acceptance_report(3, ok, "; ".join(details) + f"; {dt:.3f} s < 1 s")
    assert ok


def test_criterion_04_global_dfe_stability(acceptance_report):
    p = CAPE_VERDE.with_(beta=LOW_BETA)
    K = p.Lambda / p.mu
    details, ok = [], True
    t0 = time.perf_counter()
    for key, s0 in INITIAL_CONDITIONS.items():
        traj = simulate(p, s0, 1.0, 10_000)
        S, I, C, A = traj.final
        limit_ok = abs(S - K) <= 1e-3 * K and max(I, C, A) <= 1e-3 * K
        series = lyapunov_dfe(p, traj)
        bad = series.violations(LYAPUNOV_SLACK)
        ok &= limit_ok and len(bad) == 0
        note = f"init {key}: limit ok={limit_ok}, V monotone past threshold={len(bad) == 0}"
        if len(bad):
            n = int(bad[0])
            note += f" (V({n + 1})-V({n})={series.differences[n]:+.4g})"
        details.append(note)
    dt = time.perf_counter() - t0
    ok &= dt < 1.0
    acceptance_report(4, ok, "; ".join(details) + f"; {dt:.3f} s < 1 s")
    assert ok


def test_criterion_05_positivity(acceptance_report):
    t0 = time.perf_counter()
    runs = negative = 0
    for traj in positivity_runs():
        runs += 1
        negative += int(np.sum(traj.states < 0)) + int(np.sum(~np.isfinite(traj.states)))
    dt = time.perf_counter() - t0
    ok = runs == 500 and negative == 0 and dt < 10.0
    acceptance_report(5, ok, f"{runs} runs (100 parameter sets x {len(STEP_GRID)} steps x 1000 "
                             f"iterations), {negative} negative components, {dt:.2f} s < 10 s")
    assert ok


def test_criterion_06_conservation(acceptance_report):
    bad = runs = 0
    p_ee, p_dfe = CAPE_VERDE, CAPE_VERDE.with_(beta=LOW_BETA)
    trajs = [simulate(p, s0, 1.0, 10_000)
             for p in (p_ee, p_dfe) for s0 in INITIAL_CONDITIONS.values()]
    for traj in [*trajs, *positivity_runs()]:
        runs += 1
        bad += int(len(conservation_violations(traj, atol_frac=1e-9)) > 0)
    ok = bad == 0
    acceptance_report(6, ok, f"discrete Gronwall bound (+1e-9 Lambda/mu) held at every step "
                             f"in {runs - bad}/{runs} runs")
    assert ok


def random_no_circle_poly(rng, k):
    while True:
        c = rng.uniform(-2, 2, k)
        if np.all(np.abs(np.abs(np.roots([1.0, *c])) - 1.0) > 1e-6):
            return c


def test_criterion_07_schur_cohn_oracle(acceptance_report):
    rng = np.random.default_rng(11)
    polys = [random_no_circle_poly(rng, k) for k in (2, 3, 4) for _ in range(1000)]
    t0 = time.perf_counter()
    disagree = sum(schur_cohn(c).inside != roots_inside_unit_disk_oracle(c) for c in polys)
    dt = time.perf_counter() - t0
    ok = disagree == 0 and dt < 5.0
    acceptance_report(7, ok, f"{disagree} disagreements over 1000 each of degree 2, 3 and 4, "
                             f"{dt:.2f} s < 5 s")
    assert ok


def test_criterion_08_char_poly(acceptance_report):
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(100):
        p = random_params(rng)
        closed = np.array(char_poly_dfe(p).coeffs)
        numeric = char_poly_numeric(p)
        worst = max(worst, float(np.max(np.abs(closed - numeric) / np.abs(numeric))))
    ok = worst <= 1e-9
    acceptance_report(8, ok, f"max relative coefficient gap {worst:.2e} <= 1e-9 on 100 sets")
    assert ok


def test_criterion_09_dynamical_consistency(acceptance_report):
    p, s0 = CAPE_VERDE, INITIAL_CONDITIONS[1]
    a = simulate(p, s0, 0.01, 2700).states
    b = integrate(Scheme.RK4, p, s0, 0.01, 2700).states
    gap = float(np.max(np.abs(a - b) / np.abs(b).max(axis=0)))

    ref = integrate(Scheme.RK4, p, s0, 2.0**-12, 2**12).final
    hs = [2.0**-k for k in range(4, 11)]
    errs = [np.max(np.abs(simulate(p, s0, h, round(1 / h)).final - ref)) for h in hs]
    slope = float(np.polyfit(np.log(hs), np.log(errs), 1)[0])

    grid = [0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 100.0]
    h_euler = positivity_scan(p, s0, Scheme.EULER, grid)
    h_nsfd = positivity_scan(p, s0, Scheme.NSFD, grid)

    ok = gap <= 0.01 and 0.8 <= slope <= 1.2 and h_euler is not None and h_nsfd is None
    acceptance_report(9, ok, f"NSFD vs RK4 max rel {gap:.3%} <= 1%, convergence slope "
                             f"{slope:.3f} in [0.8, 1.2], Euler fails at h={h_euler}, "
                             f"NSFD failure={h_nsfd}")
    assert ok


def test_criterion_10_cumulative_fit(acceptance_report):
    obs = load_cape_verde()
    K = cumulative_cases(simulate(CAPE_VERDE, INITIAL_CONDITIONS[1], 1.0, 27), 27)
    nondecreasing = bool(np.all(np.diff(K) >= 0))
    rel = abs(K[27] - obs.cases[-1]) / obs.cases[-1]
    ok = nondecreasing and rel <= 0.15
    acceptance_report(10, ok, f"cumulative series nondecreasing={nondecreasing}, year 27 "
                              f"{K[27]:.1f} vs {obs.cases[-1]} (rel {rel:.1%} <= 15%)")
    assert ok

