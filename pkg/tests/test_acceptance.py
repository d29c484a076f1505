"""Acceptance suite: one test and one printed pass/fail line per criterion."""

import json
import time

import numpy as np

from aqt.adiabatic import adiabatic_state, berry_phase, infidelity
from aqt.adiabatic import _holonomy
from aqt.cli import builtin_scenario_names, builtin_scenario_path, main
from aqt.conditions import (appendix_chain, check_condition_d, formalism_gap)
from aqt.evolution import (integrate_schrodinger, kernel_trajectory,
                           propagator, propagator_oracle, resolve_grid,
                           solve_volterra, solve_w_ode)
from aqt.hamiltonians import (SIGMA_X, SIGMA_Z, build_dual_family, constant,
                              custom_polynomial, landau_zener, rotating_cone)
from aqt.numerics import adjoint, cumulative_simpson, loglog_slope
from aqt.spectral import frame_trajectory

LZ = dict(delta=1.0, v=2.0)


def check(num, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}", flush=True)
    assert ok, f"criterion {num}: {detail}"


def final_infidelity(fam, T, level=0):
    n = resolve_grid(fam, T)
    fr = frame_trajectory(fam, T, n)
    psi = integrate_schrodinger(fam, T, fr.states[0][:, level], N=n)
    return infidelity(psi.values[-1], adiabatic_state(fr, level, n).state)


def test_criterion_1_qat_convergence():
    t0 = time.perf_counter()
    fam = landau_zener(**LZ)
    t_grid = np.array([16.0, 32.0, 64.0, 128.0, 256.0])
    vals = np.array([final_infidelity(fam, T) for T in t_grid])
    slope, _ = loglog_slope(t_grid, np.maximum(vals, 1e-16))
    elapsed = time.perf_counter() - t0
    ok = abs(slope + 1.0) <= 0.15 and vals[-1] < 5e-3 and elapsed < 60.0
    check(1, ok, f"slope {slope:.3f} (want -1 +/- 0.15), "
                 f"final infidelity {vals[-1]:.3e}, {elapsed:.1f} s")


def test_criterion_2_formalism_equivalence():
    fam = landau_zener(**LZ)
    worst = 0.0
    for T in (8.0, 32.0, 128.0):
        fr = frame_trajectory(fam, T, resolve_grid(fam, T))
        ker = kernel_trajectory(fr)
        w_int = solve_volterra(ker).values[-1]
        w_ode = solve_w_ode(ker).values[-1]
        worst = max(worst, float(np.linalg.norm(w_int - w_ode)))
    check(2, worst < 1e-6, f"max Frobenius gap Volterra vs ODE at s=1: {worst:.3e}")


def random_family(seed):
    rng = np.random.default_rng(seed)
    d = 2 + seed % 2
    gap = np.diag(2.0 * np.arange(d)).astype(complex)

    def herm():
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        return 0.5 * (a + a.conj().T)

    terms = [[{"c": 1.0}],
             [{"c": float(0.1 + 0.1 * rng.random()), "s_pow": 1}],
             [{"c": float(0.1 + 0.1 * rng.random()), "s_pow": 2}]]
    return custom_polynomial([gap, herm(), herm()], terms, name=f"rand{seed}")


def test_criterion_3_kernel_algebra():
    worst_split, worst_anti, worst_unit = 0.0, 0.0, 0.0
    for seed in range(20):
        fam = random_family(seed)
        T = 16.0
        fr = frame_trajectory(fam, T, resolve_grid(fam, T))
        ker = kernel_trajectory(fr)
        worst_split = max(worst_split, float(np.max(np.abs(ker.K - (ker.K1 + ker.K2)))))
        worst_anti = max(worst_anti, float(np.max(np.abs(
            ker.K + np.conj(np.swapaxes(ker.K, 1, 2))))))
        w = solve_volterra(ker).values
        d = fam.dim
        worst_unit = max(worst_unit, float(np.max(np.abs(
            np.einsum("tba,tbc->tac", w.conj(), w) - np.eye(d)))))
    ok = worst_split < 1e-15 and worst_anti < 1e-9 and worst_unit < 1e-6
    check(3, ok, f"20 random families: split {worst_split:.1e}, "
                 f"anti-Hermiticity {worst_anti:.1e}, W unitarity {worst_unit:.1e}")


def stationary_phase_family():
    # single interior kink of E0 - E1 at s = 1/2 with a tiny gap-keeping offset
    return custom_polynomial(
        [SIGMA_Z, SIGMA_X],
        [[{"c": 0.5, "cos_k": 0.5}], [{"c": 1e-7}]], name="single_kink")


def test_criterion_4_condition_d_classifier():
    t0 = time.perf_counter()
    lz = check_condition_d(landau_zener(**LZ))
    kink = check_condition_d(stationary_phase_family())
    base = landau_zener(**LZ)
    dual = build_dual_family(base, propagator_oracle(base))
    dual_series = check_condition_d(dual, (8.0, 16.0, 32.0, 64.0, 128.0))
    elapsed = time.perf_counter() - t0
    ok = (lz.verdict == "vanishes" and abs(lz.slope + 1.0) <= 0.2
          and kink.verdict == "vanishes" and abs(kink.slope + 0.5) <= 0.15
          and dual_series.verdict == "persists" and elapsed < 120.0)
    check(4, ok, f"LZ {lz.verdict} slope {lz.slope:.3f}; "
                 f"stationary-phase {kink.verdict} slope {kink.slope:.3f}; "
                 f"dual {dual_series.verdict} slope {dual_series.slope:.3f} "
                 f"(want persists); {elapsed:.1f} s")


def test_criterion_5_ms_counterexample():
    T = 256.0
    base = landau_zener(**LZ)
    oracle = propagator_oracle(base)
    dual = build_dual_family(base, oracle)
    base_fid = 1.0 - final_infidelity(base, T)
    dual_fid = 1.0 - final_infidelity(dual, T)
    u_dual = propagator(dual, T, resolve_grid(dual, T)).values[-1]
    prop_err = float(np.max(np.abs(u_dual - adjoint(oracle(1.0, T)))))
    ok = base_fid >= 0.99 and dual_fid <= 0.9 and prop_err <= 1e-5
    check(5, ok, f"T=256 base fidelity {base_fid:.6f}, dual fidelity "
                 f"{dual_fid:.4f}, dual propagator vs U-dagger {prop_err:.2e}")


def test_criterion_6_berry_phase():
    worst = 0.0
    for theta in (np.pi / 6, np.pi / 3, np.pi / 2):
        fam = rotating_cone(omega0=1.0, theta=theta)
        fr = frame_trajectory(fam, 8.0, 4096)
        gamma = berry_phase(fr, 0).berry_phase
        worst = max(worst, abs(abs(gamma) - np.pi * (1.0 - np.cos(theta))))
    fr = frame_trajectory(rotating_cone(theta=np.pi / 3), 8.0, 2048)
    rng = np.random.default_rng(1)
    chi = np.cumsum(rng.normal(scale=0.01, size=len(fr.grid)))
    twist = abs(_holonomy(fr.states * np.exp(1j * chi)[:, None, None], 0)
                - _holonomy(fr.states, 0))
    ok = worst < 1e-3 and twist < 1e-12
    check(6, ok, f"max |gamma| error vs half solid angle {worst:.2e}, "
                 f"gauge-twist change {twist:.2e}")


def test_criterion_7_riemann_lebesgue_lab():
    worst = 0.0
    for T in (8.0, 16.0, 32.0, 64.0, 128.0, 256.0):
        n = max(8192, int(np.ceil(256.0 * T)))
        n += (-n) % 4
        s = np.linspace(0.0, 1.0, n + 1)
        num = abs(complex(cumulative_simpson(np.exp(1j * T * s), s[1] - s[0])[-1]))
        worst = max(worst, abs(num - abs(np.exp(1j * T) - 1.0) / T))
    chain = appendix_chain(lambda s: s, epsilon=1e-2, M=1.0)
    ok = worst < 1e-10 and chain.within_epsilon
    check(7, ok, f"closed-form residual {worst:.2e}; appendix chain p={chain.pieces}, "
                 f"T*={chain.T_star:.0f}, integral {chain.integral_at_T_star:.2e} < 1e-2: "
                 f"{chain.within_epsilon}")


def test_criterion_8_formalism_gap():
    t_grid = (8.0, 16.0, 32.0, 64.0)
    lz = formalism_gap(landau_zener(**LZ), t_grid)
    flat = formalism_gap(constant(np.diag([1.0, -1.0]).astype(complex)), t_grid)
    ok = (lz.w_convergence.verdict == "vanishes"
          and lz.dW_magnitude.verdict == "persists"
          and flat.w_convergence.verdict == "vanishes"
          and flat.dW_magnitude.verdict == "vanishes")
    check(8, ok, f"LZ ({lz.w_convergence.verdict}, {lz.dW_magnitude.verdict}); "
                 f"zero-coupling ({flat.w_convergence.verdict}, "
                 f"{flat.dW_magnitude.verdict})")


def test_criterion_9_determinism(tmp_path):
    diffs = []
    for name in builtin_scenario_names():
        path = builtin_scenario_path(name)
        outs = []
        for rep in ("a", "b"):
            out = tmp_path / f"{name}_{rep}"
            code = main(["run", path, "--output", str(out)])
            assert code == 0, f"{name} exited {code}"
            outs.append((out / "report.json").read_bytes())
        if outs[0] != outs[1]:
            diffs.append(name)
    check(9, not diffs, f"{len(builtin_scenario_names())} built-in scenarios "
                        f"byte-identical on rerun" +
                        (f"; diffs: {diffs}" if diffs else ""))
