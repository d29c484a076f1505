"""Numerical audits of the sufficient conditions and the formalism gap.

Every analytic statement of the form "lim_{T -> inf} (quantity) = 0" is made
machine-checkable by sampling the quantity on a geometric T-grid, fitting a
log-log decay slope, and classifying the series:

    vanishes      slope <= -0.5 and the last value < first/4
    persists      slope >= -0.1
    inconclusive  otherwise

The thresholds separate the analytic decay classes 1/T and 1/sqrt(T) from
non-decay with margin; they are a deliberate choice of this package, not a
quantity from the underlying theory.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateSpectrum, HypothesisAViolated, PairEqual
from .evolution import kernel_trajectory, resolve_grid, solve_volterra
from .numerics import EPS_GAP, cumulative_simpson, loglog_slope
from .spectral import coupling_trajectory, frame_trajectory

DEFAULT_T_GRID = tuple(8.0 * 2 ** k for k in range(7))

_ZERO_FLOOR = 1e-13


@dataclass
class ConvergenceSeries:
    label: str
    T_values: np.ndarray
    values: np.ndarray
    slope: float
    slope_stderr: float
    verdict: str

    def as_dict(self):
        return {"label": self.label,
                "T_values": [float(t) for t in self.T_values],
                "values": [float(v) for v in self.values],
                "slope": self.slope, "slope_stderr": self.slope_stderr,
                "verdict": self.verdict}


def fit_series(label, T_values, values):
    """Classify a sampled limit quantity by its log-log decay slope."""
    T_values = np.asarray(T_values, dtype=float)
    values = np.asarray(values, dtype=float)
    if len(T_values) != len(values) or np.any(np.diff(T_values) <= 0):
        raise ValueError("T grid must be strictly increasing and match values")
    if np.max(values) <= _ZERO_FLOOR:
        return ConvergenceSeries(label, T_values, values, -np.inf, 0.0, "vanishes")
    slope, stderr = loglog_slope(T_values, np.maximum(values, 1e-16))
    if slope <= -0.5 and values[-1] < values[0] / 4.0:
        verdict = "vanishes"
    elif slope >= -0.1:
        verdict = "persists"
    else:
        verdict = "inconclusive"
    return ConvergenceSeries(label, T_values, values, slope, stderr, verdict)


def _phase_distance(a, b):
    """min over a unit phase of ||a - e^{i phi} b|| for unit vectors."""
    return np.sqrt(np.maximum(2.0 - 2.0 * np.abs(
        np.einsum("...a,...a->...", a.conj(), b)), 0.0))


# --- condition (b): T-convergence of the eigenframe -------------------------

def check_condition_b(family, T_grid=DEFAULT_T_GRID, N=1024, T_ref=None):
    """sup_s distance of the frame (and its s-derivative) to a reference frame.

    The reference is the frame trajectory at T_ref (default twice the largest
    audited T), standing in for the T -> inf limit.
    """
    T_grid = np.asarray(T_grid, dtype=float)
    if T_ref is None:
        T_ref = 2.0 * float(T_grid[-1])
    ref = frame_trajectory(family, T_ref, N)
    ds = ref.grid[1] - ref.grid[0]
    values = []
    for T in T_grid:
        fr = frame_trajectory(family, float(T), N)
        # per-level state distance, phase-minimized
        vt = np.moveaxis(fr.states, 2, 1)      # (t, level, component)
        vr = np.moveaxis(ref.states, 2, 1)
        state_sup = float(np.max(_phase_distance(vr, vt)))
        # align phases onto the reference, then finite-difference both
        ov = np.einsum("tna,tna->tn", vr.conj(), vt)
        vt = vt * (np.conj(ov) / np.maximum(np.abs(ov), 1e-300))[:, :, None]
        dvt = (vt[2:] - vt[:-2]) / (2.0 * ds)
        dvr = (vr[2:] - vr[:-2]) / (2.0 * ds)
        deriv_sup = float(np.max(np.linalg.norm(dvt - dvr, axis=2)))
        value = max(state_sup, deriv_sup)
        # sqrt(2 - 2|<a|b>|) amplifies roundoff to ~1e-8 for identical frames
        values.append(0.0 if value < 1e-6 else value)
    return fit_series(f"condition_b[{family.name}]", T_grid, values)


# --- condition (c): nonzero couplings ----------------------------------------

@dataclass
class ConditionCReport:
    max_coupling: dict     # (j, k) -> max_s |<j|d_s|k>|
    identically_zero: dict  # (j, k) -> bool

    def as_dict(self):
        return {"max_coupling": {f"{j},{k}": v for (j, k), v in self.max_coupling.items()},
                "identically_zero": {f"{j},{k}": v for (j, k), v
                                     in self.identically_zero.items()}}


def check_condition_c(frames, dh_stack=None, zero_tol=1e-10):
    """Maximum off-diagonal coupling per level pair; reported, not enforced."""
    m = coupling_trajectory(frames, dh_stack)
    d = frames.dim
    max_coupling, identically_zero = {}, {}
    for j in range(d):
        for k in range(d):
            if j == k:
                continue
            peak = float(np.max(np.abs(m[:, j, k])))
            max_coupling[(j, k)] = peak
            identically_zero[(j, k)] = peak < zero_tol
    return ConditionCReport(max_coupling, identically_zero)


# --- condition (d): decay of the oscillatory integral ------------------------

def _level_energies(family, T, N):
    grid = np.linspace(0.0, 1.0, N + 1)
    w = np.linalg.eigvalsh(family.grid_values(grid, T))
    return grid, w


def condition_d_integral(family, T, pair=(0, 1), N=None):
    """|int_0^s exp(i T int_0^s' (E_j - E_k))| on the resolved grid."""
    j, k = pair
    if j == k:
        raise PairEqual("condition (d) is defined for distinct levels only")
    N = resolve_grid(family, T, N)
    grid, w = _level_energies(family, T, N)
    diff = w[:, j] - w[:, k]
    if float(np.min(np.abs(diff))) < EPS_GAP:
        i = int(np.argmin(np.abs(diff)))
        raise DegenerateSpectrum(f"levels {pair} meet at s={grid[i]:.6f}, T={T}",
                                 s=float(grid[i]), T=T)
    ds = grid[1] - grid[0]
    phase = cumulative_simpson(diff, ds)
    integrand = np.exp(1j * T * phase)
    return grid, np.abs(cumulative_simpson(integrand, ds))


def check_condition_d(family, T_grid=DEFAULT_T_GRID, pair=(0, 1),
                      s_targets=(0.25, 0.5, 0.75, 1.0), N=None):
    """Decay of the oscillatory integral at fixed s targets over the T-grid."""
    T_grid = np.asarray(T_grid, dtype=float)
    values = []
    for T in T_grid:
        grid, mag = condition_d_integral(family, float(T), pair, N)
        n = len(grid) - 1
        idx = [int(round(t * n)) for t in s_targets]
        values.append(float(np.max(mag[idx])))
    return fit_series(f"condition_d[{family.name} pair={pair}]", T_grid, values)


# --- general Riemann-Lebesgue laboratory -------------------------------------

def _rl_grid(T, N=None):
    n = int(N) if N is not None else max(8192, int(np.ceil(256.0 * T)))
    n += (-n) % 4
    return np.linspace(0.0, 1.0, n + 1)


def _sample(f, s):
    out = f(s)
    if np.ndim(out) == 0:  # scalar-only callable
        out = np.array([f(x) for x in s])
    return np.asarray(out)


@dataclass
class RiemannLebesgueReport:
    product_series: ConvergenceSeries    # |int_0^1 g_T f|
    primitive_series: ConvergenceSeries  # sup_c |int_0^c g_T|  (hypothesis B)
    bound_M: float
    max_abs_g: float                     # hypothesis A witness

    def as_dict(self):
        return {"product_series": self.product_series.as_dict(),
                "primitive_series": self.primitive_series.as_dict(),
                "bound_M": self.bound_M, "max_abs_g": self.max_abs_g}


def riemann_lebesgue_check(g_family, f, T_grid=DEFAULT_T_GRID, M=1.0, N=None):
    """Verify |g_T| <= M, the decay of its primitives, and of int g_T f."""
    T_grid = np.asarray(T_grid, dtype=float)
    prim, prod, gmax = [], [], 0.0
    for T in T_grid:
        s = _rl_grid(float(T), N)
        ds = s[1] - s[0]
        g = np.asarray(g_family(float(T), s), dtype=complex)
        peak = float(np.max(np.abs(g)))
        gmax = max(gmax, peak)
        if peak > M * (1.0 + 1e-12) + 1e-12:
            raise HypothesisAViolated(f"|g_T| reaches {peak:.6f} > M = {M} at T={T}")
        prim.append(float(np.max(np.abs(cumulative_simpson(g, ds)))))
        fv = _sample(f, s)
        prod.append(float(np.abs(cumulative_simpson(g * fv, ds)[-1])))
    return RiemannLebesgueReport(
        product_series=fit_series("rl_product", T_grid, prod),
        primitive_series=fit_series("rl_primitive", T_grid, prim),
        bound_M=float(M), max_abs_g=gmax)


@dataclass
class UniformFamilyReport:
    sup_series: ConvergenceSeries        # sup_s |f_T - f|
    product_T_series: ConvergenceSeries  # |int g_T f_T|
    product_limit_series: ConvergenceSeries  # |int g_T f|
    bound_satisfied: bool                # |int g (f_T - f)| <= sup |f_T - f|
    shared_verdict: bool

    def as_dict(self):
        return {"sup_series": self.sup_series.as_dict(),
                "product_T_series": self.product_T_series.as_dict(),
                "product_limit_series": self.product_limit_series.as_dict(),
                "bound_satisfied": self.bound_satisfied,
                "shared_verdict": self.shared_verdict}


def uniform_family_check(f_T, f, g_family, T_grid=DEFAULT_T_GRID, N=None):
    """Uniformly convergent f_T may replace f inside the oscillatory integral."""
    T_grid = np.asarray(T_grid, dtype=float)
    sups, prod_t, prod_f = [], [], []
    bound_ok = True
    for T in T_grid:
        s = _rl_grid(float(T), N)
        ds = s[1] - s[0]
        g = np.asarray(g_family(float(T), s), dtype=complex)
        ft = np.asarray(f_T(float(T), s), dtype=complex)
        fv = _sample(f, s).astype(complex)
        sup = float(np.max(np.abs(ft - fv)))
        sups.append(sup)
        it = complex(cumulative_simpson(g * ft, ds)[-1])
        il = complex(cumulative_simpson(g * fv, ds)[-1])
        prod_t.append(abs(it))
        prod_f.append(abs(il))
        if abs(it - il) > sup + 1e-9:
            bound_ok = False
    st = fit_series("uniform_sup", T_grid, sups)
    pt = fit_series("product_with_f_T", T_grid, prod_t)
    pf = fit_series("product_with_f", T_grid, prod_f)
    return UniformFamilyReport(st, pt, pf, bound_ok, pt.verdict == pf.verdict)


# --- step-function approximation (the appendix construction) -----------------

@dataclass
class StepFunction:
    breakpoints: np.ndarray  # x_0 = 0 < ... < x_p = 1
    levels: np.ndarray       # y_1 .. y_p

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.clip(np.searchsorted(self.breakpoints, x, side="right") - 1,
                      0, len(self.levels) - 1)
        return self.levels[idx]


def step_approximate(f, p):
    """Uniform-breakpoint, midpoint-level step approximation with its L1 error."""
    if p < 1:
        raise ValueError("need at least one piece")
    breaks = np.linspace(0.0, 1.0, p + 1)
    mids = 0.5 * (breaks[:-1] + breaks[1:])
    levels = np.asarray(_sample(f, mids), dtype=float)
    # L1 error by Simpson on each half-piece: |f - level| is smooth there
    # whenever f is monotone through the midpoint
    err = 0.0
    for i in range(p):
        for a, b in ((breaks[i], mids[i]), (mids[i], breaks[i + 1])):
            x = np.linspace(a, b, 33)
            y = np.abs(np.asarray(_sample(f, x), dtype=float) - levels[i])
            err += float(cumulative_simpson(y, x[1] - x[0])[-1])
    return StepFunction(breaks, levels), err


@dataclass
class AppendixChainReport:
    epsilon: float
    M: float
    pieces: int
    l1_error: float
    T_star: float
    integral_at_T_star: float
    within_epsilon: bool

    def as_dict(self):
        return {"epsilon": self.epsilon, "M": self.M, "pieces": self.pieces,
                "l1_error": self.l1_error, "T_star": self.T_star,
                "integral_at_T_star": self.integral_at_T_star,
                "within_epsilon": self.within_epsilon}


def appendix_chain(f, epsilon, M=1.0, g_family=None):
    """Reproduce the step-function bound chain numerically.

    Picks the smallest power-of-two piece count p with L1 error below
    epsilon/(2M), predicts T* from the primitive bound 2/T per piece, and
    checks |int f g_T| < epsilon there.  Default g_T(s) = e^{i T s}.
    """
    if g_family is None:
        def g_family(T, s):
            return np.exp(1j * T * s)
    p = 1
    while True:
        phi, l1 = step_approximate(f, p)
        if l1 < epsilon / (2.0 * M):
            break
        p *= 2
        if p > 1 << 20:
            raise ValueError("step approximation did not reach the target L1 error")
    # |int phi g_T| <= sum_i |y_i| * 2/T  < epsilon/2  at T >= T_star
    t_star = float(np.ceil(4.0 * np.sum(np.abs(phi.levels)) / epsilon))
    s = _rl_grid(t_star)
    ds = s[1] - s[0]
    g = np.asarray(g_family(t_star, s), dtype=complex)
    val = float(np.abs(cumulative_simpson(g * _sample(f, s), ds)[-1]))
    return AppendixChainReport(epsilon=epsilon, M=M, pieces=p, l1_error=l1,
                               T_star=t_star, integral_at_T_star=val,
                               within_epsilon=val < epsilon)


# --- differential vs integral formalism gap ----------------------------------

@dataclass
class FormalismGapReport:
    w_convergence: ConvergenceSeries   # sup_s ||W_T - W_ref||, expected to vanish
    dW_magnitude: ConvergenceSeries    # sup_s ||K_T W_T||, persists when coupled

    def as_dict(self):
        return {"w_convergence": self.w_convergence.as_dict(),
                "dW_magnitude": self.dW_magnitude.as_dict()}


def _w_probe(family, T, N, probes):
    n = resolve_grid(family, T, N)
    fr = frame_trajectory(family, T, n)
    ker = kernel_trajectory(fr)
    w = solve_volterra(ker).values
    idx = (np.round(probes * n)).astype(int)
    dw = float(np.max(np.linalg.norm(ker.K @ w, axis=(1, 2))))
    return w[idx], dw


def formalism_gap(family, T_grid=DEFAULT_T_GRID, N=None, T_ref=None, probes=257):
    """The computable restatement of lim d_s W_T != d_s lim W_T.

    W_T itself converges (audited against a reference at T_ref), while its
    derivative, evaluated through -K_T W_T, keeps a finite magnitude whenever
    off-diagonal couplings are present.
    """
    T_grid = np.asarray(T_grid, dtype=float)
    if T_ref is None:
        T_ref = 2.0 * float(T_grid[-1])
    probe_s = np.linspace(0.0, 1.0, probes)
    w_ref, _ = _w_probe(family, float(T_ref), N, probe_s)
    conv, deriv = [], []
    for T in T_grid:
        w, dw = _w_probe(family, float(T), N, probe_s)
        conv.append(float(np.max(np.linalg.norm(w - w_ref, axis=(1, 2)))))
        deriv.append(dw)
    return FormalismGapReport(
        w_convergence=fit_series(f"w_convergence[{family.name}]", T_grid, conv),
        dW_magnitude=fit_series(f"dW_magnitude[{family.name}]", T_grid, deriv))
