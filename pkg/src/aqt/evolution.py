"""Exact dynamics and the integral-formalism objects.

Covers the scaled-time Schrödinger integrator (d_s psi = -i T H psi), the
full propagator U(s, T), the adiabatic transformation A(s, T) peeling off
frame rotation and dynamical phase, the slow-dynamics kernel K_T(s) with its
diagonal/off-diagonal split, the Volterra solution W_T(s) = I - int K W, and
an ordinary-exponential diagnostic exp(-int K) that is reported but never
asserted (it requires a commuting kernel).

All grids are uniform in s; the default grid size scales linearly with T so
that the oscillatory phase exp(i T int dE) stays resolved.
"""

import threading
from dataclasses import dataclass

import numpy as np

from .errors import (GridMismatch, NormDrift, SolverDivergence,
                     StepSizeTooLarge)
from .numerics import cumulative_simpson, matrix_exp
from .spectral import FrameTrajectory, coupling_trajectory


@dataclass
class Trajectory:
    """State (psi/phi) or operator (U/W) values on a uniform s-grid."""
    T: float
    grid: np.ndarray
    values: np.ndarray
    kind: str

    @property
    def n_steps(self):
        return len(self.grid) - 1

    def at(self, s):
        i = int(round(float(s) * self.n_steps))
        if abs(float(s) * self.n_steps - i) > 1e-9:
            raise GridMismatch(f"s={s} is not a grid point of this trajectory")
        return self.values[i]


@dataclass
class KernelSample:
    s: float
    T: float
    K: np.ndarray
    K1: np.ndarray
    K2: np.ndarray


@dataclass
class KernelTrajectory:
    """K_T(s) on the grid, split into diagonal K1 and oscillatory K2."""
    T: float
    grid: np.ndarray
    K1: np.ndarray
    K2: np.ndarray

    @property
    def K(self):
        return self.K1 + self.K2

    def sample(self, i):
        return KernelSample(float(self.grid[i]), self.T,
                            self.K1[i] + self.K2[i], self.K1[i], self.K2[i])


def resolve_grid(family, T, N=None):
    """Grid size resolving the fast phase: N = max(2048, 64 T dE_max).

    An explicitly requested N is respected (minimum 64); the default is
    rounded up to a multiple of 512 so probe points align across grids.
    """
    if N is not None:
        n = int(N)
        if n < 64:
            raise ValueError("grids need N >= 64")
        return n
    de = family.max_level_spread(T)
    n = max(2048, int(np.ceil(64.0 * T * de)))
    return n + (-n) % 512


def _rk4_step_matrices(gen, h):
    """One-step transfer matrices for d_s y = G(s) y.

    gen holds G at step edges and midpoints, shape (2M+1, d, d); returns the
    stack of M matrices mapping y_i to y_{i+1} with classical 4th-order steps.
    """
    f1 = gen[0:-1:2]
    f2 = gen[1::2]
    f3 = gen[2::2]
    d = gen.shape[-1]
    eye = np.eye(d)
    k1 = f1
    k2 = f2 @ (eye + 0.5 * h * k1)
    k3 = f2 @ (eye + 0.5 * h * k2)
    k4 = f3 @ (eye + h * k3)
    return eye + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _check_step_size(h_grid, T, N):
    hmax = float(np.max(np.linalg.norm(h_grid, axis=(1, 2))))
    if T / N > 0.1 / max(hmax, 1e-300):
        raise StepSizeTooLarge(
            f"T/N = {T / N:.3e} exceeds 0.1/||H||_max = {0.1 / hmax:.3e}; increase N")


def _schrodinger_steps(family, T, N):
    fine = np.linspace(0.0, 1.0, 2 * N + 1)
    h_fine = family.grid_values(fine, T)
    _check_step_size(h_fine, T, N)
    return _rk4_step_matrices(-1j * T * h_fine, 1.0 / N)


def integrate_schrodinger(family, T, psi0, N=None):
    """Solve i (1/T) d_s psi = H(s, T) psi on [0, 1] with RK4 steps."""
    psi0 = np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-10:
        raise NormDrift("initial state is not normalized")
    N = resolve_grid(family, T, N)
    steps = _schrodinger_steps(family, T, N)
    values = np.empty((N + 1, family.dim), dtype=complex)
    values[0] = psi0
    for i in range(N):
        values[i + 1] = steps[i] @ values[i]
    drift = float(np.max(np.abs(np.linalg.norm(values, axis=1) - 1.0)))
    if drift > 1e-6:
        raise NormDrift(f"norm drift {drift:.3e} exceeds 1e-6; integration invalid")
    return Trajectory(T=T, grid=np.linspace(0.0, 1.0, N + 1), values=values, kind="psi")


def propagator(family, T, N=None):
    """Evolution operator U(s, T) from U(0) = I; matrix form of the integrator."""
    N = resolve_grid(family, T, N)
    steps = _schrodinger_steps(family, T, N)
    d = family.dim
    values = np.empty((N + 1, d, d), dtype=complex)
    values[0] = np.eye(d)
    for i in range(N):
        values[i + 1] = steps[i] @ values[i]
    u = values[-1]
    drift = float(np.max(np.abs(u.conj().T @ u - np.eye(d))))
    if drift > 1e-7:
        raise NormDrift(f"unitarity drift {drift:.3e} exceeds 1e-7")
    return Trajectory(T=T, grid=np.linspace(0.0, 1.0, N + 1), values=values, kind="U")


def propagator_oracle(base):
    """Cached (s, T) -> U(s, T) map backed by the exact integrator.

    Accepts a scalar s or a uniform grid covering [0, 1]; trajectories are
    cached per (T, grid size) behind a lock so concurrent readers are safe.
    """
    cache = {}
    lock = threading.Lock()

    def traj(T, n_out):
        """U on the n_out-step grid, integrated at full resolution."""
        n_res = resolve_grid(base, T)
        n_int = n_out * int(np.ceil(n_res / n_out))  # caller points stay on-grid
        key = (float(T), n_out)
        with lock:
            hit = cache.get(key)
        if hit is None:
            hit = propagator(base, T, N=n_int).values[::n_int // n_out]
            with lock:
                cache[key] = hit
        return hit

    def oracle(s, T):
        if np.ndim(s) == 0:
            n = resolve_grid(base, T)
            x = float(s) * n
            i = int(round(x))
            if abs(x - i) < 1e-9:
                return traj(T, n)[i]
            return _propagator_to(base, T, float(s))
        s = np.asarray(s, dtype=float)
        n = len(s) - 1
        ref = np.linspace(0.0, 1.0, n + 1)
        if np.max(np.abs(s - ref)) < 1e-12:
            return traj(T, n)
        return np.stack([oracle(float(x), T) for x in s])

    return oracle


def _propagator_to(base, T, s):
    """One-off integration of U from 0 to an off-grid point s."""
    if s <= 0.0:
        return np.eye(base.dim, dtype=complex)
    n = max(64, int(np.ceil(s * resolve_grid(base, T))))
    fine = np.linspace(0.0, s, 2 * n + 1)
    steps = _rk4_step_matrices(-1j * T * base.grid_values(fine, T), s / n)
    u = np.eye(base.dim, dtype=complex)
    for i in range(n):
        u = steps[i] @ u
    return u


def adiabatic_transform(psi_traj, frames):
    """phi(s) = A'(s, T) psi(s) with A = sum_n e^{-i T Theta_n} |n(s)><n(0)|.

    Returned values are the components of phi in the fixed |n(0)> basis,
    the same basis in which K_T and W_T are represented.
    """
    if frames.T != psi_traj.T:
        raise GridMismatch(f"trajectory T={psi_traj.T} but frames T={frames.T}")
    if len(frames.grid) != len(psi_traj.grid) or \
            float(np.max(np.abs(frames.grid - psi_traj.grid))) > 1e-12:
        raise GridMismatch("state trajectory and frames live on different grids")
    theta = frames.phase_integrals()
    # components of A' psi in the fixed |n(0)> basis, matching K and W
    proj = np.einsum("tan,ta->tn", frames.states.conj(), psi_traj.values)
    phi = np.exp(1j * psi_traj.T * theta) * proj
    return Trajectory(T=psi_traj.T, grid=psi_traj.grid, values=phi, kind="phi")


def adiabatic_transform_operator(frames, i):
    """The unitary A(s_i, T) itself, mainly for verification."""
    theta = frames.phase_integrals()[i]
    phases = np.exp(-1j * frames.T * theta)
    return (frames.states[i] * phases) @ frames.states[0].conj().T


def kernel_trajectory(frames: FrameTrajectory, dh_stack=None):
    """K_T(s) on the grid, in the |n(0)> basis, split as K1 + K2."""
    m = coupling_trajectory(frames, dh_stack)
    theta = frames.phase_integrals()
    phase = np.exp(1j * frames.T * (theta[:, :, None] - theta[:, None, :]))
    d = frames.dim
    idx = np.arange(d)
    k1 = np.zeros_like(m)
    k1[:, idx, idx] = m[:, idx, idx]
    k2 = phase * m
    k2[:, idx, idx] = 0.0
    return KernelTrajectory(T=frames.T, grid=frames.grid, K1=k1, K2=k2)


def build_kernel(frames, dh_values, s_index):
    """KernelSample at one grid point (module surface over kernel_trajectory)."""
    return kernel_trajectory(frames, dh_values).sample(s_index)


def solve_volterra(kernel, N=None):
    """March W(s) = I - int_0^s K W by the product-trapezoidal rule.

    Each step solves the implicit d x d system (I + h/2 K_i) W_i = rhs; a
    final Picard sweep re-evaluates the discrete integral equation and must
    reproduce the marched solution, else the kernel is under-resolved.
    """
    k = kernel.K
    n = len(kernel.grid) - 1
    if N is not None and N != n:
        raise GridMismatch(f"kernel sampled on {n} steps but N={N} requested")
    h = float(kernel.grid[1] - kernel.grid[0])
    d = k.shape[-1]
    if float(np.max(np.linalg.norm(k, axis=(1, 2)))) * h >= 1.0:
        raise SolverDivergence("h*||K|| >= 1: kernel under-resolved for the implicit step")
    eye = np.eye(d, dtype=complex)
    w = np.empty((n + 1, d, d), dtype=complex)
    p = np.empty_like(w)                      # P_i = K_i W_i
    w[0] = eye
    p[0] = k[0]
    acc = 0.5 * p[0]                          # h-weighted interior sum
    for i in range(1, n + 1):
        rhs = eye - h * acc
        w[i] = np.linalg.solve(eye + 0.5 * h * k[i], rhs)
        p[i] = k[i] @ w[i]
        acc = acc + p[i]
    # Picard sweep: the trapezoid of K W must give back W
    cum = np.cumsum(p, axis=0)
    cum = h * (cum - 0.5 * p[0] - 0.5 * p)
    sweep = eye - cum
    delta = float(np.max(np.abs(sweep - w)))
    if delta > 1e-6 * float(np.max(np.abs(w))):
        raise SolverDivergence(f"Picard sweep moved the solution by {delta:.3e}")
    return Trajectory(T=kernel.T, grid=kernel.grid, values=sweep, kind="W")


def solve_w_ode(kernel):
    """d_s W = -K W with the 4th-order stepper, the independent cross-check.

    Uses every grid point of the kernel as either a step edge or midpoint,
    so the step count is half the kernel resolution.
    """
    n = len(kernel.grid) - 1
    if n % 2:
        raise GridMismatch("ODE cross-check needs an even number of kernel steps")
    steps = _rk4_step_matrices(-kernel.K, 2.0 / n)
    d = kernel.K1.shape[-1]
    values = np.empty((n // 2 + 1, d, d), dtype=complex)
    values[0] = np.eye(d)
    for i in range(n // 2):
        values[i + 1] = steps[i] @ values[i]
    return Trajectory(T=kernel.T, grid=kernel.grid[::2], values=values, kind="W")


def solve_phi_ode(kernel, phi0):
    """d_s phi = -K phi, state version of the cross-check."""
    n = len(kernel.grid) - 1
    if n % 2:
        raise GridMismatch("ODE cross-check needs an even number of kernel steps")
    steps = _rk4_step_matrices(-kernel.K, 2.0 / n)
    values = np.empty((n // 2 + 1, len(phi0)), dtype=complex)
    values[0] = np.asarray(phi0, dtype=complex)
    for i in range(n // 2):
        values[i + 1] = steps[i] @ values[i]
    return Trajectory(T=kernel.T, grid=kernel.grid[::2], values=values, kind="phi")


def ordinary_exponential_diagnostic(kernel, s_index, w_reference=None):
    """exp(-int_0^s K) and its distance to the Volterra solution.

    The exponential form is only exact for commuting kernels, so the
    discrepancy is reported, never asserted.
    """
    h = float(kernel.grid[1] - kernel.grid[0])
    int_k = cumulative_simpson(kernel.K, h)[s_index]
    w_exp = matrix_exp(-int_k)
    if w_reference is None:
        w_reference = solve_volterra(kernel).values[s_index]
    return w_exp, float(np.linalg.norm(w_exp - w_reference))
