"""Adiabatic approximation states, phases, and fidelity metrics.

The adiabatic state combines the exact dynamical phase T int E_n ds', the
geometric factor exp(-int <n|d_s n> ds'), and the gauge-fixed instantaneous
eigenvector.  The Berry phase is computed as a discrete (Pancharatnam)
holonomy, the product of consecutive frame overlaps closed onto the initial
state: gauge-invariant by construction and immune to phase unwrapping.

Sign convention: gamma is the phase with which the parallel-transported
state returns, |n(1)> = e^{i gamma} |n(0)>.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrum, NotClosedLoop, NotNormalized
from .numerics import EPS_GAP, cumulative_simpson
from .spectral import FrameTrajectory, coupling_trajectory


@dataclass
class AdiabaticState:
    s: float
    T: float
    n: int
    dynamical_phase: float       # T int_0^s E_n ds'  [rad]
    geometric_factor: complex    # exp(-int_0^s <n|d_s n> ds'), unimodular
    state: np.ndarray


@dataclass
class PhaseReport:
    loop: str
    berry_phase: float           # rad, in (-pi, pi]
    discretization: int
    estimated_error: float


def infidelity(a, b):
    """1 - |<a|b>|: global-phase-insensitive distance of normalized states."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    for v in (a, b):
        if abs(np.linalg.norm(v) - 1.0) > 1e-6:
            raise NotNormalized(f"state norm {np.linalg.norm(v):.8f} is not 1")
    return float(min(max(1.0 - abs(np.vdot(a, b)), 0.0), 1.0))


def connection_diagonal(frames: FrameTrajectory):
    """<n|d_s n> on the grid (purely imaginary), shape (N+1, d)."""
    m = coupling_trajectory(frames, np.zeros_like(frames.states))
    d = frames.dim
    return m[:, np.arange(d), np.arange(d)]


def adiabatic_state(frames: FrameTrajectory, n, s_index):
    """The approximation state at grid point s_index for level n."""
    if not 0 <= n < frames.dim:
        raise ValueError(f"level {n} out of range for dim {frames.dim}")
    if frames.gap_min < EPS_GAP:
        raise DegenerateSpectrum("frames carry a degenerate spectrum")
    ds = frames.grid[1] - frames.grid[0]
    theta = frames.phase_integrals()[s_index, n]
    conn = connection_diagonal(frames)[:, n]
    geo = np.exp(-cumulative_simpson(conn, ds)[s_index])
    dyn = frames.T * theta
    state = np.exp(-1j * dyn) * geo * frames.states[s_index][:, n]
    return AdiabaticState(s=float(frames.grid[s_index]), T=frames.T, n=n,
                          dynamical_phase=float(dyn), geometric_factor=complex(geo),
                          state=state)


def _wrap_phase(g):
    """Map to the interval (-pi, pi]."""
    g = (g + np.pi) % (2.0 * np.pi) - np.pi
    return g + 2.0 * np.pi if g <= -np.pi else g


def _holonomy(states, n):
    """-arg of the Pancharatnam product around the closed chain for level n."""
    v = states[:, :, n]
    overlaps = np.einsum("ta,ta->t", v[:-1].conj(), v[1:])
    closing = np.vdot(v[-1], v[0])
    total = np.angle(overlaps).sum() + np.angle(closing)
    return _wrap_phase(-total)


def berry_phase(frames: FrameTrajectory, n=0):
    """Discrete-holonomy Berry phase of level n around a closed loop."""
    if not frames.closed_loop:
        raise NotClosedLoop("Berry phase needs a closed-loop family (H(0) = H(1))")
    if frames.gap_min < EPS_GAP:
        raise DegenerateSpectrum("frames carry a degenerate spectrum")
    gamma = _holonomy(frames.states, n)
    coarse = _holonomy(frames.states[::2], n)
    err = abs(_wrap_phase(gamma - coarse))
    name = frames.family.name if frames.family is not None else "loop"
    return PhaseReport(loop=name, berry_phase=float(gamma),
                       discretization=frames.n_steps, estimated_error=float(err))
