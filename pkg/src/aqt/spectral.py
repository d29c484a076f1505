"""Instantaneous spectral frames with smooth gauge fixing along s.

A frame trajectory holds, for one fixed T, the eigenvalues and eigenvectors
of H(s, T) on a uniform s-grid.  Eigenvector phases are chained by discrete
parallel transport: each vector is rotated so its overlap with the previous
frame is real and positive, which drives the diagonal connection <n|d_s n>
towards zero and pushes all geometric content into the end-of-loop holonomy.
Levels are labeled by ascending eigenvalue; adjacent gaps below EPS_GAP are
an error, never silently reordered.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DegenerateSpectrum
from .numerics import EPS_GAP, cumulative_simpson, eigh_stack, hermitian_eig


@dataclass
class SpectralFrame:
    s: float
    T: float
    energies: np.ndarray        # ascending, shape (d,)
    states: np.ndarray          # orthonormal columns, shape (d, d)
    gap_min: float


@dataclass
class FrameTrajectory:
    """Gauge-fixed frames on a uniform s-grid for one fixed T.

    energies has shape (N+1, d); states has shape (N+1, d, d) with
    states[i][:, n] the n-th eigenvector at s = grid[i].
    """
    T: float
    grid: np.ndarray
    energies: np.ndarray
    states: np.ndarray
    gap_min: float
    closed_loop: bool = False
    family: Optional[object] = None
    _phase_integrals: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def dim(self):
        return self.energies.shape[1]

    @property
    def n_steps(self):
        return len(self.grid) - 1

    def frame(self, i):
        e = self.energies[i]
        gaps = np.diff(e)
        return SpectralFrame(float(self.grid[i]), self.T, e, self.states[i],
                             float(gaps.min()) if gaps.size else np.inf)

    def phase_integrals(self):
        """Theta_n(s) = integral_0^s E_n ds', cumulative Simpson, cached."""
        if self._phase_integrals is None:
            ds = self.grid[1] - self.grid[0]
            self._phase_integrals = cumulative_simpson(self.energies, ds)
        return self._phase_integrals


def _absolute_gauge_phases(states0):
    """Unit phases making each first-frame vector's largest entry real positive."""
    idx = np.argmax(np.abs(states0), axis=0)
    lead = states0[idx, np.arange(states0.shape[1])]
    return np.conj(lead) / np.abs(lead)


def _check_gaps(energies, grid, T):
    gaps = np.diff(energies, axis=1)
    gmin = float(gaps.min())
    if gmin < EPS_GAP:
        i = int(np.argmin(gaps.min(axis=1)))
        raise DegenerateSpectrum(
            f"adjacent gap {gmin:.3e} below {EPS_GAP:.0e} at s={grid[i]:.6f}, T={T}",
            s=float(grid[i]), T=T)
    return gmin


def spectral_frame(family, s, T, prev=None):
    """One gauge-fixed frame; `prev`, if given, anchors the phase chain."""
    h = family.evaluate(s, T)
    w, v = hermitian_eig(h)
    gaps = np.diff(w)
    gap_min = float(gaps.min()) if gaps.size else np.inf
    if gap_min < EPS_GAP:
        raise DegenerateSpectrum(
            f"adjacent gap {gap_min:.3e} below {EPS_GAP:.0e} at s={s}, T={T}", s=s, T=T)
    if prev is None:
        v = v * _absolute_gauge_phases(v)
    else:
        ov = np.einsum("an,an->n", prev.states.conj(), v)
        v = v * (np.conj(ov) / np.abs(ov))
    return SpectralFrame(s, T, w, v, gap_min)


def frame_trajectory(family, T, N):
    """Sweep s = 0, 1/N, ..., 1 with chained parallel-transport gauge fixing."""
    if N < 64:
        raise ValueError("frame trajectories need N >= 64")
    grid = np.linspace(0.0, 1.0, N + 1)
    h = family.grid_values(grid, T)
    w, v = eigh_stack(h)
    gap_min = _check_gaps(w, grid, T)
    # per-level overlaps with the previous raw frame
    ov = np.einsum("tan,tan->tn", v[:-1].conj(), v[1:])
    steps = np.conj(ov) / np.abs(ov)
    phases = np.empty((N + 1, w.shape[1]), dtype=complex)
    phases[0] = _absolute_gauge_phases(v[0])
    phases[1:] = phases[0] * np.cumprod(steps, axis=0)
    v = v * phases[:, None, :]
    return FrameTrajectory(T=T, grid=grid, energies=w, states=v, gap_min=gap_min,
                           closed_loop=bool(family.closed_loop), family=family)


def coupling_matrix(frame, dh, prev=None, nxt=None, ds=None):
    """Couplings M_jk = <j|d_s|k> at one frame.

    Off-diagonal entries come from the gap formula <j|dH|k> / (E_k - E_j),
    which avoids differentiating eigenvectors.  Diagonal entries use the
    gauge-fixed finite difference of neighbouring frames when available;
    only the imaginary part is kept (exact for unit-norm eigenvectors).
    """
    w, v = frame.energies, frame.states
    num = v.conj().T @ dh @ v
    denom = w[None, :] - w[:, None]          # E_k - E_j
    np.fill_diagonal(denom, 1.0)
    m = num / denom
    np.fill_diagonal(m, 0.0)
    if ds is not None and (prev is not None or nxt is not None):
        lo = prev.states if prev is not None else frame.states
        hi = nxt.states if nxt is not None else frame.states
        span = ds * ((prev is not None) + (nxt is not None))
        dv = (hi - lo) / span
        diag = np.einsum("an,an->n", v.conj(), dv)
        m[np.arange(len(w)), np.arange(len(w))] = 1j * diag.imag
    return m


def coupling_trajectory(traj, dh_stack=None):
    """Coupling matrices M(s) on the whole grid, shape (N+1, d, d)."""
    if dh_stack is None:
        if traj.family is None:
            raise ValueError("need dh_stack or a trajectory that remembers its family")
        dh_stack = traj.family.derivative_grid(traj.grid, traj.T)
    w, v = traj.energies, traj.states
    num = np.einsum("taj,tab,tbk->tjk", v.conj(), dh_stack, v)
    denom = w[:, None, :] - w[:, :, None]    # E_k - E_j
    d = w.shape[1]
    denom[:, np.arange(d), np.arange(d)] = 1.0
    m = num / denom
    m[:, np.arange(d), np.arange(d)] = 0.0
    # diagonal connection from gauge-fixed central differences
    ds = traj.grid[1] - traj.grid[0]
    dv = np.empty_like(v)
    dv[1:-1] = (v[2:] - v[:-2]) / (2.0 * ds)
    dv[0] = (v[1] - v[0]) / ds
    dv[-1] = (v[-1] - v[-2]) / ds
    diag = np.einsum("tan,tan->tn", v.conj(), dv)
    m[:, np.arange(d), np.arange(d)] = 1j * diag.imag
    return m
