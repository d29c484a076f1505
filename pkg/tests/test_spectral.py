import numpy as np
import pytest

from aqt.errors import DegenerateSpectrum
from aqt.hamiltonians import SIGMA_X, SIGMA_Z, custom_polynomial, landau_zener
from aqt.spectral import (coupling_trajectory, frame_trajectory, spectral_frame)


def test_frames_are_eigenframes():
    fam = landau_zener()
    fr = frame_trajectory(fam, 4.0, 256)
    h = fam.grid_values(fr.grid, 4.0)
    resid = np.max(np.abs(np.einsum("tab,tbn->tan", h, fr.states)
                          - fr.states * fr.energies[:, None, :]))
    assert resid < 1e-12
    assert np.all(np.diff(fr.energies, axis=1) > 0)


def test_gauge_chain_overlaps_real_positive():
    fam = landau_zener()
    fr = frame_trajectory(fam, 4.0, 256)
    ov = np.einsum("tan,tan->tn", fr.states[:-1].conj(), fr.states[1:])
    assert np.max(np.abs(ov.imag)) < 1e-12
    assert np.min(ov.real) > 0.9


def test_single_frame_matches_trajectory():
    fam = landau_zener()
    fr = frame_trajectory(fam, 4.0, 128)
    single = spectral_frame(fam, 0.0, 4.0)
    assert np.max(np.abs(single.energies - fr.energies[0])) < 1e-13
    assert np.max(np.abs(single.states - fr.states[0])) < 1e-12


def test_coupling_peak_landau_zener():
    # |<0|d_s|1>| = v*delta / (delta^2 + v^2 (2s-1)^2), peak v/delta at s = 1/2
    fam = landau_zener(delta=1.0, v=2.0)
    fr = frame_trajectory(fam, 8.0, 1024)
    m = coupling_trajectory(fr)
    peak = np.max(np.abs(m[:, 0, 1]))
    assert abs(peak - 2.0) < 1e-10
    s = fr.grid
    exact = 2.0 / (1.0 + 4.0 * (2.0 * s - 1.0) ** 2)
    assert np.max(np.abs(np.abs(m[:, 0, 1]) - exact)) < 1e-9


def test_coupling_matches_finite_difference():
    fam = landau_zener()
    fr = frame_trajectory(fam, 4.0, 2048)
    m = coupling_trajectory(fr)
    ds = fr.grid[1] - fr.grid[0]
    dv = (fr.states[2:] - fr.states[:-2]) / (2.0 * ds)
    fd = np.einsum("taj,tak->tjk", fr.states[1:-1].conj(), dv)
    assert np.max(np.abs(m[1:-1] - fd)) < 1e-4


def test_diagonal_connection_is_imaginary():
    fam = landau_zener()
    fr = frame_trajectory(fam, 4.0, 512)
    m = coupling_trajectory(fr)
    diag = m[:, [0, 1], [0, 1]]
    assert np.max(np.abs(diag.real)) < 1e-15


def test_degenerate_spectrum_raises():
    fam = custom_polynomial([SIGMA_Z], [[{"c": -1.0}, {"c": 2.0, "s_pow": 1}]])
    with pytest.raises(DegenerateSpectrum):
        frame_trajectory(fam, 4.0, 128)


def test_crossing_location_reported():
    fam = custom_polynomial([SIGMA_Z], [[{"c": -1.0}, {"c": 2.0, "s_pow": 1}]])
    with pytest.raises(DegenerateSpectrum) as err:
        frame_trajectory(fam, 4.0, 128)
    assert err.value.s is not None and abs(err.value.s - 0.5) < 0.02


def test_gapped_two_level_stays_smooth():
    fam = custom_polynomial(
        [SIGMA_Z, SIGMA_X],
        [[{"c": -1.0}, {"c": 2.0, "s_pow": 1}], [{"c": 0.3}]])
    fr = frame_trajectory(fam, 4.0, 512)
    assert fr.gap_min > 0.5
    jumps = np.max(np.abs(np.diff(fr.states, axis=0)))
    assert jumps < 0.05
