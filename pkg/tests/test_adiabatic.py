import numpy as np
import pytest

from aqt.adiabatic import (adiabatic_state, berry_phase, connection_diagonal,
                           infidelity)
from aqt.errors import NotClosedLoop, NotNormalized
from aqt.evolution import integrate_schrodinger, resolve_grid
from aqt.hamiltonians import constant, landau_zener, rotating_cone
from aqt.spectral import frame_trajectory


def test_infidelity_basics():
    e0 = np.array([1.0, 0.0])
    e1 = np.array([0.0, 1.0])
    assert infidelity(e0, e0) == 0.0
    assert infidelity(e0, 1j * e0) == 0.0  # phase-blind
    assert abs(infidelity(e0, e1) - 1.0) < 1e-15
    mix = np.array([1.0, 1.0]) / np.sqrt(2.0)
    assert abs(infidelity(e0, mix) - (1.0 - 1.0 / np.sqrt(2.0))) < 1e-12


def test_infidelity_rejects_unnormalized():
    with pytest.raises(NotNormalized):
        infidelity(np.array([2.0, 0.0]), np.array([1.0, 0.0]))


def test_adiabatic_state_constant_hamiltonian():
    fam = constant(np.diag([-1.0, 1.0]).astype(complex))
    T = 8.0
    fr = frame_trajectory(fam, T, 512)
    psi = integrate_schrodinger(fam, T, fr.states[0][:, 0], N=512)
    approx = adiabatic_state(fr, 0, 512)
    # no coupling at all: approximation is exact up to integrator phase error
    assert np.max(np.abs(approx.state - psi.values[-1])) < 1e-7
    assert abs(approx.dynamical_phase - (-T)) < 1e-12
    assert abs(approx.geometric_factor - 1.0) < 1e-12


def test_adiabatic_state_level_range():
    fam = landau_zener()
    fr = frame_trajectory(fam, 4.0, 128)
    with pytest.raises(ValueError):
        adiabatic_state(fr, 5, 0)


def test_connection_diagonal_small_in_transport_gauge():
    fam = landau_zener()
    fr = frame_trajectory(fam, 4.0, 1024)
    conn = connection_diagonal(fr)
    assert np.max(np.abs(conn.real)) < 1e-15
    assert np.max(np.abs(conn.imag)) < 1e-6


@pytest.mark.parametrize("theta,level,expected", [
    (np.pi / 2, 0, np.pi),             # solid angle 2 pi, lower level
    (np.pi / 2, 1, -np.pi),
    (np.pi / 3, 1, -np.pi / 2),        # solid angle pi, upper level
    (np.pi / 6, 0, np.pi * (1.0 - np.cos(np.pi / 6))),
])
def test_berry_phase_cone(theta, level, expected):
    fam = rotating_cone(omega0=1.0, theta=theta)
    fr = frame_trajectory(fam, 8.0, 2048)
    rep = berry_phase(fr, level)
    # +pi and -pi are the same point on the circle
    diff = abs((rep.berry_phase - expected + np.pi) % (2 * np.pi) - np.pi)
    assert diff < 1e-4
    assert rep.estimated_error < 1e-4


def test_berry_phase_gauge_invariance():
    from aqt.adiabatic import _holonomy
    fam = rotating_cone(omega0=1.0, theta=np.pi / 3)
    fr = frame_trajectory(fam, 8.0, 1024)
    base = _holonomy(fr.states, 0)
    rng = np.random.default_rng(0)
    chi = np.cumsum(rng.normal(scale=0.02, size=len(fr.grid)))
    twisted = fr.states * np.exp(1j * chi)[:, None, None]
    assert abs(_holonomy(twisted, 0) - base) < 1e-12


def test_berry_phase_needs_closed_loop():
    fam = landau_zener()
    fr = frame_trajectory(fam, 4.0, resolve_grid(fam, 4.0, 128))
    with pytest.raises(NotClosedLoop):
        berry_phase(fr, 0)
