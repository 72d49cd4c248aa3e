from dataclasses import replace

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pllhopf.errors import InvalidStep, TooShort
from pllhopf.hopf import points_at
from pllhopf.model import ModelParams, equilibrium, linear_coeffs
from pllhopf.normalform import PlanarCubic
from pllhopf.sim import (HistorySpec, Trajectory, amplitude_estimate, delay_grid, integrate_dde,
                         integrate_reduced)


def harmonic_error(max_step, t_end=20.0):
    pc = PlanarCubic(omega=1.0)
    tr = integrate_reduced(pc, 1.0, 0.0, t_end, max_step=max_step, rel_tol=1.0, abs_tol=1.0)
    t = tr.times
    exact = np.c_[np.cos(t), -np.sin(t)]
    return np.abs(tr.states - exact).max()


def test_reduced_harmonic_accuracy():
    pc = PlanarCubic(omega=2.0)
    tr = integrate_reduced(pc, 0.3, -0.1, 50.0)
    t = tr.times
    y1 = 0.3 * np.cos(2 * t) - 0.1 * np.sin(2 * t)
    y2 = -0.3 * np.sin(2 * t) - 0.1 * np.cos(2 * t)
    assert np.abs(tr.states - np.c_[y1, y2]).max() < 1e-6
    assert tr.t_final == pytest.approx(50.0)
    assert not tr.blowup


def test_reduced_order():
    e1, e2 = harmonic_error(0.2), harmonic_error(0.1)
    assert e1 / e2 >= 16.0


@pytest.mark.parametrize("a", [-0.5, 0.5])
def test_radial_cubic_closed_form(a):
    pc = PlanarCubic(omega=1.0, a30=a, a12=a, b21=a, b03=a)
    r0, t_end = 0.2, 10.0
    tr = integrate_reduced(pc, r0, 0.0, t_end, rel_tol=1e-10, abs_tol=1e-14)
    r = np.hypot(*tr.states.T)
    exact = r0 / np.sqrt(1.0 - 2.0 * a * r0 * r0 * tr.times)
    assert np.abs(r - exact).max() < 1e-8


def test_blowup_is_flagged():
    pc = PlanarCubic(omega=1.0, a30=1.0, a12=1.0, b21=1.0, b03=1.0)
    # r(t) blows up at t = 1 / (2 r0^2) = 12.5
    tr = integrate_reduced(pc, 0.2, 0.0, 100.0)
    assert tr.blowup
    assert 12.0 < tr.t_final < 12.501
    assert np.hypot(*tr.states[-1]) > 1e3 * 0.2


def test_sample_cap_decimates():
    tr = integrate_reduced(PlanarCubic(omega=1.0), 1.0, 0.0, 100.0, max_step=0.01, max_samples=1000)
    assert len(tr.times) <= 1000
    assert np.all(np.diff(tr.times) > 0)
    assert tr.times[-1] == pytest.approx(100.0)


def test_reduced_rejects_bad_steps():
    with pytest.raises(InvalidStep):
        integrate_reduced(PlanarCubic(omega=1.0), 1.0, 0.0, 10.0, max_step=0.0)
    with pytest.raises(InvalidStep):
        integrate_reduced(PlanarCubic(omega=1.0), 1.0, 0.0, -1.0)


@settings(max_examples=80, deadline=None)
@given(tau=st.floats(0.01, 50.0), dt=st.floats(1e-3, 1.0))
def test_delay_grid(tau, dt):
    h, n = delay_grid(tau, dt)
    assert n >= 2
    assert h <= dt * (1 + 1e-12)
    assert n * h == pytest.approx(tau, rel=1e-12)


def test_delay_grid_rejects_zero_delay():
    with pytest.raises(InvalidStep):
        delay_grid(0.0, 0.1)


def dominant_root(p, guess):
    eq = equilibrium(p)
    b0, bt = linear_coeffs(p, eq)
    f = lambda z: z * z + p.mu * z - b0 - bt * mpmath.exp(-z * p.tau)
    return complex(mpmath.findroot(f, mpmath.mpc(guess)))


def test_linear_growth_rate_matches_characteristic_root():
    base = ModelParams(K=1.05, mu=0.3)
    pt = next(q for q in points_at(base, 0) if q.branch_id == "w1j0")
    p = replace(base, tau=pt.tau + 0.3)
    lam = dominant_root(p, 1j * pt.omega)
    assert lam.real > 0
    tr = integrate_dde(p, "fix_linear", HistorySpec(eps=1e-3), 0.02, 1500.0, every=5)
    _, slope = amplitude_estimate(tr, window_fraction=0.5)
    assert slope == pytest.approx(lam.real, rel=2e-3)


def test_dde_order_on_linear_system():
    p = ModelParams(K=1.05, mu=0.3, tau=6.34)
    t_end = 5 * 6.34
    ref = integrate_dde(p, "fix_linear", HistorySpec(), 6.34 / 1024, t_end).states[-1]
    errs = []
    for n in (64, 128, 256):
        tr = integrate_dde(p, "fix_linear", HistorySpec(), 6.34 / n, t_end)
        assert tr.t_final == pytest.approx(t_end)
        errs.append(np.abs(tr.states[-1] - ref).max())
    for e1, e2 in zip(errs, errs[1:]):
        assert 12.0 <= e1 / e2 <= 20.0


def test_truncated_tracks_exact_for_small_history():
    p = ModelParams(K=1.05, mu=0.3, tau=5.0)
    a = integrate_dde(p, "fix_exact", HistorySpec(eps=1e-3), 0.05, 100.0)
    b = integrate_dde(p, "fix_truncated", HistorySpec(eps=1e-3), 0.05, 100.0)
    assert np.abs(a.states - b.states).max() < 1e-10


def test_network_identical_history_matches_fix_space():
    p = ModelParams(K=1.05, mu=0.3, tau=5.0, N=4)
    net = integrate_dde(p, "full_network", HistorySpec(eps=0.05), 0.05, 200.0)
    fix = integrate_dde(p, "fix_exact", HistorySpec(eps=0.05), 0.05, 200.0)
    assert np.abs(net.states[:, :4] - fix.states[:, [0]]).max() < 1e-12
    assert np.abs(net.states[:, 4:] - fix.states[:, [1]]).max() < 1e-12


def test_custom_history():
    p = ModelParams(K=1.05, mu=0.3, tau=1.0, N=3)
    _, n = delay_grid(1.0, 0.1)
    with pytest.raises(InvalidStep):
        integrate_dde(p, "full_network", HistorySpec(kind="custom-samples", samples=np.zeros((n, 6))), 0.1, 1.0)
    hist = np.zeros((n + 1, 6))
    hist[:, 0] = 0.01
    tr = integrate_dde(p, "full_network", HistorySpec(kind="custom-samples", samples=hist), 0.1, 1.0)
    assert tr.states[0, 0] == 0.01 and tr.states[0, 1] == 0.0
    with pytest.raises(ValueError):
        integrate_dde(p, "nope", HistorySpec(), 0.1, 1.0)


def test_dde_blowup():
    p = ModelParams(K=1.05, mu=0.3, tau=8.0, branch="plus")
    tr = integrate_dde(p, "fix_linear", HistorySpec(eps=1.0), 0.1, 1e4)
    assert tr.blowup and tr.t_final < 1e4


def test_amplitude_estimate_on_sine():
    t = np.linspace(0.0, 200.0, 20001)
    x = 0.7 * np.sin(1.3 * t)
    tr = Trajectory(times=t, states=np.c_[x, x], meta={}, blowup=False)
    amp, slope = amplitude_estimate(tr)
    assert amp == pytest.approx(1.4, rel=1e-6)
    assert abs(slope) < 1e-9
    with pytest.raises(TooShort):
        amplitude_estimate(Trajectory(times=t[:50], states=np.c_[x, x][:50], meta={}, blowup=False))
