import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pllhopf.hopf import HopfPoint, points_at
from pllhopf.model import ModelParams
from pllhopf.normalform import (MONOMIALS, PlanarCubic, Stability, analyze_point, classify_a,
                                composed_g, lyapunov_a, lyapunov_fd_oracle, scan_lyapunov)

coef = st.floats(-2.0, 2.0)


def cubic_from_array(omega, arr):
    kw = {"omega": omega}
    for r in range(2):
        for (i, j), val in zip(MONOMIALS, arr[r]):
            kw[f"{'ab'[r]}{i}{j}"] = float(val)
    return PlanarCubic(**kw)


def rotated(pc, angle, rng):
    """Coefficients of ``R^T g(R z)`` fitted exactly from samples."""
    c, s = math.cos(angle), math.sin(angle)
    R = np.array([[c, -s], [s, c]])
    z = rng.standard_normal((30, 2))
    y = z @ R.T
    g = np.array([pc.rhs(*yy) for yy in y]) - pc.omega * np.c_[y[:, 1], -y[:, 0]]
    gt = g @ R
    V = np.array([[zz[0] ** i * zz[1] ** j for i, j in MONOMIALS] for zz in z])
    fit = np.linalg.lstsq(V, gt, rcond=None)[0].T
    return cubic_from_array(pc.omega, fit)


def test_radial_cubic():
    # g = c r^2 (y1, y2) gives a = c
    pc = PlanarCubic(omega=1.3, a30=0.7, a12=0.7, b21=0.7, b03=0.7)
    assert lyapunov_a(pc) == pytest.approx(0.7)


def test_pure_rotation_cubic_has_zero_a():
    pc = PlanarCubic(omega=1.0, a21=1.0, a03=1.0, b30=-1.0, b12=-1.0)
    assert lyapunov_a(pc) == pytest.approx(0.0, abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(omega=st.floats(0.2, 3.0), angle=st.floats(0.0, 2 * math.pi),
       vals=st.lists(coef, min_size=14, max_size=14), seed=st.integers(0, 2**31))
def test_invariant_under_rotation(omega, angle, vals, seed):
    pc = cubic_from_array(omega, np.reshape(vals, (2, 7)))
    rot = rotated(pc, angle, np.random.default_rng(seed))
    assert lyapunov_a(rot) == pytest.approx(lyapunov_a(pc), rel=1e-8, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(omega=st.floats(0.2, 3.0), lam=st.floats(0.1, 5.0),
       vals=st.lists(coef, min_size=14, max_size=14))
def test_scaling_law(omega, lam, vals):
    # y -> lam y multiplies quadratic coefficients by lam and cubic ones by lam^2
    arr = np.reshape(vals, (2, 7))
    scaled = arr.copy()
    scaled[:, :3] *= lam
    scaled[:, 3:] *= lam**2
    a = lyapunov_a(cubic_from_array(omega, arr))
    assert lyapunov_a(cubic_from_array(omega, scaled)) == pytest.approx(lam**2 * a, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("mu", [0.08, 0.2, 0.3, 0.4])
def test_analytic_matches_fd_oracle(mu):
    p = ModelParams(K=1.05, mu=mu)
    for pt in points_at(p, 1):
        an = analyze_point(pt, p)
        fd = lyapunov_fd_oracle(an.eig, an.w1, an.eq, an.params)
        assert an.a == pytest.approx(fd, rel=1e-6)


def test_assembled_cubic_matches_composed_map():
    p = ModelParams(K=1.05, mu=0.3)
    pt = points_at(p, 0)[0]
    an = analyze_point(pt, p)
    g = composed_g(an.eig, an.w1, an.eq, an.params)

    def gap(y):
        poly = np.array(an.cubic.rhs(*y)) - an.cubic.omega * np.array([y[1], -y[0]])
        return np.abs(np.array(g(*y)) - poly).max()
    # remainder is quartic
    y = np.array([0.03, -0.02])
    assert gap(y) / gap(y / 2) == pytest.approx(16.0, rel=0.05)


def test_known_verdicts_at_mu_0_1():
    # supercritical on the L2R family at small mu, confirmed by direct simulation
    p = ModelParams(K=1.05, mu=0.1)
    res = {r.point.branch_id: r for r in scan_lyapunov(points_at(p, 0), p)}
    assert res["w1j0"].a == pytest.approx(-0.027054726, rel=1e-6)
    assert res["w1j0"].stability is Stability.STABLE
    assert res["w0j0"].stability is Stability.UNSTABLE


def test_classify():
    assert classify_a(-1.0) == (Stability.STABLE, False)
    assert classify_a(2.0) == (Stability.UNSTABLE, False)
    assert classify_a(1e-12)[1] is True


def test_scan_reports_failures_per_point():
    p = ModelParams(K=1.05, mu=0.3)
    good = points_at(p, 0)[0]
    bad = HopfPoint(mu=0.3, tau=good.tau + 0.5, omega=good.omega, j=0)
    res = scan_lyapunov([bad, good], p)
    assert res[0].error.startswith("NotAHopfPoint")
    assert math.isnan(res[0].a)
    assert not res[1].error and math.isfinite(res[1].a)
