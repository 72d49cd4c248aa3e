"""Critical eigenfunctions and the bilinear pairing.

At a Hopf point the generator has the eigenfunction
``s(t) = exp(i w t) (c1 + i c2)`` on ``[-tau, 0]`` and the adjoint has
``n(t) = exp(i w t) (d1 + i d2)`` on ``[0, tau]``. Their real and imaginary
parts ``s1, s2`` and ``n1, n2`` span the real center space and its dual.
The ``c`` gauge is fixed by ``c11 = 1, c21 = 0``; the two real degrees of
freedom left in ``d`` are spent on ``<n, s> = I``.
"""

from dataclasses import dataclass, replace
import cmath
import math

import numpy as np

from .errors import DegeneratePairing, NotAHopfPoint, OutOfDomain, RankDeficiency
from .hopf import char_fn

HOPF_TOL = 1e-8


@dataclass(frozen=True)
class EigenData:
    omega: float
    tau: float
    c1: np.ndarray
    c2: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    normalized: bool = False

    @property
    def v(self):
        """Complex eigenvector ``c1 + i c2`` of ``Delta(i w)``."""
        return self.c1 + 1j * self.c2

    @property
    def w(self):
        return self.d1 + 1j * self.d2


def _rot(omega, t):
    return math.cos(omega * t), math.sin(omega * t)


def c_system(A0, Atau, omega, tau):
    """Real 4x4 boundary matrix acting on ``(c1, c2)``."""
    ct, st = _rot(omega, tau)
    I = np.eye(2)
    return np.block([[A0 + ct * Atau, omega * I + st * Atau],
                     [-omega * I - st * Atau, A0 + ct * Atau]])


def d_system(A0, Atau, omega, tau):
    """Real 4x4 adjoint boundary matrix acting on ``(d1, d2)``.

    Rows encode ``A0^T n1(0) + Atau^T n1(tau) = w n2(0)`` and
    ``A0^T n2(0) + Atau^T n2(tau) = -w n1(0)``.
    """
    ct, st = _rot(omega, tau)
    I = np.eye(2)
    return np.block([[A0.T + ct * Atau.T, -omega * I - st * Atau.T],
                     [omega * I + st * Atau.T, A0.T + ct * Atau.T]])


def eigenfunction_coeffs(params, eq, lin, omega):
    """Unnormalized eigenfunction coefficients at the Hopf point ``(params.tau, omega)``."""
    tau = params.tau
    residual = abs(char_fn(1j * omega, params, eq))
    if residual > HOPF_TOL:
        raise NotAHopfPoint(f"|Delta(i w)| = {residual:.3e}")

    Bc = c_system(lin.A0, lin.Atau, omega, tau)
    # gauge c11 = 1, c21 = 0 leaves (c12, c22) unknown: columns 1 and 3
    sub = Bc[:, [1, 3]]
    if np.linalg.matrix_rank(sub, tol=1e-10 * max(1.0, np.abs(sub).max())) != 2:
        raise RankDeficiency("gauge-fixed eigenvector system is rank deficient")
    sol, *_ = np.linalg.lstsq(sub, -Bc[:, 0], rcond=None)
    c = np.array([1.0, sol[0], 0.0, sol[1]])
    if np.abs(Bc @ c).max() > HOPF_TOL * max(1.0, np.abs(Bc).max()):
        raise RankDeficiency("no eigenvector satisfies the c11=1, c21=0 gauge")

    Bd = d_system(lin.A0, lin.Atau, omega, tau)
    _, sv, vt = np.linalg.svd(Bd)
    tol = 1e-10 * sv[0]
    if not (sv[1] > tol and sv[2] <= tol and sv[3] <= tol):
        raise RankDeficiency(f"adjoint null space is not two-dimensional: {sv}")
    d = vt[-1]
    return EigenData(omega=omega, tau=tau, c1=c[:2], c2=c[2:], d1=d[:2], d2=d[2:])


def eval_s(ed, theta):
    if not -ed.tau - 1e-12 <= theta <= 1e-12:
        raise OutOfDomain(f"theta={theta} outside [-tau, 0]")
    ct, st = _rot(ed.omega, theta)
    return ct * ed.c1 - st * ed.c2, st * ed.c1 + ct * ed.c2


def eval_n(ed, theta):
    if not -1e-12 <= theta <= ed.tau + 1e-12:
        raise OutOfDomain(f"theta={theta} outside [0, tau]")
    ct, st = _rot(ed.omega, theta)
    return ct * ed.d1 - st * ed.d2, st * ed.d1 + ct * ed.d2


def _complex_pairings(ed, Atau, tau):
    """``<n, s>`` and ``<n, conj(s)>`` of the complex eigenfunctions (no conjugation)."""
    w, v = ed.w, ed.v
    om = ed.omega
    # int_{-tau}^0 exp(i w (x + tau)) exp(+-i w x) dx
    same = math.sin(om * tau) / om if om * tau != 0.0 else tau
    cross = tau * cmath.exp(1j * om * tau)
    X = w @ v + same * (w @ Atau @ v)
    Y = w @ v.conj() + cross * (w @ Atau @ v.conj())
    return X, Y


def bilinear(ed, Atau, tau):
    """2x2 matrix of ``<n_r, s_c>`` for the real eigenfunction pairs.

    The delay integral of a product of sinusoids is evaluated in closed form.
    """
    X, Y = _complex_pairings(ed, Atau, tau)
    return 0.5 * np.array([[(X + Y).real, (X - Y).imag],
                           [(X + Y).imag, (Y - X).real]])


def normalize(ed, Atau, tau):
    """Mix ``(d1, d2)`` with its quarter-turn ``(-d2, d1)`` so that ``<n, s> = I``."""
    G = bilinear(ed, Atau, tau)
    if abs(np.linalg.det(G)) < 1e-12:
        raise DegeneratePairing(f"pairing matrix is singular: {G}")
    # within the adjoint space G = [[g, -h], [h, g]] with g + i h = Y / 2;
    # d <- alpha d + beta (-d2, d1) multiplies w by z = alpha + i beta
    g, h = G[0, 0], G[1, 0]
    z = 1.0 / complex(g, h)
    w = z * ed.w
    return replace(ed, d1=w.real.copy(), d2=w.imag.copy(), normalized=True)


def critical_eigendata(params, eq, lin, omega):
    """Normalized eigenfunction data at a Hopf point."""
    ed = eigenfunction_coeffs(params, eq, lin, omega)
    return normalize(ed, lin.Atau, params.tau)
