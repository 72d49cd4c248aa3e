"""Second-order center manifold.

The stable component is approximated as

    w(y)(t) = 1/2 (h1(t) y1^2 + 2 h2(t) y1 y2 + h3(t) y2^2),   t in [-tau, 0],

where ``h = (h1, h2, h3)`` (six real components) solves

    h' = C h + p cos(w t) + q sin(w t)

in the interior and a linear boundary condition at ``t = 0``. The forcing
comes from projecting the quadratic part of ``f2`` off the center space
through ``S(t) = d12 s1(t) + d22 s2(t)``.
"""

from dataclasses import dataclass
import math

import numpy as np

from .eigenspace import eval_s
from .smallmat import block_C, exp_C, solve_linear


@dataclass(frozen=True)
class QuadCoeffs:
    """``f2 = f20 y1^2 + f11 y1 y2 + f02 y2^2 + O(|y|^3)`` on the center space."""
    f20: float
    f11: float
    f02: float

    def scaled(self, lam):
        return QuadCoeffs(lam * self.f20, lam * self.f11, lam * self.f02)


@dataclass(frozen=True)
class ManifoldData:
    M: np.ndarray
    N: np.ndarray
    Kh: np.ndarray
    omega: float
    tau: float
    p: np.ndarray
    q: np.ndarray
    r: np.ndarray


@dataclass(frozen=True)
class W1Quad:
    """First (x1) components of ``h1, h2, h3`` at ``t = 0`` and ``t = -tau``.

    ``w1(t) = 1/2 h1 y1^2 + h2 y1 y2 + 1/2 h3 y2^2``.
    """
    at0: tuple
    atTau: tuple


def linear_x1(ed):
    """Coefficients of ``(y1, y2)`` in ``x1(0)`` and ``x1(-tau)`` on the center space."""
    s1_0, s2_0 = eval_s(ed, 0.0)
    s1_t, s2_t = eval_s(ed, -ed.tau)
    return (s1_0[0], s2_0[0]), (s1_t[0], s2_t[0])


def f2_y_partials(ed, eq, params):
    # quadratic part of f2 is -K mu sin(2 phi)/2 * (x1(0) + x1(-tau))^2
    (u1, u2), (v1, v2) = linear_x1(ed)
    alpha, beta = u1 + v1, u2 + v2
    k = -0.5 * params.K * params.mu * eq.sin2phi
    return QuadCoeffs(f20=k * alpha * alpha, f11=2.0 * k * alpha * beta, f02=k * beta * beta)


def _forcing_shapes(ed):
    """``(P0, Q0)`` with ``d12 s1(t) + d22 s2(t) = P0 cos(w t) + Q0 sin(w t)``."""
    d12, d22 = ed.d1[1], ed.d2[1]
    return d12 * ed.c1 + d22 * ed.c2, d22 * ed.c1 - d12 * ed.c2


def build_pq(qc, ed):
    P0, Q0 = _forcing_shapes(ed)
    weights = (2.0 * qc.f20, qc.f11, 2.0 * qc.f02)
    p = np.concatenate([wt * P0 for wt in weights])
    q = np.concatenate([wt * Q0 for wt in weights])
    return p, q


def boundary_r(qc):
    """Direct ``F = (0, f2)`` contribution to the ``t = 0`` equations."""
    return np.array([0.0, 2.0 * qc.f20, 0.0, qc.f11, 0.0, 2.0 * qc.f02])


def solve_MN(omega, p, q):
    C = block_C(omega)
    I = np.eye(6)
    big = np.block([[C, -omega * I], [omega * I, C]])
    MN = solve_linear(big, -np.concatenate([p, q]))
    return MN[:6], MN[6:]


def boundary_mats(lin, omega):
    P = np.kron(np.eye(3), lin.A0) - block_C(omega)
    Q = np.kron(np.eye(3), lin.Atau)
    return P, Q


def solve_Kh(lin, M, N, qc, ed, omega, tau):
    p, _ = build_pq(qc, ed)
    r = boundary_r(qc)
    P, Q = boundary_mats(lin, omega)
    ct, st = math.cos(omega * tau), math.sin(omega * tau)
    lhs = P + Q @ exp_C(omega, -tau)
    rhs = p - r - P @ M - Q @ (M * ct - N * st)
    return solve_linear(lhs, rhs)


def center_manifold(ed, lin, eq, params, qc=None):
    """Solve for the full quadratic manifold at a normalized Hopf point."""
    if qc is None:
        qc = f2_y_partials(ed, eq, params)
    omega, tau = ed.omega, ed.tau
    p, q = build_pq(qc, ed)
    M, N = solve_MN(omega, p, q)
    Kh = solve_Kh(lin, M, N, qc, ed, omega, tau)
    return ManifoldData(M=M, N=N, Kh=Kh, omega=omega, tau=tau, p=p, q=q, r=boundary_r(qc))


def h_eval(md, theta):
    ct, st = math.cos(md.omega * theta), math.sin(md.omega * theta)
    return exp_C(md.omega, theta) @ md.Kh + md.M * ct + md.N * st


def h_derivative(md, theta):
    ct, st = math.cos(md.omega * theta), math.sin(md.omega * theta)
    C = block_C(md.omega)
    return C @ exp_C(md.omega, theta) @ md.Kh + md.omega * (md.N * ct - md.M * st)


def interior_residual(md, theta):
    """``h' - C h - p cos - q sin`` at ``theta``."""
    ct, st = math.cos(md.omega * theta), math.sin(md.omega * theta)
    return h_derivative(md, theta) - block_C(md.omega) @ h_eval(md, theta) - md.p * ct - md.q * st


def boundary_residual(md, lin):
    """Residual of the three ``t = 0`` conditions ``P h(0) + Q h(-tau) = p - r``."""
    P, Q = boundary_mats(lin, md.omega)
    return P @ h_eval(md, 0.0) + Q @ h_eval(md, -md.tau) - (md.p - md.r)


def w1_quadratic(md):
    h0 = md.Kh + md.M
    ct, st = math.cos(md.omega * md.tau), math.sin(md.omega * md.tau)
    ht = exp_C(md.omega, -md.tau) @ md.Kh + md.M * ct - md.N * st
    return W1Quad(at0=(h0[0], h0[2], h0[4]), atTau=(ht[0], ht[2], ht[4]))
