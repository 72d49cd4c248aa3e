"""Planar cubic reduction and the first Lyapunov coefficient.

On the center manifold the dynamics read

    y1' =  w y2 + g1(y1, y2),    g1 = d12 f2(x1(0), x1(-tau)),
    y2' = -w y1 + g2(y1, y2),    g2 = d22 f2(x1(0), x1(-tau)),

with ``x1`` restricted to the manifold. Truncating ``g`` at total degree
three gives :class:`PlanarCubic`; its first Lyapunov coefficient ``a``
decides whether the bifurcating orbit is stable (``a < 0``).
"""

from dataclasses import dataclass, field, replace
from enum import Enum
import math

import numpy as np

from .eigenspace import critical_eigendata, eval_s
from .errors import PllHopfError
from .hopf import HopfPoint
from .manifold import center_manifold, linear_x1, w1_quadratic
from .model import equilibrium, linearization

DEG = 3
MONOMIALS = ((2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3))


class Stability(str, Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"


@dataclass(frozen=True)
class PlanarCubic:
    omega: float
    a20: float = 0.0
    a11: float = 0.0
    a02: float = 0.0
    a30: float = 0.0
    a21: float = 0.0
    a12: float = 0.0
    a03: float = 0.0
    b20: float = 0.0
    b11: float = 0.0
    b02: float = 0.0
    b30: float = 0.0
    b21: float = 0.0
    b12: float = 0.0
    b03: float = 0.0

    def coeff(self, r, i, j):
        return getattr(self, f"{'ab'[r]}{i}{j}")

    def as_array(self):
        """``(2, 7)`` array of coefficients in :data:`MONOMIALS` order."""
        return np.array([[self.coeff(r, i, j) for i, j in MONOMIALS] for r in range(2)])

    def rhs(self, y1, y2):
        g = [sum(self.coeff(r, i, j) * y1**i * y2**j for i, j in MONOMIALS) for r in range(2)]
        return self.omega * y2 + g[0], -self.omega * y1 + g[1]


@dataclass(frozen=True)
class LyapunovResult:
    mu: float
    tau: float
    omega: float
    a: float = math.nan
    stability: Stability | None = None
    point: HopfPoint | None = None
    error: str = ""
    inconclusive: bool = False


# -- truncated bivariate polynomials: c[i, j] multiplies y1^i y2^j --------------

def _poly(terms):
    c = np.zeros((DEG + 1, DEG + 1))
    for (i, j), val in terms.items():
        c[i, j] = val
    return c


def _mul(a, b):
    out = np.zeros_like(a)
    for i in range(DEG + 1):
        for j in range(DEG + 1 - i):
            if a[i, j] == 0.0:
                continue
            for k in range(DEG + 1 - i - j):
                for m in range(DEG + 1 - i - j - k):
                    out[i + k, j + m] += a[i, j] * b[k, m]
    return out


def _quad_form(triple):
    w20, w11, w02 = triple
    return _poly({(2, 0): 0.5 * w20, (1, 1): w11, (0, 2): 0.5 * w02})


def assemble(ed, w1, eq, params):
    """Expand ``f2`` on the manifold to third order and project onto ``(y1, y2)``."""
    (u1, u2), (v1, v2) = linear_x1(ed)
    u = _poly({(1, 0): u1, (0, 1): u2}) + _quad_form(w1.at0)
    v = _poly({(1, 0): v1, (0, 1): v2}) + _quad_form(w1.atTau)
    s = u + v
    d = v - u
    s2 = _mul(s, s)
    kmu = params.K * params.mu
    f2 = kmu * (-0.5 * eq.sin2phi * s2 - (_mul(_mul(d, d), d) + eq.cos2phi * _mul(s2, s)) / 6.0)
    d12, d22 = ed.d1[1], ed.d2[1]
    kw = {"omega": ed.omega}
    for i, j in MONOMIALS:
        kw[f"a{i}{j}"] = d12 * f2[i, j]
        kw[f"b{i}{j}"] = d22 * f2[i, j]
    return PlanarCubic(**kw)


def lyapunov_from_partials(g1, g2, omega):
    """First Lyapunov coefficient from partial derivatives ``g[(i, j)]`` at the origin."""
    return ((g2[0, 3] + g2[2, 1] + g1[1, 2] + g1[3, 0]) / 16.0
            + (g2[1, 1] * (g2[0, 2] + g2[2, 0]) - g1[1, 1] * (g1[0, 2] + g1[2, 0])
               - g2[0, 2] * g1[0, 2] + g2[2, 0] * g1[2, 0]) / (16.0 * omega))


def lyapunov_a(pc):
    # g^{ij} = i! j! * (monomial coefficient)
    g = np.zeros((2, DEG + 1, DEG + 1))
    for r in range(2):
        for i, j in MONOMIALS:
            g[r, i, j] = math.factorial(i) * math.factorial(j) * pc.coeff(r, i, j)
    return lyapunov_from_partials(g[0], g[1], pc.omega)


# -- finite-difference oracle ----------------------------------------------------

def _fd_weights(order, offsets):
    """Weights ``w`` with ``sum w_k f(k h) ~ h^order f^(order)(0)``."""
    offsets = np.asarray(offsets, dtype=float)
    V = np.vander(offsets, increasing=True).T
    rhs = np.zeros(len(offsets))
    rhs[order] = math.factorial(order)
    return np.linalg.solve(V, rhs)


def composed_g(ed, w1, eq, params):
    """Return the exact (untruncated) map ``(y1, y2) -> (g1, g2)``."""
    s1_0, s2_0 = eval_s(ed, 0.0)
    s1_t, s2_t = eval_s(ed, -ed.tau)
    kmu = params.K * params.mu
    d12, d22 = ed.d1[1], ed.d2[1]

    def quad(triple, y1, y2):
        return 0.5 * triple[0] * y1 * y1 + triple[1] * y1 * y2 + 0.5 * triple[2] * y2 * y2

    def g(y1, y2):
        x0 = y1 * s1_0[0] + y2 * s2_0[0] + quad(w1.at0, y1, y2)
        xt = y1 * s1_t[0] + y2 * s2_t[0] + quad(w1.atTau, y1, y2)
        s = x0 + xt
        dd = xt - x0
        f2 = kmu * (-0.5 * s * s * eq.sin2phi - (dd**3 + s**3 * eq.cos2phi) / 6.0)
        return d12 * f2, d22 * f2

    return g


def lyapunov_fd_oracle(ed, w1, eq, params, step=None):
    """First Lyapunov coefficient with every ``g`` partial taken by finite differences.

    Seven-point central stencils in each variable; tensor products give the
    mixed partials.
    """
    g = composed_g(ed, w1, eq, params)
    if step is None:
        scale = max(1.0, float(np.abs(np.concatenate([ed.c1, ed.c2])).max()))
        step = 1e-3 * scale
    offsets = np.arange(-3, 4)
    grid = np.array([[g(k * step, m * step) for m in offsets] for k in offsets])  # (7, 7, 2)
    weights = [_fd_weights(n, offsets) / step**n for n in range(DEG + 1)]
    parts = np.zeros((2, DEG + 1, DEG + 1))
    for i, j in MONOMIALS:
        parts[:, i, j] = np.einsum("k,m,kmr->r", weights[i], weights[j], grid)
    return lyapunov_from_partials(parts[0], parts[1], ed.omega)


# -- pipeline --------------------------------------------------------------------

@dataclass
class PointAnalysis:
    """Every intermediate of the reduction at one Hopf point."""
    params: object
    eq: object
    lin: object
    eig: object
    manifold: object
    w1: object
    cubic: PlanarCubic
    a: float
    extras: dict = field(default_factory=dict)


def analyze_point(point, params):
    """Run eigenfunctions, normalization, manifold, assembly and ``a`` at a Hopf point."""
    params = replace(params, mu=point.mu, tau=point.tau)
    eq = equilibrium(params)
    lin = linearization(params, eq)
    ed = critical_eigendata(params, eq, lin, point.omega)
    md = center_manifold(ed, lin, eq, params)
    w1 = w1_quadratic(md)
    pc = assemble(ed, w1, eq, params)
    return PointAnalysis(params=params, eq=eq, lin=lin, eig=ed, manifold=md, w1=w1,
                         cubic=pc, a=lyapunov_a(pc))


def classify_a(a, scale=1.0):
    stability = Stability.STABLE if a < 0 else Stability.UNSTABLE
    return stability, abs(a) <= 1e-8 * scale


def scan_lyapunov(points, params_template):
    out = []
    for pt in points:
        try:
            res = analyze_point(pt, params_template)
        except (PllHopfError, ArithmeticError, ValueError) as exc:
            out.append(LyapunovResult(mu=pt.mu, tau=pt.tau, omega=pt.omega, point=pt,
                                      error=f"{type(exc).__name__}: {exc}"))
            continue
        stability, inconclusive = classify_a(res.a)
        out.append(LyapunovResult(mu=pt.mu, tau=pt.tau, omega=pt.omega, a=res.a,
                                  stability=stability, point=pt, inconclusive=inconclusive))
    return out
