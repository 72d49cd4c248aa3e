"""Hopf points of the synchronized-subspace linearization.

The characteristic function is

    Delta(lam) = lam^2 + mu lam - b0 - btau exp(-lam tau).

Setting ``lam = i w`` and splitting magnitude from phase gives a quadratic
in ``w^2`` for the critical frequencies and a closed form for every delay
``tau`` at which that frequency is critical. Curves in ``(mu, tau)`` are
therefore traced point by point, with no continuation.
"""

from dataclasses import dataclass, replace
from enum import Enum
import cmath
import math

import numpy as np

from .errors import DegenerateCrossing, InvalidFrequency
from .model import ModelParams, equilibrium, linear_coeffs

RESIDUAL_TOL = 1e-9


class Direction(str, Enum):
    L2R = "L2R"  # left to right: destabilizing as tau grows
    R2L = "R2L"
    DEGENERATE = "DEGENERATE"


@dataclass(frozen=True)
class HopfPoint:
    mu: float
    tau: float
    omega: float
    j: int
    root: int = 0
    direction: Direction | None = None
    re_dlambda: float = math.nan
    residual: float = 0.0

    @property
    def branch_id(self):
        return f"w{self.root}j{self.j}"


def char_fn(lam, params, eq):
    b0, btau = linear_coeffs(params, eq)
    return lam * lam + params.mu * lam - b0 - btau * cmath.exp(-lam * params.tau)


def hopf_frequencies(params, eq):
    """Positive roots of ``w^4 + (2 b0 + mu^2) w^2 + b0^2 - btau^2``, ascending."""
    b0, btau = linear_coeffs(params, eq)
    B = 2.0 * b0 + params.mu**2
    C = b0 * b0 - btau * btau
    disc = B * B - 4.0 * C
    if disc < 0.0:
        return []
    sq = math.sqrt(disc)
    # cancellation-free pair of roots in w^2
    big = -0.5 * (B + math.copysign(sq, B)) if B != 0.0 else 0.5 * sq
    cands = [big] if big == 0.0 else [big, C / big]
    if disc == 0.0:
        cands = [-0.5 * B]
    roots = sorted({math.sqrt(z) for z in cands if z > 0.0})
    return roots


def hopf_tau(params, eq, omega, j=0, root=0):
    """Delay at which ``i*omega`` is a root, on the ``j``-th delay branch."""
    b0, btau = linear_coeffs(params, eq)
    w2 = omega * omega
    quartic = w2 * w2 + (2.0 * b0 + params.mu**2) * w2 + b0 * b0 - btau * btau
    scale = w2 * w2 + abs(2.0 * b0 + params.mu**2) * w2 + b0 * b0 + btau * btau
    if not omega > 0.0 or btau == 0.0 or abs(quartic) > 1e-8 * max(1.0, scale):
        raise InvalidFrequency(f"omega={omega!r} is not a critical frequency")
    rhs = complex(-w2 - b0, params.mu * omega) / btau  # = exp(-i omega tau)
    theta = (-cmath.phase(rhs)) % (2.0 * math.pi)
    tau = (theta + 2.0 * math.pi * j) / omega
    at = replace(params, tau=tau)
    residual = abs(char_fn(1j * omega, at, eq))
    return HopfPoint(mu=params.mu, tau=tau, omega=omega, j=j, root=root, residual=residual)


def dlambda_dtau(point, params, eq):
    """Complex eigenvalue velocity ``d lam / d tau`` at ``lam = i omega``."""
    _, btau = linear_coeffs(params, eq)
    lam = 1j * point.omega
    e = btau * cmath.exp(-lam * point.tau)
    return -lam * e / (2.0 * lam + params.mu + point.tau * e)


def transversality(point, params, eq):
    """Real part of the crossing speed; positive means left to right."""
    params = replace(params, mu=point.mu, tau=point.tau)
    re = dlambda_dtau(point, params, eq).real
    if abs(re) < 1e-10:
        raise DegenerateCrossing(f"Re(dlambda/dtau) = {re:.3e} at mu={point.mu}, tau={point.tau}")
    return re


def classify(point, params, eq):
    """Return ``point`` with its crossing speed and direction filled in."""
    try:
        re = transversality(point, params, eq)
    except DegenerateCrossing:
        params = replace(params, mu=point.mu, tau=point.tau)
        return replace(point, direction=Direction.DEGENERATE,
                       re_dlambda=dlambda_dtau(point, params, eq).real)
    return replace(point, direction=Direction.L2R if re > 0 else Direction.R2L, re_dlambda=re)


def points_at(params, j_max):
    """All classified Hopf points at a single ``mu``, ordered by (root, j)."""
    eq = equilibrium(params)
    out = []
    for root, omega in enumerate(hopf_frequencies(params, eq)):
        for j in range(j_max + 1):
            pt = hopf_tau(params, eq, omega, j, root)
            out.append(classify(pt, params, eq))
    return out


def trace_curves(K, mu_min, mu_max, steps, j_max, branch="minus", N=2, n_index=0):
    """Hopf curves on a uniform ``mu`` grid, grouped by (frequency root, j)."""
    if not 0.0 < mu_min < mu_max:
        raise ValueError("need 0 < mu_min < mu_max")
    if steps < 2:
        raise ValueError("need at least two grid points")
    groups = {}
    for mu in np.linspace(mu_min, mu_max, steps):
        params = ModelParams(K=K, mu=float(mu), N=N, branch=branch, n_index=n_index)
        for pt in points_at(params, j_max):
            groups.setdefault((pt.root, pt.j), []).append(pt)
    return [pt for key in sorted(groups) for pt in groups[key]]


def nearest_point(points, mu, tau):
    """Curve point closest to ``(mu, tau)`` in the Euclidean metric."""
    if not points:
        raise ValueError("no Hopf points to search")
    return min(points, key=lambda p: math.hypot(p.mu - mu, p.tau - tau))


def snap_to_curve(params, j_max=4):
    """Hopf point at ``params.mu`` whose delay is closest to ``params.tau``."""
    pts = points_at(params, j_max)
    if not pts:
        raise InvalidFrequency(f"no Hopf point at mu={params.mu}")
    return min(pts, key=lambda p: abs(p.tau - params.tau))
