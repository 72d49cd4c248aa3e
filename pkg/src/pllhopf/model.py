"""Delay-coupled second-order PLL network.

Every node obeys

    phi_i'' + mu phi_i' - mu - K mu / (N-1) * sum_{j != i} f(phi_i, phi_j(t - tau)) = 0,
    f(a, b) = sin(b - a) + sin(b + a).

The synchronized (diagonal) subspace reduces this to a scalar second-order
delay equation. Analysis always works in deviation coordinates about an
equilibrium, which removes the constant ``+mu`` drift.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DimensionMismatch, InvalidParams

BRANCHES = ("plus", "minus")


@dataclass(frozen=True)
class ModelParams:
    K: float
    mu: float
    tau: float = 0.0
    N: int = 2
    branch: str = "minus"
    n_index: int = 0

    def __post_init__(self):
        if not self.K >= 1.0:
            raise InvalidParams("K must be ≥ 1")
        if not self.mu > 0.0:
            raise InvalidParams("mu must be > 0")
        if not self.tau >= 0.0:
            raise InvalidParams("tau must be ≥ 0")
        if int(self.N) != self.N or self.N < 2:
            raise InvalidParams("N must be an integer ≥ 2")
        if self.branch not in BRANCHES:
            raise InvalidParams(f"branch must be one of {BRANCHES}")


@dataclass(frozen=True)
class Equilibrium:
    phi: float
    sin2phi: float
    cos2phi: float


@dataclass(frozen=True)
class LinMats:
    A0: np.ndarray
    Atau: np.ndarray


def equilibrium(params):
    """Synchronized equilibrium phase on the selected branch.

    ``sin(2 phi) = -1/K`` on both branches; ``cos(2 phi)`` is non-negative on
    ``plus`` and non-positive on ``minus``.
    """
    if params.K < 1.0:
        raise InvalidParams("K must be ≥ 1")
    base = math.asin(-1.0 / params.K)
    two_n_pi = 2.0 * params.n_index * math.pi
    if params.branch == "plus":
        two_phi = base + two_n_pi
    else:
        two_phi = math.pi - base + two_n_pi
    # 2*phi evaluated directly keeps the identities at machine precision
    return Equilibrium(phi=0.5 * two_phi, sin2phi=math.sin(two_phi), cos2phi=math.cos(two_phi))


def linear_coeffs(params, eq):
    """Return ``(b0, btau)``: coefficients of ``x1`` and ``x1(t-tau)`` in ``x2'``."""
    kmu = params.K * params.mu
    return kmu * (-1.0 + eq.cos2phi), kmu * (1.0 + eq.cos2phi)


def linearization(params, eq):
    b0, btau = linear_coeffs(params, eq)
    A0 = np.array([[0.0, 1.0], [b0, -params.mu]])
    Atau = np.array([[0.0, 0.0], [btau, 0.0]])
    return LinMats(A0=A0, Atau=Atau)


def f2_nonlinear(u, v, eq, params):
    """Quadratic plus cubic part of the Fix-space forcing.

    ``u`` is ``x1(t)``, ``v`` is ``x1(t - tau)``. Works elementwise on arrays.
    """
    s = u + v
    d = v - u
    kmu = params.K * params.mu
    return kmu * (-0.5 * s * s * eq.sin2phi - (d**3 + s**3 * eq.cos2phi) / 6.0)


def coupling(a, b):
    """The phase-detector nonlinearity ``f(a, b)``."""
    return np.sin(b - a) + np.sin(b + a)


def full_rhs(phases, rates, delayed_phases, params, eq=None, deviation=False):
    """Right-hand side of the N-node network.

    Returns ``(phases', rates')``. With ``deviation=True`` all phases are
    offsets from the equilibrium ``eq`` (computed from ``params`` if omitted).
    """
    phases = np.asarray(phases, dtype=float)
    rates = np.asarray(rates, dtype=float)
    delayed = np.asarray(delayed_phases, dtype=float)
    n = params.N
    if phases.shape != (n,) or rates.shape != (n,) or delayed.shape != (n,):
        raise DimensionMismatch(f"expected arrays of length N={n}")
    if deviation:
        if eq is None:
            eq = equilibrium(params)
        phases = phases + eq.phi
        delayed = delayed + eq.phi

    # S[i, j] = f(phi_i, phi_j(t - tau))
    S = coupling(phases[:, None], delayed[None, :])
    np.fill_diagonal(S, 0.0)
    kmu = params.K * params.mu
    accel = -params.mu * rates + params.mu + kmu / (n - 1) * S.sum(axis=1)
    return rates.copy(), accel


def fix_exact_rhs(x1, x2, x1_delayed, params, eq):
    """Synchronized-subspace dynamics with the full sine nonlinearity."""
    kmu = params.K * params.mu
    a = eq.phi + x1
    b = eq.phi + x1_delayed
    return x2, -params.mu * x2 + params.mu + kmu * (math.sin(b - a) + math.sin(b + a))


def fix_truncated_rhs(x1, x2, x1_delayed, params, eq):
    """Synchronized-subspace dynamics truncated at third order."""
    b0, btau = linear_coeffs(params, eq)
    return x2, (-params.mu * x2 + b0 * x1 + btau * x1_delayed
                + f2_nonlinear(x1, x1_delayed, eq, params))
