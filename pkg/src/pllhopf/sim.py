"""Time integration of the reduced planar system and of the delay models.

The planar cubic is advanced with the Dormand-Prince 5(4) pair (adaptive,
step clamped by ``max_step``), compiled with numba because long
runs take about a million steps. Delay systems use classic RK4 on a grid
whose spacing divides ``tau``, so delayed values at the step ends are
stored grid values; the half-step value comes from the cubic Hermite
interpolant built from stored positions and rates.
"""

from dataclasses import dataclass, field
import math

import numba
import numpy as np

from .errors import InvalidStep, StepUnderflow, TooShort
from .model import equilibrium, f2_nonlinear, full_rhs, linear_coeffs

BLOWUP_NORM = 1e10
MIN_STEP = 1e-12
MAX_SAMPLES = 1_000_000


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    meta: dict = field(default_factory=dict)
    blowup: bool = False

    @property
    def t_final(self):
        return float(self.times[-1])


@dataclass(frozen=True)
class HistorySpec:
    """Initial function on ``[-tau, 0]`` in deviation coordinates.

    ``constant-equilibrium-offset`` holds every position at ``eps`` with zero
    rates. ``custom-samples`` takes ``samples``: either a callable
    ``t -> state`` or an array of states on the integration grid
    ``-tau, -tau + dt, ..., 0``.
    """
    kind: str = "constant-equilibrium-offset"
    eps: float = 1e-3
    samples: object = None


# -- Dormand-Prince 5(4) ------------------------------------------------------------

_A = np.zeros((7, 7))
_A[1, :1] = [1 / 5]
_A[2, :2] = [3 / 40, 9 / 40]
_A[3, :3] = [44 / 45, -56 / 15, 32 / 9]
_A[4, :4] = [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]
_A[5, :5] = [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]
_A[6, :6] = [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]
_B5 = _A[6].copy()
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


@numba.njit(cache=True)
def _planar(coef, omega, y1, y2):
    m = (y1 * y1, y1 * y2, y2 * y2, y1 * y1 * y1, y1 * y1 * y2, y1 * y2 * y2, y2 * y2 * y2)
    g1 = 0.0
    g2 = 0.0
    for k in range(7):
        g1 += coef[0, k] * m[k]
        g2 += coef[1, k] * m[k]
    return omega * y2 + g1, -omega * y1 + g2


@numba.njit(cache=True)
def _dopri_planar(coef, omega, y0, t_end, max_step, rtol, atol, cap, A, B5, E):
    times = np.empty(cap)
    states = np.empty((cap, 2))
    times[0] = 0.0
    states[0, 0] = y0[0]
    states[0, 1] = y0[1]
    count = 1
    stride = 1
    since = 0
    k = np.empty((7, 2))
    t = 0.0
    y1 = y0[0]
    y2 = y0[1]
    h = min(max_step, 0.01 * t_end)
    status = 0
    norm0 = abs(y0[0]) + abs(y0[1])
    while t < t_end:
        if h < 1e-12:
            # a polynomial field diverges in finite time: the step collapses
            # long before the norm threshold, so a large state counts as blowup
            status = 1 if abs(y1) + abs(y2) > 1e3 * norm0 else 2
            break
        if t + h > t_end:
            h = t_end - t
        a, b = _planar(coef, omega, y1, y2)
        k[0, 0] = a
        k[0, 1] = b
        for s in range(1, 7):
            z1 = y1
            z2 = y2
            for r in range(s):
                z1 += h * A[s, r] * k[r, 0]
                z2 += h * A[s, r] * k[r, 1]
            a, b = _planar(coef, omega, z1, z2)
            k[s, 0] = a
            k[s, 1] = b
        n1 = y1
        n2 = y2
        e1 = 0.0
        e2 = 0.0
        for s in range(7):
            n1 += h * B5[s] * k[s, 0]
            n2 += h * B5[s] * k[s, 1]
            e1 += h * E[s] * k[s, 0]
            e2 += h * E[s] * k[s, 1]
        sc1 = atol + rtol * max(abs(y1), abs(n1))
        sc2 = atol + rtol * max(abs(y2), abs(n2))
        err = math.sqrt(0.5 * ((e1 / sc1) ** 2 + (e2 / sc2) ** 2))
        if not math.isfinite(err):
            h *= 0.2
            continue
        if err <= 1.0:
            t += h
            y1 = n1
            y2 = n2
            since += 1
            if since == stride:
                since = 0
                if count == cap:
                    # halve the stored samples and the sampling rate
                    half = (cap + 1) // 2
                    for i in range(half):
                        times[i] = times[2 * i]
                        states[i, 0] = states[2 * i, 0]
                        states[i, 1] = states[2 * i, 1]
                    count = half
                    stride *= 2
                if since == 0 and count < cap:
                    times[count] = t
                    states[count, 0] = y1
                    states[count, 1] = y2
                    count += 1
            if not (abs(y1) + abs(y2) <= 1e10):
                status = 1
                break
        fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        h = min(max_step, h * fac)
    # keep the final state even when it falls between samples
    if times[count - 1] < t:
        if count == cap:
            count -= 1
        times[count] = t
        states[count, 0] = y1
        states[count, 1] = y2
        count += 1
    return times[:count].copy(), states[:count].copy(), status


def integrate_reduced(pc, y10, y20, t_end, max_step=0.05, rel_tol=1e-6, abs_tol=1e-12,
                      max_samples=MAX_SAMPLES):
    """Integrate the planar cubic with adaptive Dormand-Prince 5(4).

    A trajectory whose norm passes ``1e10``, or whose step collapses after
    the state has grown a thousandfold, is returned truncated with
    ``blowup=True``.
    """
    if not (t_end > 0 and max_step > 0 and rel_tol > 0 and abs_tol > 0):
        raise InvalidStep("t_end, max_step and tolerances must be positive")
    coef = pc.as_array().astype(float)
    times, states, status = _dopri_planar(
        coef, float(pc.omega), np.array([y10, y20], dtype=float), float(t_end),
        float(max_step), float(rel_tol), float(abs_tol), int(max_samples), _A, _B5, _E)
    if status == 2:
        raise StepUnderflow(f"step size fell below {MIN_STEP} at t={times[-1]}")
    meta = {"model": "reduced", "omega": pc.omega, "max_step": max_step,
            "rel_tol": rel_tol, "abs_tol": abs_tol}
    return Trajectory(times=times, states=states, meta=meta, blowup=status == 1)


# -- method of steps ------------------------------------------------------------------

def _model_rhs(model, params):
    """Return ``(m, rhs)`` with ``rhs(x, v, x_delayed) -> (x', v')`` on length-``m`` arrays."""
    eq = equilibrium(params)
    if model == "fix_truncated":
        b0, btau = linear_coeffs(params, eq)
        mu = params.mu

        def rhs(x, v, xd):
            return v, -mu * v + b0 * x + btau * xd + f2_nonlinear(x, xd, eq, params)
        return 1, rhs
    if model == "fix_linear":
        b0, btau = linear_coeffs(params, eq)
        mu = params.mu

        def rhs(x, v, xd):
            return v, -mu * v + b0 * x + btau * xd
        return 1, rhs
    if model == "fix_exact":
        kmu = params.K * params.mu
        mu = params.mu

        def rhs(x, v, xd):
            a = eq.phi + x
            b = eq.phi + xd
            return v, -mu * v + mu + kmu * (np.sin(b - a) + np.sin(b + a))
        return 1, rhs
    if model == "full_network":
        def rhs(x, v, xd):
            return full_rhs(x, v, xd, params, eq=eq, deviation=True)
        return params.N, rhs
    raise ValueError(f"unknown model {model!r}")


def delay_grid(tau, dt):
    """Largest step not exceeding ``dt`` that divides ``tau`` at least twice."""
    if not dt > 0:
        raise InvalidStep("dt must be positive")
    if not tau > 0:
        raise InvalidStep("the method of steps needs tau > 0")
    n = max(2, math.ceil(tau / dt - 1e-9))
    return tau / n, n


def _history_states(history, m, n, dt):
    if history.kind == "constant-equilibrium-offset":
        hist = np.zeros((n + 1, 2 * m))
        hist[:, :m] = history.eps
        return hist
    if history.kind == "custom-samples":
        if callable(history.samples):
            ts = -n * dt + dt * np.arange(n + 1)
            hist = np.array([np.asarray(history.samples(t), dtype=float) for t in ts])
        else:
            hist = np.asarray(history.samples, dtype=float)
        if hist.shape != (n + 1, 2 * m):
            raise InvalidStep(f"history samples must have shape {(n + 1, 2 * m)}, got {hist.shape}")
        return hist
    raise ValueError(f"unknown history kind {history.kind!r}")


def integrate_dde(params, model, history, dt, t_end, every=1):
    """Integrate a delay model by RK4 on a grid commensurate with ``tau``.

    ``model`` is ``fix_truncated``, ``fix_exact``, ``full_network`` or
    ``fix_linear`` (linear part only, used for convergence checks); states
    are deviations from the equilibrium, positions first then rates. The
    step actually used is recorded in ``meta['dt']``.
    """
    if not t_end > 0:
        raise InvalidStep("t_end must be positive")
    dt, n = delay_grid(params.tau, dt)
    m, rhs = _model_rhs(model, params)
    steps = math.ceil(t_end / dt - 1e-9)

    X = np.empty((n + steps + 1, m))
    V = np.empty((n + steps + 1, m))
    hist = _history_states(history, m, n, dt)
    X[:n + 1] = hist[:, :m]
    V[:n + 1] = hist[:, m:]

    blowup = False
    last = n
    half = 0.5 * dt
    for k in range(n, n + steps):
        x, v = X[k], V[k]
        xd0, xd1 = X[k - n], X[k - n + 1]
        xdm = 0.5 * (xd0 + xd1) + dt * (V[k - n] - V[k - n + 1]) / 8.0
        k1x, k1v = rhs(x, v, xd0)
        k2x, k2v = rhs(x + half * k1x, v + half * k1v, xdm)
        k3x, k3v = rhs(x + half * k2x, v + half * k2v, xdm)
        k4x, k4v = rhs(x + dt * k3x, v + dt * k3v, xd1)
        X[k + 1] = x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        V[k + 1] = v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        last = k + 1
        if not np.all(np.abs(X[k + 1]) + np.abs(V[k + 1]) <= BLOWUP_NORM):
            blowup = True
            break

    idx = np.arange(n, last + 1)[::every]
    if idx[-1] != last:
        idx = np.append(idx, last)
    times = (idx - n) * dt
    states = np.hstack([X[idx], V[idx]])
    meta = {"model": model, "dt": dt, "delay_steps": n, "params": params, "history": history}
    return Trajectory(times=times, states=states, meta=meta, blowup=blowup)


# -- amplitude diagnostics -------------------------------------------------------

def _peak_value(x, i):
    # vertex of the parabola through three samples
    a, b, c = x[i - 1], x[i], x[i + 1]
    denom = a - 2.0 * b + c
    return b if denom == 0.0 else b - 0.125 * (c - a) ** 2 / denom


def amplitude_estimate(tr, component=0, window_fraction=0.2):
    """Mean peak-to-peak amplitude over the trailing window and its log trend.

    Returns ``(mean_amplitude, trend_slope)`` where the slope is the least
    squares rate of change of log cycle amplitude per unit time.
    """
    if len(tr.times) < 100:
        raise TooShort(f"need at least 100 samples, got {len(tr.times)}")
    start = int(len(tr.times) * (1.0 - window_fraction))
    t = tr.times[start:]
    x = tr.states[start:, component]
    inner = slice(1, len(x) - 1)
    peaks = np.flatnonzero((x[inner] > x[:-2]) & (x[inner] >= x[2:])) + 1
    troughs = np.flatnonzero((x[inner] < x[:-2]) & (x[inner] <= x[2:])) + 1
    if len(peaks) < 3 or len(troughs) < 2:
        return float(np.ptp(x)), 0.0
    amps = []
    mids = []
    for p0, p1 in zip(peaks[:-1], peaks[1:]):
        inside = troughs[(troughs > p0) & (troughs < p1)]
        if len(inside) == 0:
            continue
        top = 0.5 * (_peak_value(x, p0) + _peak_value(x, p1))
        bottom = min(_peak_value(x, i) for i in inside)
        amps.append(top - bottom)
        mids.append(0.5 * (t[p0] + t[p1]))
    amps = np.asarray(amps)
    if len(amps) < 2 or np.any(amps <= 0.0):
        return float(amps.mean()) if len(amps) else float(np.ptp(x)), 0.0
    slope = np.polyfit(np.asarray(mids), np.log(amps), 1)[0]
    return float(amps.mean()), float(slope)
