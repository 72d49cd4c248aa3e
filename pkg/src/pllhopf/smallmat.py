"""Small dense linear algebra.

Gaussian elimination with partial pivoting for the (at most 12x12) systems
that appear in the center-manifold computation, and the closed-form
exponential of the 6x6 block matrix ``C`` that drives the quadratic
manifold coefficients.
"""

import numpy as np

from .errors import DimensionMismatch, SingularMatrix

MAX_DIM = 12
PIVOT_RTOL = 1e-13


def solve_linear(A, b):
    """Solve ``A x = b`` by Gaussian elimination with partial pivoting.

    Works for real or complex input. Raises :class:`SingularMatrix` when a
    pivot falls below ``1e-13`` times the largest entry of the initial
    pivot column.
    """
    A = np.asarray(A)
    b = np.asarray(b)
    n = A.shape[0]
    if A.ndim != 2 or A.shape[1] != n:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    if n > MAX_DIM:
        raise DimensionMismatch(f"system size {n} exceeds {MAX_DIM}")
    if b.shape != (n,):
        raise DimensionMismatch(f"right-hand side has shape {b.shape}, expected ({n},)")

    dtype = np.result_type(A.dtype, b.dtype, np.float64)
    a = A.astype(dtype, copy=True)
    x = b.astype(dtype, copy=True)

    for k in range(n):
        col = np.abs(a[k:, k])
        p = k + int(np.argmax(col))
        if col[p - k] <= PIVOT_RTOL * np.abs(A[:, k]).max():
            raise SingularMatrix(f"pivot {k} vanishes")
        if p != k:
            a[[k, p]] = a[[p, k]]
            x[[k, p]] = x[[p, k]]
        factors = a[k + 1:, k] / a[k, k]
        a[k + 1:, k:] -= np.outer(factors, a[k, k:])
        x[k + 1:] -= factors * x[k]

    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - a[k, k + 1:] @ x[k + 1:]) / a[k, k]
    return x


def block_C(omega):
    """The 6x6 matrix coupling ``h1, h2, h3`` in the manifold ODE."""
    I = np.eye(2)
    Z = np.zeros((2, 2))
    return omega * np.block([[Z, -2 * I, Z], [I, Z, -I], [Z, 2 * I, Z]])


def exp_C(omega, theta):
    """``exp(C*theta)`` in closed form.

    The minimal polynomial of ``C`` is ``s (s^2 + 4 omega^2)``, so the series
    collapses to ``I + C sin(2wt)/(2w) + C^2 (1 - cos(2wt))/(4w^2)``.
    """
    if not omega > 0:
        raise ValueError("omega must be positive")
    C = block_C(omega)
    two_wt = 2.0 * omega * theta
    return (np.eye(6) + C * (np.sin(two_wt) / (2.0 * omega))
            + (C @ C) * ((1.0 - np.cos(two_wt)) / (4.0 * omega**2)))
