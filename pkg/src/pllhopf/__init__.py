"""Stability of Hopf-born periodic orbits in delay-coupled PLL networks."""

from .hopf import Direction, HopfPoint, trace_curves
from .model import Equilibrium, ModelParams, equilibrium, linearization
from .normalform import PlanarCubic, analyze_point, lyapunov_a, scan_lyapunov

__all__ = [
    "Direction",
    "Equilibrium",
    "HopfPoint",
    "ModelParams",
    "PlanarCubic",
    "analyze_point",
    "equilibrium",
    "linearization",
    "lyapunov_a",
    "scan_lyapunov",
    "trace_curves",
]
