"""Inverse-optimal path-following controller.

Lateral deviation is corrected by translating the holonomic vehicle:
the speed command V splits into surge/sway through a movement angle
beta that points the translation back toward the path. Heading is
corrected by a damping control u on the error subsystem

    d/dt [e2, e3] = f(e) + g(e) u,
    f = [V_r sin(e3) - V sin(beta), omega_r],   g = [0, -1]

using Sontag's universal formula on the control Lyapunov function
V0 = 1/2 K2 e2^2 + 1/2 K3 e3^2, which makes u inverse optimal and
guarantees V0dot = a + b u <= -c0 b^2 wherever b != 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ErrorState

# |b| at or below this is treated as b = 0 in the Sontag formula
B_EPS = 1e-12


@dataclass(frozen=True)
class ControllerGains:
    alpha: float = 1.0
    k2: float = 1.0
    k3: float = 1.0
    c0: float = 1.0


@dataclass(frozen=True)
class ControlCommand:
    beta: float
    v_xi: float
    v_eta: float
    u: float  # heading command, saturated to omega_max
    u_raw: float  # pre-saturation value from the formula
    saturated: bool


def velocity_conversion(v: float, e2: float, alpha: float) -> tuple[float, float, float]:
    """Split speed V into (beta, v_xi, v_eta) pointing back at the path.

    beta must carry e2's sign: with e3 = 0 the CLF derivative reduces to
    -K2 e2 V sin(beta), which is dissipative only for beta = atan(alpha*e2).
    """
    beta = math.atan(alpha * e2)
    return beta, v * math.cos(beta), v * math.sin(beta)


def clf_value(e2: float, e3: float, k2: float, k3: float) -> float:
    return 0.5 * k2 * e2 * e2 + 0.5 * k3 * e3 * e3


def lie_derivatives(e2: float, e3: float, v: float, beta: float,
                    v_r: float, omega_r: float, k2: float, k3: float) -> tuple[float, float]:
    """a = LfV0 and b = LgV0 of the error subsystem."""
    f1 = v_r * math.sin(e3) - v * math.sin(beta)
    a = k2 * e2 * f1 + k3 * e3 * omega_r
    b = -k3 * e3
    return a, b


def sontag_gain(a: float, b: float, c0: float) -> float:
    """Damping gain p of Sontag's formula, p = c0 on the b = 0 set."""
    if abs(b) <= B_EPS:
        return c0
    b2 = b * b
    return c0 + (a + math.sqrt(a * a + b2 * b2)) / b2


def control(err: ErrorState, v: float, gains: ControllerGains, omega_max: float) -> ControlCommand:
    """Full control step from a gated error state.

    err must already carry V_r and omega_r consistent with (v, err.e2,
    err.e3); saturation is applied after the formula and flagged.
    """
    beta, v_xi, v_eta = velocity_conversion(v, err.e2, gains.alpha)
    a, b = lie_derivatives(err.e2, err.e3, v, beta, err.v_r, err.omega_r, gains.k2, gains.k3)
    u_raw = -sontag_gain(a, b, gains.c0) * b
    u = min(max(u_raw, -omega_max), omega_max)
    return ControlCommand(beta, v_xi, v_eta, u, u_raw, u != u_raw)
