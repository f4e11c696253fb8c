"""Holonomic vehicle kinematics.

The vehicle is a rigid body on SE(2) driven by a body-frame velocity
command (surge v_xi, sway v_eta, turn rate omega):

    qdot = R(theta) [v_xi, v_eta, omega]

Commands saturate to the configured limits, pass through a first-order
actuator lag with time constant tau (tau = 0 tracks exactly), and the
pose then advances by the exact SE(2) closed form for one step of
constant body velocity, so there is no integration drift for straight
lines or circular motion at any dt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .se2 import Pose

# below this |omega| the closed form divides by ~0; switch to its series
_OMEGA_EPS = 1e-9


@dataclass(frozen=True)
class BodyVelocity:
    v_xi: float
    v_eta: float
    omega: float


@dataclass(frozen=True)
class VehicleLimits:
    v_max: float = 0.3
    omega_max: float = 1.5
    tau: float = 0.2


@dataclass(frozen=True)
class VehicleState:
    pose: Pose
    realized: BodyVelocity  # actuator output, lags the command


def body_to_world(pose: Pose, vel: BodyVelocity) -> tuple[float, float, float]:
    """World-frame velocity (xdot, ydot, thetadot) of a body-frame command."""
    c, s = math.cos(pose.theta), math.sin(pose.theta)
    return (c * vel.v_xi - s * vel.v_eta, s * vel.v_xi + c * vel.v_eta, vel.omega)


def saturate(cmd: BodyVelocity, limits: VehicleLimits) -> tuple[BodyVelocity, bool]:
    """Clip a command to the vehicle limits.

    The planar part is scaled (direction preserved) so that
    ||(v_xi, v_eta)|| <= v_max; omega clamps to +/- omega_max. Returns
    the clipped command and whether anything was clipped.
    """
    v_xi, v_eta, omega = cmd.v_xi, cmd.v_eta, cmd.omega
    clipped = False
    n = math.hypot(v_xi, v_eta)
    if n > limits.v_max:
        scale = limits.v_max / n
        v_xi *= scale
        v_eta *= scale
        clipped = True
    if abs(omega) > limits.omega_max:
        omega = math.copysign(limits.omega_max, omega)
        clipped = True
    return BodyVelocity(v_xi, v_eta, omega), clipped


def step(state: VehicleState, cmd: BodyVelocity, dt: float, limits: VehicleLimits) -> VehicleState:
    """Advance one fixed step of length dt under a body-velocity command."""
    if not (0.0 < dt <= 0.1):
        raise ValueError(f"dt must be in (0, 0.1], got {dt}")
    for v in (cmd.v_xi, cmd.v_eta, cmd.omega, state.pose.x, state.pose.y, state.pose.theta):
        if not math.isfinite(v):
            raise ValueError("non-finite vehicle input")
    cmd, _ = saturate(cmd, limits)

    if limits.tau > 0.0:
        k = math.exp(-dt / limits.tau)
        real = BodyVelocity(
            cmd.v_xi + (state.realized.v_xi - cmd.v_xi) * k,
            cmd.v_eta + (state.realized.v_eta - cmd.v_eta) * k,
            cmd.omega + (state.realized.omega - cmd.omega) * k,
        )
    else:
        real = cmd

    w = real.omega
    wdt = w * dt
    if abs(w) < _OMEGA_EPS:
        s_ = dt * (1.0 - wdt * wdt / 6.0)
        c_ = 0.5 * w * dt * dt * (1.0 - wdt * wdt / 12.0)
    else:
        s_ = math.sin(wdt) / w
        # 2 sin^2(x/2) avoids the cancellation in 1 - cos(x) for small x
        half = math.sin(0.5 * wdt)
        c_ = 2.0 * half * half / w
    u1 = s_ * real.v_xi - c_ * real.v_eta
    u2 = c_ * real.v_xi + s_ * real.v_eta
    ct, st = math.cos(state.pose.theta), math.sin(state.pose.theta)
    pose = Pose(
        state.pose.x + ct * u1 - st * u2,
        state.pose.y + st * u1 + ct * u2,
        state.pose.theta + wdt,
    )
    return VehicleState(pose, real)
