"""Force-feedback joystick at the shared-control interface.

The lateral axis phi_y is a mass-damper pushed by the haptic guidance
force and by the operator; its deflection commands the turn rate
through an invertible linear map omega = k_omega * phi_y. Guidance is a
restoring force toward the controller's suggested deflection

    phi_d = clamp(u / k_omega, -1, 1)
    F = K_p (phi_d - phi_y) - K_d * phi_y_dot

so a passive hand is steered by the controller while a firm operator
can win: the force is bounded, and a constant opposing force larger
than 2 K_p parks the stick at the opposite hard stop.

The longitudinal axis phi_x is position-commanded (no haptics) and maps
to speed V = k_v * max(phi_x, 0); reverse is disabled unless configured.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class HapticGains:
    k_p: float = 2.0
    k_d: float = 0.5
    k_omega: float = 1.0  # rad/s per unit deflection
    k_v: float = 0.3  # m/s per unit deflection
    stick_mass: float = 0.05
    stick_damping: float = 0.8
    allow_reverse: bool = False
    # bypass the stick: the heading command reaches the vehicle directly
    direct_drive: bool = False


@dataclass(frozen=True)
class JoystickState:
    phi_x: float = 0.0
    phi_y: float = 0.0
    phi_y_dot: float = 0.0


def stick_to_omega(phi_y: float, k_omega: float) -> float:
    return k_omega * phi_y


def omega_to_stick(u: float, k_omega: float) -> float:
    """Deflection suggesting turn rate u; clamped to the stick range."""
    return min(max(u / k_omega, -1.0), 1.0)


def stick_to_speed(phi_x: float, k_v: float, allow_reverse: bool = False) -> float:
    phi = min(max(phi_x, -1.0), 1.0)
    if not allow_reverse:
        phi = max(phi, 0.0)
    return k_v * phi


def guidance_force(phi_y: float, phi_d: float, phi_y_dot: float,
                   k_p: float, k_d: float) -> float:
    """Restoring guidance toward phi_d with damping on stick velocity."""
    return k_p * (phi_d - phi_y) - k_d * phi_y_dot


def joystick_step(state: JoystickState, guidance: float, f_human: float,
                  dt: float, gains: HapticGains,
                  phi_x_cmd: float | None = None,
                  phi_d: float | None = None) -> JoystickState:
    """One semi-implicit Euler step of the lateral stick dynamics.

        m phi_y_ddot = F_guidance + F_human - b phi_y_dot

    Velocity update uses old-position forces, position uses the new
    velocity; velocity-feedback terms integrate implicitly (the device
    damping b, and the rendered damping K_d when phi_d is given so the
    guidance can be split into spring and damping parts). Hard stops at
    +/-1 clamp the deflection and zero the velocity. phi_x_cmd, when
    given, repositions the longitudinal axis directly.

    guidance must be the force at the pre-step state; it is used as-is
    when phi_d is None.
    """
    if not (0.0 < dt <= 0.1):
        raise ValueError(f"dt must be in (0, 0.1], got {dt}")
    if not (math.isfinite(guidance) and math.isfinite(f_human)):
        raise ValueError("non-finite joystick force")
    m = gains.stick_mass
    if phi_d is None:
        force = guidance + f_human
        damping = gains.stick_damping
    else:
        force = gains.k_p * (phi_d - state.phi_y) + f_human
        damping = gains.stick_damping + gains.k_d
    vel = (state.phi_y_dot + dt * force / m) / (1.0 + dt * damping / m)
    pos = state.phi_y + dt * vel
    if pos > 1.0:
        pos, vel = 1.0, 0.0
    elif pos < -1.0:
        pos, vel = -1.0, 0.0
    phi_x = state.phi_x if phi_x_cmd is None else min(max(phi_x_cmd, -1.0), 1.0)
    return JoystickState(phi_x, pos, vel)
