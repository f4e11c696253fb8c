"""Path-following error frame and reference-robot signals.

Errors are expressed in the robot body frame:

    [e1, e2]' = R(theta)' [x_r - x, y_r - y],   e3 = wrap(theta_r - theta)

where (x_r, y_r, theta_r) is the reference pose on the path. The
reference robot is re-projected from the robot position every tick
rather than integrating its own state; its speed V_r is the one that
would keep the longitudinal error at zero,

    V_r = (V cos(beta) - e2 * omega) / cos(e3)

and its turn rate follows the path curvature, omega_r = rho * V_r.
omega is the turn rate applied on the previous step (one-step lag);
|e3| is clamped before the division so the quotient stays bounded.

Gating implements the shared-control handover: while the path is
undetected or the operator holds the override, the controller-facing
copy of the errors has e2 = e3 = 0, which drives both the translation
correction and the heading command to zero. True errors are kept
untouched for metrics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .se2 import Pose, wrap_angle

E3_CLAMP = 1.2  # rad, keeps cos(e3) well away from 0 in the V_r quotient


@dataclass(frozen=True)
class ErrorState:
    e1: float
    e2: float
    e3: float
    v_r: float
    omega_r: float
    rho: float
    detected: bool


def compute_errors(robot: Pose, ref: Pose) -> tuple[float, float, float]:
    """Body-frame errors (e1, e2, e3) of a reference pose."""
    dx = ref.x - robot.x
    dy = ref.y - robot.y
    c, s = math.cos(robot.theta), math.sin(robot.theta)
    return (c * dx + s * dy, -s * dx + c * dy, wrap_angle(ref.theta - robot.theta))


def reference_speed(v: float, beta: float, e2: float, e3: float,
                    omega_applied: float, v_r_max: float) -> float:
    """Reference-robot speed that holds the longitudinal error at zero."""
    e3c = min(max(e3, -E3_CLAMP), E3_CLAMP)
    v_r = (v * math.cos(beta) - e2 * omega_applied) / math.cos(e3c)
    return min(max(v_r, -v_r_max), v_r_max)


def reference_turn_rate(rho: float, v_r: float) -> float:
    """Turn rate of a reference robot moving along the path at V_r."""
    return rho * v_r


def gate(err: ErrorState, detected: bool, override: bool) -> ErrorState:
    """Controller-facing error copy; zeroed while undetected or overridden."""
    if detected and not override:
        return err
    return replace(err, e2=0.0, e3=0.0)
