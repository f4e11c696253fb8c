"""Cooperative path-following simulator with haptic shared control.

A deterministic 2D simulator and controller library for a holonomic
vehicle that follows a piecewise line/arc path. The heading loop is an
inverse-optimal controller (Sontag's universal formula on a control
Lyapunov function of the path errors); the lateral loop corrects by
direct translation. Operator and controller meet at a force-feedback
joystick, so the artifact can compare manual control against
cooperative control with synthetic or live human operators.
"""

__version__ = "0.1.0"

from .se2 import Pose, wrap_angle
from .path import PathModel, build_path
from .scenario import Scenario, load_scenario, default_scenario
from .engine import Simulation, run, batch
from .metrics import Metrics, compute_metrics

__all__ = [
    "Pose",
    "wrap_angle",
    "PathModel",
    "build_path",
    "Scenario",
    "load_scenario",
    "default_scenario",
    "Simulation",
    "run",
    "batch",
    "Metrics",
    "compute_metrics",
]
