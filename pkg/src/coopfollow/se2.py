"""Planar pose type and angle helpers shared across the package."""

from __future__ import annotations

import math
from dataclasses import dataclass


def wrap_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    w = math.fmod(a + math.pi, 2.0 * math.pi)
    if w <= 0.0:
        w += 2.0 * math.pi
    return w - math.pi


@dataclass(frozen=True)
class Pose:
    """Planar pose (x, y, theta). theta is not wrapped; consumers wrap
    differences, never absolute headings."""

    x: float
    y: float
    theta: float

    def heading(self) -> tuple[float, float]:
        return math.cos(self.theta), math.sin(self.theta)
