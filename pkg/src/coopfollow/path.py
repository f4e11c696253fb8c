"""Piecewise line/arc reference paths.

A path is a chain of constant-curvature segments (straight lines and
circular arcs) parameterized by arclength s. Segments are chained so the
end pose of one is the start pose of the next; curvature is piecewise
constant (0 on lines, +/- 1/radius on arcs, positive = left turn).

Gaps are closed arclength intervals where the painted path is missing:
a robot whose projection falls inside a gap cannot detect the path no
matter how close it is. Inspection objects sit at an arclength station
with a lateral offset and carry a slit count for the operator's
secondary counting task.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

from .se2 import Pose

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Segment:
    """One constant-curvature piece of a path."""

    kind: str  # "line" | "arc"
    start: Pose
    length: float
    curvature: float  # 0 for lines, signed 1/radius for arcs

    def point_at(self, u: float) -> Pose:
        """Pose at local arclength u in [0, length]."""
        u = min(max(u, 0.0), self.length)
        th0 = self.start.theta
        if self.curvature == 0.0:
            return Pose(
                self.start.x + u * math.cos(th0),
                self.start.y + u * math.sin(th0),
                th0,
            )
        rho = self.curvature
        cx, cy = self._center()
        th = th0 + rho * u
        return Pose(cx + math.sin(th) / rho, cy - math.cos(th) / rho, th)

    def _center(self) -> tuple[float, float]:
        # turn center sits 1/rho to the left of the heading (right if rho < 0)
        rho = self.curvature
        return (
            self.start.x - math.sin(self.start.theta) / rho,
            self.start.y + math.cos(self.start.theta) / rho,
        )

    def project(self, x: float, y: float) -> tuple[float, float]:
        """Local arclength and distance of the nearest point to (x, y)."""
        if self.curvature == 0.0:
            hx, hy = math.cos(self.start.theta), math.sin(self.start.theta)
            u = (x - self.start.x) * hx + (y - self.start.y) * hy
            u = min(max(u, 0.0), self.length)
            p = self.point_at(u)
            return u, math.hypot(x - p.x, y - p.y)
        rho = self.curvature
        cx, cy = self._center()
        psi0 = math.atan2(self.start.y - cy, self.start.x - cx)
        psi = math.atan2(y - cy, x - cx)
        # angular offset from the start point, measured along the sweep
        d = math.fmod(psi - psi0, _TWO_PI) if rho > 0 else math.fmod(psi0 - psi, _TWO_PI)
        if d < 0.0:
            d += _TWO_PI
        u = d / abs(rho)
        if u <= self.length:
            return u, abs(math.hypot(x - cx, y - cy) - 1.0 / abs(rho))
        # off the angular span: clamp to the nearer endpoint, start wins ties
        p0 = self.point_at(0.0)
        p1 = self.point_at(self.length)
        d0 = math.hypot(x - p0.x, y - p0.y)
        d1 = math.hypot(x - p1.x, y - p1.y)
        if d1 < d0:
            return self.length, d1
        return 0.0, d0


@dataclass(frozen=True)
class InspectionObject:
    s: float
    lateral_offset: float  # + left of the path tangent
    slit_count: int

    def world_position(self, path: "PathModel") -> tuple[float, float]:
        pose = path.point_at(self.s).pose
        return (
            pose.x - self.lateral_offset * math.sin(pose.theta),
            pose.y + self.lateral_offset * math.cos(pose.theta),
        )


@dataclass(frozen=True)
class PathPoint:
    """Result of projecting a position onto the path."""

    pose: Pose
    s: float
    curvature: float
    in_gap: bool


@dataclass(frozen=True)
class PathModel:
    segments: tuple[Segment, ...]
    cum_lengths: tuple[float, ...]  # start arclength of each segment
    total_length: float
    gaps: tuple[tuple[float, float], ...]
    objects: tuple[InspectionObject, ...]

    def in_gap(self, s: float) -> bool:
        return any(g0 <= s <= g1 for g0, g1 in self.gaps)

    def point_at(self, s: float) -> PathPoint:
        """Pose/curvature at arclength s, clamped to [0, total_length]."""
        s = min(max(s, 0.0), self.total_length)
        i = bisect_right(self.cum_lengths, s) - 1
        i = min(max(i, 0), len(self.segments) - 1)
        seg = self.segments[i]
        return PathPoint(seg.point_at(s - self.cum_lengths[i]), s, seg.curvature, self.in_gap(s))

    def project(self, x: float, y: float) -> PathPoint:
        """Nearest path point to (x, y); smallest s wins exact ties."""
        best_i = 0
        best_u = 0.0
        best_d = math.inf
        for i, seg in enumerate(self.segments):
            u, d = seg.project(x, y)
            if d < best_d:
                best_i, best_u, best_d = i, u, d
        seg = self.segments[best_i]
        s = self.cum_lengths[best_i] + best_u
        return PathPoint(seg.point_at(best_u), s, seg.curvature, self.in_gap(s))

    def distance_to(self, x: float, y: float) -> float:
        p = self.project(x, y).pose
        return math.hypot(x - p.x, y - p.y)


def build_path(
    start: Pose,
    segments: list[dict],
    gaps: list[tuple[float, float]] | None = None,
    objects: list[InspectionObject] | None = None,
) -> PathModel:
    """Chain segment descriptors into a PathModel.

    Descriptors are ``{"kind": "line", "length": L}`` or
    ``{"kind": "arc", "radius": r, "angle": sweep}`` with sweep in
    radians, positive for a left turn. Raises ValueError on malformed
    descriptors, out-of-range gaps/objects or overlapping gaps.
    """
    if not segments:
        raise ValueError("path needs at least one segment")
    built: list[Segment] = []
    cum: list[float] = []
    pose = start
    total = 0.0
    for k, d in enumerate(segments):
        kind = d.get("kind")
        if kind == "line":
            length = float(d["length"])
            if not (length > 0.0) or not math.isfinite(length):
                raise ValueError(f"segment {k}: line length must be positive, got {length}")
            seg = Segment("line", pose, length, 0.0)
        elif kind == "arc":
            radius = float(d["radius"])
            angle = float(d["angle"])
            if not (radius > 0.0) or not math.isfinite(radius):
                raise ValueError(f"segment {k}: arc radius must be positive, got {radius}")
            if angle == 0.0 or not math.isfinite(angle):
                raise ValueError(f"segment {k}: arc angle must be nonzero, got {angle}")
            seg = Segment("arc", pose, radius * abs(angle), math.copysign(1.0 / radius, angle))
        else:
            raise ValueError(f"segment {k}: unknown kind {kind!r}")
        built.append(seg)
        cum.append(total)
        total += seg.length
        pose = seg.point_at(seg.length)

    gap_list = sorted(tuple((float(a), float(b)) for a, b in (gaps or [])))
    for j, (g0, g1) in enumerate(gap_list):
        if not (0.0 <= g0 < g1 <= total):
            raise ValueError(f"gap {j}: interval ({g0}, {g1}) outside path arclength [0, {total}]")
        if j > 0 and g0 < gap_list[j - 1][1]:
            raise ValueError(f"gap {j}: overlaps previous gap")
    obj_list = tuple(objects or [])
    for j, ob in enumerate(obj_list):
        if not (0.0 <= ob.s <= total):
            raise ValueError(f"object {j}: station s={ob.s} outside path arclength [0, {total}]")

    return PathModel(tuple(built), tuple(cum), total, tuple(gap_list), obj_list)


def detect(path: PathModel, pose: Pose, sensing_radius: float) -> tuple[bool, PathPoint, float]:
    """Path detection at a robot pose.

    Detected iff the nearest path point is within sensing_radius and its
    arclength does not fall in a gap. Returns (detected, projection,
    distance); the projection is returned either way so callers can log
    true errors while undetected.
    """
    proj = path.project(pose.x, pose.y)
    dist = math.hypot(pose.x - proj.pose.x, pose.y - proj.pose.y)
    return (dist <= sensing_radius and not proj.in_gap), proj, dist
