import math
import random

import pytest

from coopfollow.path import InspectionObject, build_path, detect
from coopfollow.se2 import Pose

PI = math.pi


def line_path(length=5.0, start=None):
    return build_path(start or Pose(0.0, 0.0, 0.0),
                      [{"kind": "line", "length": length}])


def u_path():
    """West 3.1, two right quarter turns of r 0.6, back east 3.1."""
    return build_path(Pose(4.3, 0.5, PI), [
        {"kind": "line", "length": 3.1},
        {"kind": "arc", "radius": 0.6, "angle": -PI / 2},
        {"kind": "line", "length": 0.8},
        {"kind": "arc", "radius": 0.6, "angle": -PI / 2},
        {"kind": "line", "length": 3.1},
    ])


# ---- geometry oracles -----------------------------------------------------

def test_line_point_at():
    p = line_path().point_at(2.0)
    assert (p.pose.x, p.pose.y, p.pose.theta) == (2.0, 0.0, 0.0)
    assert p.curvature == 0.0
    assert p.s == 2.0


def test_quarter_arc_endpoint_analytic():
    # left quarter turn of radius 2 from the origin ends at (2, 2) heading +y
    path = build_path(Pose(0.0, 0.0, 0.0), [{"kind": "arc", "radius": 2.0, "angle": PI / 2}])
    assert abs(path.total_length - PI) < 1e-12
    end = path.point_at(path.total_length).pose
    assert abs(end.x - 2.0) < 1e-12
    assert abs(end.y - 2.0) < 1e-12
    assert abs(end.theta - PI / 2) < 1e-12


def test_right_arc_turns_clockwise():
    path = build_path(Pose(0.0, 0.0, 0.0), [{"kind": "arc", "radius": 1.0, "angle": -PI / 2}])
    end = path.point_at(path.total_length).pose
    assert abs(end.x - 1.0) < 1e-12
    assert abs(end.y - (-1.0)) < 1e-12
    assert abs(end.theta - (-PI / 2)) < 1e-12


def test_segment_chaining_u_course():
    path = u_path()
    assert abs(path.total_length - (3.1 + 0.8 + 3.1 + 0.6 * PI)) < 1e-12
    end = path.point_at(path.total_length).pose
    # the U opens east: last straight runs along y = 2.5 back to x = 4.3
    assert abs(end.x - 4.3) < 1e-9
    assert abs(end.y - 2.5) < 1e-9
    assert abs(end.theta - 0.0) < 1e-9 or abs(end.theta - 2 * PI) < 1e-9


def test_point_at_clamps_to_ends():
    path = line_path(5.0)
    assert path.point_at(-1.0).pose.x == 0.0
    assert path.point_at(99.0).pose.x == 5.0


# ---- projection -----------------------------------------------------------

def test_project_onto_line_interior_and_endpoints():
    path = line_path(5.0)
    p = path.project(2.0, 1.0)
    assert p.s == 2.0
    assert abs(path.distance_to(2.0, 1.0) - 1.0) < 1e-15
    # beyond the far end clamps to the endpoint
    p = path.project(7.0, 1.0)
    assert p.s == 5.0
    assert abs(path.distance_to(7.0, 1.0) - math.hypot(2.0, 1.0)) < 1e-12


def test_project_equidistant_tie_prefers_smaller_s():
    path = u_path()
    # (3.0, 1.5) sits exactly between the first straight (y=0.5) and the
    # last straight (y=2.5); the tie must resolve to the earlier station
    p = path.project(3.0, 1.5)
    assert abs(p.s - (4.3 - 3.0)) < 1e-12
    assert abs(path.distance_to(3.0, 1.5) - 1.0) < 1e-12


def test_project_matches_dense_scan_oracle():
    path = u_path()
    rng = random.Random(42)
    n = 4000
    grid = [path.point_at(i * path.total_length / n) for i in range(n + 1)]
    for _ in range(150):
        x = rng.uniform(-0.5, 5.5)
        y = rng.uniform(-0.5, 3.2)
        p = path.project(x, y)
        d = math.hypot(x - p.pose.x, y - p.pose.y)
        d_scan = min(math.hypot(x - g.pose.x, y - g.pose.y) for g in grid)
        assert d <= d_scan + 1e-9  # projection is at least as close as any sample


def test_project_inverts_point_at():
    path = u_path()
    for i in range(1, 80):
        s = i * path.total_length / 80
        pt = path.point_at(s)
        back = path.project(pt.pose.x, pt.pose.y)
        assert abs(back.s - s) < 1e-9


def test_arc_projection_radial():
    path = build_path(Pose(0.0, 0.0, 0.0), [{"kind": "arc", "radius": 2.0, "angle": PI / 2}])
    # a point radially outside the arc's midpoint projects onto it
    mid = path.point_at(PI / 2).pose
    cx, cy = 0.0, 2.0
    out = (cx + 3.0 * (mid.x - cx) / 2.0, cy + 3.0 * (mid.y - cy) / 2.0)
    p = path.project(out[0], out[1])
    assert abs(p.s - PI / 2) < 1e-9
    assert abs(path.distance_to(*out) - 1.0) < 1e-12


# ---- gaps, objects, detection ----------------------------------------------

def test_gap_interval_inclusive():
    path = build_path(Pose(0.0, 0.0, 0.0), [{"kind": "line", "length": 5.0}],
                      gaps=[(1.4, 1.7)])
    assert path.in_gap(1.4)
    assert path.in_gap(1.55)
    assert path.in_gap(1.7)
    assert not path.in_gap(1.3999)
    assert not path.in_gap(1.7001)


def test_detect_handles_gap_and_range():
    path = build_path(Pose(0.0, 0.0, 0.0), [{"kind": "line", "length": 5.0}],
                      gaps=[(2.0, 3.0)])
    ok, proj, dist = detect(path, Pose(1.0, 0.1, 0.0), 0.5)
    assert ok and abs(dist - 0.1) < 1e-15 and abs(proj.s - 1.0) < 1e-12
    # same lateral distance but the projection falls inside the gap
    ok, proj, _ = detect(path, Pose(2.5, 0.1, 0.0), 0.5)
    assert not ok and proj.in_gap
    # marked section but out of sensing range
    ok, _, dist = detect(path, Pose(1.0, 0.8, 0.0), 0.5)
    assert not ok and abs(dist - 0.8) < 1e-15


def test_object_world_position_left_offset():
    path = line_path(5.0)
    ob = InspectionObject(s=2.0, lateral_offset=0.5, slit_count=3)
    x, y = ob.world_position(path)
    assert abs(x - 2.0) < 1e-15
    assert abs(y - 0.5) < 1e-15  # +offset is left of the +x tangent


def test_object_world_position_on_arc():
    path = build_path(Pose(0.0, 0.0, 0.0), [{"kind": "arc", "radius": 2.0, "angle": PI / 2}])
    ob = InspectionObject(s=PI / 2, lateral_offset=0.3, slit_count=1)
    x, y = ob.world_position(path)
    # left of the tangent on a left turn points at the center
    mid = path.point_at(PI / 2).pose
    assert math.hypot(x - 0.0, y - 2.0) < math.hypot(mid.x - 0.0, mid.y - 2.0)


# ---- validation -----------------------------------------------------------

def test_build_rejects_bad_segments():
    with pytest.raises(ValueError, match="at least one segment"):
        build_path(Pose(0, 0, 0), [])
    with pytest.raises(ValueError, match="segment 0.*length"):
        build_path(Pose(0, 0, 0), [{"kind": "line", "length": -1.0}])
    with pytest.raises(ValueError, match="segment 0.*radius"):
        build_path(Pose(0, 0, 0), [{"kind": "arc", "radius": 0.0, "angle": 1.0}])
    with pytest.raises(ValueError, match="segment 0.*angle"):
        build_path(Pose(0, 0, 0), [{"kind": "arc", "radius": 1.0, "angle": 0.0}])
    with pytest.raises(ValueError, match="segment 1.*kind"):
        build_path(Pose(0, 0, 0), [{"kind": "line", "length": 1.0}, {"kind": "bezier"}])


def test_build_rejects_bad_gaps_and_objects():
    segs = [{"kind": "line", "length": 5.0}]
    with pytest.raises(ValueError, match="gap 0"):
        build_path(Pose(0, 0, 0), segs, gaps=[(4.0, 6.0)])
    with pytest.raises(ValueError, match="gap 0"):
        build_path(Pose(0, 0, 0), segs, gaps=[(2.0, 2.0)])
    with pytest.raises(ValueError, match="overlaps"):
        build_path(Pose(0, 0, 0), segs, gaps=[(1.0, 2.0), (1.5, 3.0)])
    with pytest.raises(ValueError, match="object 0"):
        build_path(Pose(0, 0, 0), segs,
                   objects=[InspectionObject(9.0, 0.0, 1)])
