import math
import random

from hypothesis import given, settings
from hypothesis import strategies as st

from coopfollow.se2 import Pose, wrap_angle

PI = math.pi


def test_wrap_angle_frozen_points():
    assert wrap_angle(0.0) == 0.0
    assert wrap_angle(PI) == PI
    assert wrap_angle(-PI) == PI  # range is (-pi, pi], so -pi maps to +pi
    assert abs(wrap_angle(3 * PI / 2) - (-PI / 2)) < 1e-15
    assert abs(wrap_angle(-3 * PI / 2) - (PI / 2)) < 1e-15
    assert abs(wrap_angle(2 * PI)) < 1e-15
    assert abs(wrap_angle(7 * PI) - PI) < 1e-12


@settings(max_examples=300, derandomize=True)
@given(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False))
def test_wrap_angle_range_and_congruence(a):
    w = wrap_angle(a)
    assert -PI < w <= PI
    # w and a differ by an integer multiple of 2*pi
    k = (a - w) / (2 * PI)
    assert abs(k - round(k)) < 1e-6


def test_wrap_angle_idempotent():
    rng = random.Random(7)
    for _ in range(200):
        a = rng.uniform(-50.0, 50.0)
        w = wrap_angle(a)
        assert wrap_angle(w) == w


def test_pose_heading_unit_vector():
    p = Pose(1.0, 2.0, 2.3)
    hx, hy = p.heading()
    assert abs(hx - math.cos(2.3)) < 1e-15
    assert abs(hy - math.sin(2.3)) < 1e-15
    assert abs(math.hypot(hx, hy) - 1.0) < 1e-15
