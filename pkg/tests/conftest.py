import math

import pytest

from coopfollow.scenario import default_scenario, scenario_from_dict


@pytest.fixture(scope="session")
def u_cc():
    return default_scenario("CC")


@pytest.fixture(scope="session")
def u_mc():
    return default_scenario("MC")


def straight_scenario(**overrides):
    """A 20 m straight line; keyword overrides merge into the top level."""
    base = {
        "path": {"start": [0.0, 0.0, 0.0], "segments": [{"kind": "line", "length": 20.0}]},
        "mode": "CC",
        "max_duration": 120.0,
    }
    base.update(overrides)
    return scenario_from_dict(base)


def offset_start(e2: float, e3: float, x: float = 1.0):
    """Start pose on a +x straight with exact body-frame errors (e2, e3).

    The projection of the pose onto y = 0 is (x, 0, 0); the lateral
    body error of that reference point is y * cos(theta), so y is
    scaled to make e2 come out exact.
    """
    theta = -e3
    return [x, -e2 / math.cos(theta), theta]
