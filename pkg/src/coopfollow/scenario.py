"""Scenario configuration.

A scenario fully determines a run: path spec, gaps, inspection objects,
vehicle limits, controller/haptic gains, operator model, mode, timing
and seed. JSON scenarios are strict: unknown keys are rejected (typos
must not silently fall back to defaults), missing keys take the
documented defaults. Serialization is canonical (every field explicit,
sorted keys) so a scenario hashes to a stable identity for run records.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, fields, replace
from typing import Any

from .controller import ControllerGains
from .joystick import HapticGains
from .operators import OPERATOR_KINDS, OperatorParams
from .path import InspectionObject, PathModel, build_path
from .se2 import Pose
from .vehicle import VehicleLimits


class ScenarioError(ValueError):
    """Configuration rejected; message names the offending key."""


@dataclass(frozen=True)
class Scenario:
    path_spec: dict
    gaps: tuple[tuple[float, float], ...]
    objects: tuple[InspectionObject, ...]
    vehicle: VehicleLimits
    start_pose: Pose
    controller: ControllerGains
    haptics: HapticGains
    operator_kind: str
    operator: OperatorParams
    mode: str
    dt: float
    max_duration: float
    sensing_radius: float
    seed: int
    description: str = ""
    path: PathModel = field(compare=False, default=None)  # built from path_spec

    def to_dict(self) -> dict:
        """Canonical dict: every field explicit, JSON-serializable."""
        return {
            "description": self.description,
            "path": {
                "start": list(self.path_spec["start"]),
                "segments": [dict(s) for s in self.path_spec["segments"]],
            },
            "gaps": [list(g) for g in self.gaps],
            "objects": [
                {"s": o.s, "lateral_offset": o.lateral_offset, "slit_count": o.slit_count}
                for o in self.objects
            ],
            "vehicle": {
                "v_max": self.vehicle.v_max,
                "omega_max": self.vehicle.omega_max,
                "tau": self.vehicle.tau,
                "start_pose": [self.start_pose.x, self.start_pose.y, self.start_pose.theta],
            },
            "controller": {
                "alpha": self.controller.alpha,
                "k2": self.controller.k2,
                "k3": self.controller.k3,
                "c0": self.controller.c0,
            },
            "haptics": {
                "k_p": self.haptics.k_p,
                "k_d": self.haptics.k_d,
                "k_omega": self.haptics.k_omega,
                "k_v": self.haptics.k_v,
                "stick_mass": self.haptics.stick_mass,
                "stick_damping": self.haptics.stick_damping,
                "allow_reverse": self.haptics.allow_reverse,
                "direct_drive": self.haptics.direct_drive,
            },
            "operator": {"kind": self.operator_kind, **{
                f.name: getattr(self.operator, f.name) for f in fields(OperatorParams)
            }},
            "mode": self.mode,
            "dt": self.dt,
            "max_duration": self.max_duration,
            "sensing_radius": self.sensing_radius,
            "seed": self.seed,
        }


def scenario_hash(scenario: Scenario) -> str:
    blob = json.dumps(scenario.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _check_keys(d: dict, allowed: set[str], where: str) -> None:
    for k in d:
        if k not in allowed:
            raise ScenarioError(f"unknown key {k!r} in {where}")


def _num(d: dict, key: str, default: float, where: str) -> float:
    v = d.get(key, default)
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ScenarioError(f"{where}.{key} must be a finite number, got {v!r}")
    return float(v)


def _bool(d: dict, key: str, default: bool, where: str) -> bool:
    v = d.get(key, default)
    if not isinstance(v, bool):
        raise ScenarioError(f"{where}.{key} must be a boolean, got {v!r}")
    return v


def _pose(v: Any, where: str) -> Pose:
    if (not isinstance(v, (list, tuple)) or len(v) != 3
            or any(isinstance(c, bool) or not isinstance(c, (int, float)) for c in v)):
        raise ScenarioError(f"{where} must be [x, y, theta], got {v!r}")
    return Pose(float(v[0]), float(v[1]), float(v[2]))


_TOP_KEYS = {"description", "path", "gaps", "objects", "vehicle", "controller",
             "haptics", "operator", "mode", "dt", "max_duration",
             "sensing_radius", "seed"}


def scenario_from_dict(data: dict) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError(f"scenario must be a JSON object, got {type(data).__name__}")
    _check_keys(data, _TOP_KEYS, "scenario")

    description = data.get("description", "")
    if not isinstance(description, str):
        raise ScenarioError("scenario.description must be a string")

    path_d = data.get("path")
    if not isinstance(path_d, dict):
        raise ScenarioError("scenario.path is required and must be an object")
    _check_keys(path_d, {"start", "segments"}, "path")
    start = _pose(path_d.get("start", [0.0, 0.0, 0.0]), "path.start")
    seg_in = path_d.get("segments")
    if not isinstance(seg_in, list) or not seg_in:
        raise ScenarioError("path.segments must be a non-empty list")
    segments = []
    for i, s in enumerate(seg_in):
        if not isinstance(s, dict):
            raise ScenarioError(f"path.segments[{i}] must be an object")
        kind = s.get("kind")
        if kind == "line":
            _check_keys(s, {"kind", "length"}, f"path.segments[{i}]")
            segments.append({"kind": "line", "length": _num(s, "length", math.nan, f"path.segments[{i}]")})
        elif kind == "arc":
            _check_keys(s, {"kind", "radius", "angle"}, f"path.segments[{i}]")
            segments.append({
                "kind": "arc",
                "radius": _num(s, "radius", math.nan, f"path.segments[{i}]"),
                "angle": _num(s, "angle", math.nan, f"path.segments[{i}]"),
            })
        else:
            raise ScenarioError(f"path.segments[{i}].kind must be 'line' or 'arc', got {kind!r}")

    gaps_in = data.get("gaps", [])
    if not isinstance(gaps_in, list):
        raise ScenarioError("scenario.gaps must be a list of [s0, s1] pairs")
    gaps = []
    for i, g in enumerate(gaps_in):
        if (not isinstance(g, (list, tuple)) or len(g) != 2
                or any(isinstance(c, bool) or not isinstance(c, (int, float)) for c in g)):
            raise ScenarioError(f"gaps[{i}] must be [s0, s1], got {g!r}")
        gaps.append((float(g[0]), float(g[1])))

    objs_in = data.get("objects", [])
    if not isinstance(objs_in, list):
        raise ScenarioError("scenario.objects must be a list")
    objects = []
    for i, o in enumerate(objs_in):
        if not isinstance(o, dict):
            raise ScenarioError(f"objects[{i}] must be an object")
        _check_keys(o, {"s", "lateral_offset", "slit_count"}, f"objects[{i}]")
        count = o.get("slit_count", 0)
        if isinstance(count, bool) or not isinstance(count, int) or count < 0:
            raise ScenarioError(f"objects[{i}].slit_count must be a non-negative integer")
        objects.append(InspectionObject(
            _num(o, "s", math.nan, f"objects[{i}]"),
            _num(o, "lateral_offset", 0.0, f"objects[{i}]"),
            count,
        ))

    veh_d = data.get("vehicle", {})
    if not isinstance(veh_d, dict):
        raise ScenarioError("scenario.vehicle must be an object")
    _check_keys(veh_d, {"v_max", "omega_max", "tau", "start_pose"}, "vehicle")
    vehicle = VehicleLimits(
        v_max=_num(veh_d, "v_max", 0.3, "vehicle"),
        omega_max=_num(veh_d, "omega_max", 1.5, "vehicle"),
        tau=_num(veh_d, "tau", 0.2, "vehicle"),
    )
    if vehicle.v_max <= 0 or vehicle.omega_max <= 0 or vehicle.tau < 0:
        raise ScenarioError("vehicle limits must satisfy v_max > 0, omega_max > 0, tau >= 0")

    ctl_d = data.get("controller", {})
    if not isinstance(ctl_d, dict):
        raise ScenarioError("scenario.controller must be an object")
    _check_keys(ctl_d, {"alpha", "k2", "k3", "c0"}, "controller")
    controller = ControllerGains(
        alpha=_num(ctl_d, "alpha", 1.0, "controller"),
        k2=_num(ctl_d, "k2", 1.0, "controller"),
        k3=_num(ctl_d, "k3", 1.0, "controller"),
        c0=_num(ctl_d, "c0", 1.0, "controller"),
    )
    if controller.alpha <= 0 or controller.k2 <= 0 or controller.k3 <= 0 or controller.c0 < 0:
        raise ScenarioError("controller gains must satisfy alpha, k2, k3 > 0 and c0 >= 0")

    hap_d = data.get("haptics", {})
    if not isinstance(hap_d, dict):
        raise ScenarioError("scenario.haptics must be an object")
    _check_keys(hap_d, {"k_p", "k_d", "k_omega", "k_v", "stick_mass",
                        "stick_damping", "allow_reverse", "direct_drive"}, "haptics")
    haptics = HapticGains(
        k_p=_num(hap_d, "k_p", 2.0, "haptics"),
        k_d=_num(hap_d, "k_d", 0.5, "haptics"),
        k_omega=_num(hap_d, "k_omega", 1.0, "haptics"),
        k_v=_num(hap_d, "k_v", 0.3, "haptics"),
        stick_mass=_num(hap_d, "stick_mass", 0.05, "haptics"),
        stick_damping=_num(hap_d, "stick_damping", 0.8, "haptics"),
        allow_reverse=_bool(hap_d, "allow_reverse", False, "haptics"),
        direct_drive=_bool(hap_d, "direct_drive", False, "haptics"),
    )
    if haptics.k_omega <= 0 or haptics.k_v < 0 or haptics.stick_mass <= 0 or haptics.stick_damping < 0:
        raise ScenarioError("haptics must satisfy k_omega > 0, k_v >= 0, stick_mass > 0, stick_damping >= 0")

    op_d = data.get("operator", {})
    if not isinstance(op_d, dict):
        raise ScenarioError("scenario.operator must be an object")
    op_fields = {f.name for f in fields(OperatorParams)}
    _check_keys(op_d, op_fields | {"kind"}, "operator")
    operator_kind = op_d.get("kind", "hybrid")
    if operator_kind not in OPERATOR_KINDS:
        raise ScenarioError(
            f"operator.kind must be one of {sorted(OPERATOR_KINDS)}, got {operator_kind!r}")
    op_defaults = OperatorParams()
    operator = OperatorParams(**{
        name: _num(op_d, name, getattr(op_defaults, name), "operator") for name in op_fields
    })
    if operator.delay < 0 or operator.sigma_e2 < 0 or operator.sigma_e3 < 0:
        raise ScenarioError("operator delay and noise sigmas must be non-negative")

    mode = data.get("mode", "CC")
    if mode not in ("MC", "CC"):
        raise ScenarioError(f"scenario.mode must be 'MC' or 'CC', got {mode!r}")
    dt = _num(data, "dt", 0.01, "scenario")
    if not (0.0 < dt <= 0.05):
        raise ScenarioError(f"scenario.dt must be in (0, 0.05], got {dt}")
    max_duration = _num(data, "max_duration", 120.0, "scenario")
    if max_duration <= 0:
        raise ScenarioError("scenario.max_duration must be positive")
    sensing_radius = _num(data, "sensing_radius", 0.5, "scenario")
    if sensing_radius <= 0:
        raise ScenarioError("scenario.sensing_radius must be positive")
    seed = data.get("seed", 1)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ScenarioError(f"scenario.seed must be an integer, got {seed!r}")

    try:
        path = build_path(start, segments, gaps, objects)
    except ValueError as e:
        raise ScenarioError(str(e)) from None

    start_pose = _pose(veh_d["start_pose"], "vehicle.start_pose") if "start_pose" in veh_d \
        else path.point_at(0.0).pose

    return Scenario(
        path_spec={"start": [start.x, start.y, start.theta], "segments": segments},
        gaps=tuple(gaps),
        objects=tuple(objects),
        vehicle=vehicle,
        start_pose=start_pose,
        controller=controller,
        haptics=haptics,
        operator_kind=operator_kind,
        operator=operator,
        mode=mode,
        dt=dt,
        max_duration=max_duration,
        sensing_radius=sensing_radius,
        seed=seed,
        description=description,
        path=path,
    )


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ScenarioError(f"cannot read scenario file: {e}") from None
    except json.JSONDecodeError as e:
        raise ScenarioError(f"scenario file is not valid JSON: {e}") from None
    return scenario_from_dict(data)


def with_overrides(scenario: Scenario, *, mode: str | None = None,
                   seed: int | None = None, operator_kind: str | None = None) -> Scenario:
    out = scenario
    if mode is not None:
        if mode not in ("MC", "CC"):
            raise ScenarioError(f"mode must be 'MC' or 'CC', got {mode!r}")
        out = replace(out, mode=mode)
    if seed is not None:
        out = replace(out, seed=seed)
    if operator_kind is not None:
        if operator_kind not in OPERATOR_KINDS:
            raise ScenarioError(f"unknown operator kind {operator_kind!r}")
        out = replace(out, operator_kind=operator_kind)
    return out


def default_scenario(mode: str = "CC") -> Scenario:
    """U-shaped inspection course in a 5.4 x 2.7 m tank.

    Three straights joined by two quarter-circle right turns, one 0.3 m
    gap midway along each straight, five slit objects to count. Course
    length 8.885 m; a compliant cooperative run at the default speed
    setpoint (V = 0.201 m/s) completes in about 45 s.
    """
    return scenario_from_dict({
        "description": ("U-shaped inspection course in a 5.4 x 2.7 m tank; "
                        "0.3 m marking gaps mid-straight (A, B, C); defaults sized "
                        "so a compliant cooperative run finishes in about 45 s."),
        "path": {
            "start": [4.3, 0.5, math.pi],
            "segments": [
                {"kind": "line", "length": 3.1},
                {"kind": "arc", "radius": 0.6, "angle": -math.pi / 2},
                {"kind": "line", "length": 0.8},
                {"kind": "arc", "radius": 0.6, "angle": -math.pi / 2},
                {"kind": "line", "length": 3.1},
            ],
        },
        "gaps": [[1.4, 1.7], [4.29, 4.59], [7.19, 7.49]],
        "objects": [
            {"s": 0.9, "lateral_offset": 0.35, "slit_count": 3},
            {"s": 2.6, "lateral_offset": -0.3, "slit_count": 5},
            {"s": 4.4, "lateral_offset": 0.4, "slit_count": 4},
            {"s": 7.0, "lateral_offset": -0.35, "slit_count": 6},
            {"s": 8.3, "lateral_offset": 0.3, "slit_count": 2},
        ],
        "mode": mode,
    })
