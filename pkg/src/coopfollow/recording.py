"""Run records: one JSON line per tick, plus header and footer lines.

The header carries the scenario hash so a record can be matched to its
exact configuration; the footer carries the terminal status. Rows hold
only simulation-time quantities (never wall-clock), and serialization
uses Python's shortest round-trip float repr, so the same run always
produces byte-identical files. Raw operator inputs (phi_x_cmd,
phi_y_cmd, f_human, override, count_submit) are part of each row, which
makes a record a complete input trace: replaying it through the engine
reproduces the record.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Row:
    t: float
    x: float
    y: float
    theta: float
    e1: float
    e2: float
    e3: float
    ge2: float
    ge3: float
    detected: bool
    beta: float
    u: float
    phi_x: float
    phi_y: float
    phi_d: float
    f: float
    f_human: float
    v: float
    v_r: float
    omega_r: float
    u_saturated: bool
    cmd_saturated: bool
    override: bool
    phi_x_cmd: float
    phi_y_cmd: float | None
    f_human_cmd: float | None
    count_submit: int | None
    events: tuple[str, ...] = field(default=())

    def to_obj(self) -> dict:
        d = {
            "t": self.t, "x": self.x, "y": self.y, "theta": self.theta,
            "e1": self.e1, "e2": self.e2, "e3": self.e3,
            "ge2": self.ge2, "ge3": self.ge3, "detected": self.detected,
            "beta": self.beta, "u": self.u,
            "phi_x": self.phi_x, "phi_y": self.phi_y, "phi_d": self.phi_d,
            "f": self.f, "f_human": self.f_human,
            "v": self.v, "v_r": self.v_r, "omega_r": self.omega_r,
            "u_saturated": self.u_saturated, "cmd_saturated": self.cmd_saturated,
            "override": self.override,
            "phi_x_cmd": self.phi_x_cmd, "phi_y_cmd": self.phi_y_cmd,
            "f_human_cmd": self.f_human_cmd,
            "count_submit": self.count_submit,
            "events": list(self.events),
        }
        return d

    @classmethod
    def from_obj(cls, d: dict) -> "Row":
        return cls(**{**{k: d[k] for k in d if k != "events"},
                      "events": tuple(d.get("events", ()))})


def dumps_line(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False)


def record_lines(scenario_hash: str, mode: str, dt: float, seed: int,
                 rows: list[Row], status: str, completion_time: float) -> list[str]:
    header = {
        "kind": "header",
        "schema": SCHEMA_VERSION,
        "scenario_hash": scenario_hash,
        "mode": mode,
        "dt": dt,
        "seed": seed,
    }
    footer = {
        "kind": "end",
        "status": status,
        "completion_time": completion_time,
        "ticks": len(rows),
    }
    return [dumps_line(header)] + [dumps_line(r.to_obj()) for r in rows] + [dumps_line(footer)]


def atomic_write_text(path: str, text: str) -> None:
    """Write-then-rename so rerunning a command never leaves partial files."""
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as f:
        f.write(text)
        f.flush()
        os.fsync(f.fileno())
    os.replace(tmp, path)


def write_record(path: str, lines: list[str]) -> None:
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_record(path: str) -> tuple[dict, list[Row], dict]:
    header: dict | None = None
    footer: dict | None = None
    rows: list[Row] = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            if obj.get("kind") == "header":
                header = obj
            elif obj.get("kind") == "end":
                footer = obj
            else:
                rows.append(Row.from_obj(obj))
    if header is None or footer is None:
        raise ValueError(f"run record {path} is missing header or footer line")
    return header, rows, footer
