"""Wire protocol of the teleop service (JSON text frames, version 1).

One snapshot message type outbound, a small set of input kinds inbound,
one error frame. Field names are part of the contract and documented in
PROTOCOL.md. Decoding ignores unknown fields (forward compatibility)
but rejects unknown kinds and malformed values with a ProtocolError
whose message is safe to echo back in an error frame.
"""

from __future__ import annotations

import json
import math
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError

PROTOCOL_VERSION = 1


class ProtocolError(ValueError):
    """Inbound frame rejected; message explains why."""


class _Frame(BaseModel):
    model_config = ConfigDict(extra="ignore")


# ---- client -> server ----------------------------------------------------

class HelloIn(_Frame):
    kind: Literal["hello"]
    v: int


class StickInput(_Frame):
    kind: Literal["stick"]
    phi_x: float
    phi_y: float


class OverrideInput(_Frame):
    kind: Literal["override"]
    value: bool


class ResetInput(_Frame):
    kind: Literal["reset"]


class ModeSetInput(_Frame):
    kind: Literal["mode_set"]
    mode: Literal["MC", "CC"]


class CountSubmitInput(_Frame):
    kind: Literal["count_submit"]
    count: int


InputMessage = Annotated[
    Union[HelloIn, StickInput, OverrideInput, ResetInput, ModeSetInput, CountSubmitInput],
    Field(discriminator="kind"),
]

_INPUT_ADAPTER: TypeAdapter = TypeAdapter(InputMessage)
INPUT_KINDS = ("hello", "stick", "override", "reset", "mode_set", "count_submit")


# ---- server -> client ----------------------------------------------------

class HelloOut(_Frame):
    kind: Literal["hello"] = "hello"
    v: int = PROTOCOL_VERSION
    role: Literal["driver", "observer"]
    scenario_hash: str
    mode: str
    dt: float
    total_length: float


class ObjectInView(_Frame):
    s: float
    lateral_offset: float
    slit_count: int
    x: float
    y: float


class Snapshot(_Frame):
    kind: Literal["snapshot"] = "snapshot"
    t: float
    x: float
    y: float
    theta: float
    e1: float
    e2: float
    e3: float
    detected: bool
    beta: float
    u: float
    phi_x: float
    phi_y: float
    phi_d: float
    f: float
    v: float
    s: float
    mode: str
    status: str
    objects: list[ObjectInView] = []


class ErrorFrame(_Frame):
    kind: Literal["error"] = "error"
    error: str
    supported: list[int] | None = None


def encode(message: BaseModel) -> str:
    return json.dumps(message.model_dump(exclude_none=True), separators=(",", ":"),
                      allow_nan=False)


def decode_input(text: str):
    """Parse one inbound frame; raises ProtocolError on anything invalid."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        raise ProtocolError("frame is not valid JSON") from None
    if not isinstance(obj, dict):
        raise ProtocolError("frame must be a JSON object")
    if "kind" not in obj:
        raise ProtocolError("frame missing 'kind'")
    if obj["kind"] not in INPUT_KINDS:
        raise ProtocolError(f"unknown kind {obj['kind']!r}")
    try:
        msg = _INPUT_ADAPTER.validate_python(obj)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(p) for p in first["loc"] if not isinstance(p, int)) or "frame"
        raise ProtocolError(f"invalid {obj['kind']} frame: {field}: {first['msg']}") from None
    if isinstance(msg, StickInput):
        # stick values clamp on receipt so the sim never sees wild inputs
        if not (math.isfinite(msg.phi_x) and math.isfinite(msg.phi_y)):
            raise ProtocolError("invalid stick frame: values must be finite")
        msg = StickInput(kind="stick",
                         phi_x=min(max(msg.phi_x, -1.0), 1.0),
                         phi_y=min(max(msg.phi_y, -1.0), 1.0))
    return msg
