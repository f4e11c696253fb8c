"""FastAPI teleop service.

One SimHost owns the simulation and all mutable session state; every
network handler runs on the same event loop and talks to it through
plain method calls, so there is no shared-state locking. The sim is
paced against the wall clock with a fixed-step accumulator scaled by
``time_scale``; it pauses (rather than fast-forwarding) when the host
falls behind by more than 0.5 s of sim time, when no driver is
connected, or when the driver has been silent for 0.5 s.

The first websocket client becomes the driver; later clients are
read-only observers. Driver inputs are held zero-order: each tick
consumes the latest stick/override values and at most one queued count
submission. Every run writes a RunRecord on completion, reset or
shutdown, which replays exactly through the headless engine.
"""

from __future__ import annotations

import asyncio
import contextlib
import os
from collections import deque

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..engine import Simulation
from ..errors import compute_errors
from ..operators import OperatorAction
from ..path import detect
from ..recording import record_lines, write_record
from ..scenario import Scenario, scenario_hash, with_overrides
from .protocol import (
    PROTOCOL_VERSION,
    ErrorFrame,
    HelloIn,
    HelloOut,
    ModeSetInput,
    ObjectInView,
    OverrideInput,
    ProtocolError,
    ResetInput,
    Snapshot,
    StickInput,
    CountSubmitInput,
    decode_input,
    encode,
)

PAUSE_AFTER_SILENT = 0.5  # s wall without driver input before pausing
MAX_BACKLOG = 0.5  # s sim time; beyond this the backlog is dropped, not replayed


class _HeldAction:
    """Operator adapter that replays whatever the network set this tick."""

    def __init__(self) -> None:
        self.action = OperatorAction()

    def act(self, obs) -> OperatorAction:
        return self.action


def _put_latest(q: asyncio.Queue, text: str) -> None:
    """Enqueue, dropping the oldest frame when the consumer lags."""
    try:
        q.put_nowait(text)
    except asyncio.QueueFull:
        with contextlib.suppress(asyncio.QueueEmpty):
            q.get_nowait()
        q.put_nowait(text)


class SimHost:
    """Owns the live simulation, its inputs, and the connected clients."""

    def __init__(self, scenario: Scenario, out_dir: str = ".",
                 time_scale: float = 1.0, telemetry_hz: float = 30.0):
        if time_scale <= 0.0:
            raise ValueError("time_scale must be positive")
        if telemetry_hz <= 0.0:
            raise ValueError("telemetry_hz must be positive")
        self.base = scenario
        self.scenario = scenario
        self.out_dir = out_dir
        self.time_scale = time_scale
        self.telemetry_hz = telemetry_hz
        self.sim = Simulation(scenario)
        self.sim._check_done()
        self.held = _HeldAction()
        self.stick_x = 0.0
        self.stick_y = 0.0
        self.override = False
        self.counts: deque[int] = deque()
        self.driver: WebSocket | None = None
        self.queues: dict[WebSocket, asyncio.Queue] = {}
        self.last_input: float | None = None
        self.record_index = 0
        self.record_written = False

    # ---- session control -------------------------------------------------

    def hello(self, role: str) -> HelloOut:
        return HelloOut(role=role, scenario_hash=scenario_hash(self.scenario),
                        mode=self.scenario.mode, dt=self.scenario.dt,
                        total_length=self.scenario.path.total_length)

    def apply_input(self, msg) -> None:
        """Driver input; mutates the held command state."""
        if isinstance(msg, StickInput):
            self.stick_x = msg.phi_x
            self.stick_y = msg.phi_y
        elif isinstance(msg, OverrideInput):
            self.override = msg.value
        elif isinstance(msg, CountSubmitInput):
            self.counts.append(msg.count)
        elif isinstance(msg, ResetInput):
            self.reset()
        elif isinstance(msg, ModeSetInput):
            self.reset(mode=msg.mode)
        self.last_input = asyncio.get_running_loop().time()

    def reset(self, mode: str | None = None) -> None:
        """Flush the current record and start a fresh run (same seed)."""
        self.flush_record()
        if mode is not None:
            self.scenario = with_overrides(self.base, mode=mode)
        self.sim = Simulation(self.scenario)
        self.sim._check_done()
        self.record_index += 1
        self.record_written = False
        self.stick_x = 0.0
        self.stick_y = 0.0
        self.override = False
        self.counts.clear()

    def drop_driver(self) -> None:
        self.driver = None
        self.stick_x = 0.0
        self.stick_y = 0.0
        self.override = False

    @property
    def record_path(self) -> str:
        return os.path.join(self.out_dir, f"teleop_{self.record_index:03d}.jsonl")

    def flush_record(self) -> str | None:
        """Write the current run's RunRecord; no-op if empty or written."""
        if self.record_written or not self.sim.rows:
            return None
        self.sim.abort()
        res = self.sim.result()
        lines = record_lines(scenario_hash(self.scenario), self.scenario.mode,
                             self.scenario.dt, self.scenario.seed,
                             res.rows, res.status, res.completion_time)
        write_record(self.record_path, lines)
        self.record_written = True
        return self.record_path

    # ---- stepping and telemetry -------------------------------------------

    def paused(self, now: float) -> bool:
        # runs only within a grace window of the last driver activity; a
        # disconnect therefore coasts 0.5 s at zeroed commands, then pauses
        if self.last_input is None:
            return True
        return (now - self.last_input) > PAUSE_AFTER_SILENT

    def tick(self) -> None:
        self.held.action = OperatorAction(
            phi_x_cmd=self.stick_x,
            phi_y_cmd=self.stick_y,
            override=self.override,
            count_submit=self.counts.popleft() if self.counts else None,
        )
        try:
            self.sim.step(self.held)
        except ValueError:
            # non-finite state: end the run as aborted instead of crashing
            self.sim.abort()

    def snapshot(self, paused: bool) -> Snapshot:
        sim = self.sim
        sc = self.scenario
        pose = sim.vehicle.pose
        detected, proj, _ = detect(sc.path, pose, sc.sensing_radius)
        if sim.rows:
            r = sim.rows[-1]
            fields = dict(t=r.t, e1=r.e1, e2=r.e2, e3=r.e3, detected=r.detected,
                          beta=r.beta, u=r.u, phi_x=r.phi_x, phi_y=r.phi_y,
                          phi_d=r.phi_d, f=r.f, v=r.v)
        else:
            e1, e2, e3 = compute_errors(pose, proj.pose)
            fields = dict(t=0.0, e1=e1, e2=e2, e3=e3, detected=detected,
                          beta=0.0, u=0.0, phi_x=0.0, phi_y=0.0,
                          phi_d=0.0, f=0.0, v=0.0)
        objects = []
        for ob in sc.path.objects:
            ox, oy = ob.world_position(sc.path)
            if (ox - pose.x) ** 2 + (oy - pose.y) ** 2 <= sc.sensing_radius ** 2:
                objects.append(ObjectInView(s=ob.s, lateral_offset=ob.lateral_offset,
                                            slit_count=ob.slit_count, x=ox, y=oy))
        status = sim.status if sim.status != "running" else ("paused" if paused else "running")
        return Snapshot(x=pose.x, y=pose.y, theta=pose.theta, s=proj.s,
                        mode=sc.mode, status=status, objects=objects, **fields)

    def broadcast(self, text: str) -> None:
        for q in self.queues.values():
            _put_latest(q, text)

    async def loop(self) -> None:
        """Wall-clock paced fixed-step loop; one tick per dt of sim time."""
        aio = asyncio.get_running_loop()
        dt = self.scenario.dt
        quantum = min(dt / self.time_scale, 0.05)
        emit_every = 1.0 / self.telemetry_hz  # sim seconds between snapshots
        acc = 0.0
        last = aio.time()
        next_emit = 0.0
        last_emit_wall = 0.0
        while True:
            await asyncio.sleep(quantum)
            now = aio.time()
            paused = self.paused(now)
            if paused:
                acc = 0.0
            else:
                acc += (now - last) * self.time_scale
            last = now
            if acc > MAX_BACKLOG:  # host fell behind: pause, don't fast-forward
                acc = 0.0
            dt = self.scenario.dt
            # a reset rewinds sim time; re-arm the telemetry grid so the
            # new run emits immediately instead of chasing the old clock
            next_emit = min(next_emit, self.sim.t + emit_every)
            emitted = False
            while acc >= dt and self.sim.status == "running":
                acc -= dt
                self.tick()
                if self.sim.t >= next_emit - 1e-12:
                    next_emit = self.sim.t + emit_every
                    self.broadcast(encode(self.snapshot(paused)))
                    emitted = True
                    last_emit_wall = now
            if self.sim.status != "running":
                self.flush_record()
                acc = 0.0
            if not emitted and now - last_emit_wall > 0.25:
                # heartbeat so clients see pauses and terminal states promptly
                self.broadcast(encode(self.snapshot(paused)))
                last_emit_wall = now


def create_app(scenario: Scenario, *, out_dir: str = ".", time_scale: float = 1.0,
               telemetry_hz: float = 30.0, ui_dir: str | None = None) -> FastAPI:
    host = SimHost(scenario, out_dir=out_dir, time_scale=time_scale,
                   telemetry_hz=telemetry_hz)

    @contextlib.asynccontextmanager
    async def lifespan(app: FastAPI):
        task = asyncio.create_task(host.loop())
        try:
            yield
        finally:
            task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await task
            host.flush_record()

    app = FastAPI(title="coopfollow teleop", lifespan=lifespan)
    app.state.host = host

    @app.get("/health")
    async def health():
        return {"status": "ok", "run_status": host.sim.status, "t": host.sim.t,
                "protocol": PROTOCOL_VERSION}

    @app.get("/scenario")
    async def scenario_json():
        return JSONResponse(host.scenario.to_dict())

    @app.websocket("/teleop")
    async def teleop(ws: WebSocket):
        await ws.accept()
        try:
            first = await ws.receive_text()
        except WebSocketDisconnect:
            return
        try:
            msg = decode_input(first)
        except ProtocolError as e:
            await ws.send_text(encode(ErrorFrame(error=str(e))))
            await ws.close()
            return
        if not isinstance(msg, HelloIn):
            await ws.send_text(encode(ErrorFrame(error="first frame must be hello")))
            await ws.close()
            return
        if msg.v != PROTOCOL_VERSION:
            await ws.send_text(encode(ErrorFrame(
                error=f"unsupported protocol version {msg.v}",
                supported=[PROTOCOL_VERSION])))
            await ws.close()
            return

        is_driver = host.driver is None
        if is_driver:
            host.driver = ws
            host.last_input = asyncio.get_running_loop().time()
        queue: asyncio.Queue = asyncio.Queue(maxsize=64)
        host.queues[ws] = queue
        await ws.send_text(encode(host.hello("driver" if is_driver else "observer")))
        await ws.send_text(encode(host.snapshot(host.paused(
            asyncio.get_running_loop().time()))))

        async def sender():
            while True:
                await ws.send_text(await queue.get())

        send_task = asyncio.create_task(sender())
        try:
            while True:
                text = await ws.receive_text()
                try:
                    msg = decode_input(text)
                except ProtocolError as e:
                    _put_latest(queue, encode(ErrorFrame(error=str(e))))
                    continue
                if isinstance(msg, HelloIn):
                    continue
                if not is_driver:
                    _put_latest(queue, encode(ErrorFrame(
                        error="observer connections are read-only")))
                    continue
                host.apply_input(msg)
        except WebSocketDisconnect:
            pass
        finally:
            send_task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await send_task
            host.queues.pop(ws, None)
            if is_driver:
                host.drop_driver()

    if ui_dir and os.path.isdir(ui_dir):
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
