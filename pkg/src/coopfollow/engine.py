"""Fixed-timestep simulation engine.

Tick order (one step of dt):

  project -> detect -> true errors -> gate -> velocity conversion and
  heading control (CC) -> guidance force (CC) -> operator action ->
  joystick step -> stick maps to (V, omega) -> vehicle step -> record.

The same Simulation class backs headless runs (synthetic operators),
the live teleop service (network inputs wrapped as per-tick actions)
and replay (recorded actions played back), which is what makes live
sessions reproducible offline.

Conventions the pipeline relies on:
  * the controller consumes the previous tick's applied turn rate in
    the reference-speed quotient (one-step lag, initialized to 0);
  * the operator override observed at a tick is the one commanded on
    the previous tick (operators act mid-tick, after gating);
  * in MC mode the stick maps straight to (v_xi, omega): no guidance
    force, no translation split (beta = 0).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from . import controller as ctl
from . import errors as ef
from . import joystick as js
from . import vehicle as veh
from .metrics import Metrics, compute_metrics
from .operators import Observation, OperatorAction, ScriptedOperator, make_operator
from .path import detect
from .recording import Row
from .scenario import Scenario, with_overrides

COMPLETION_EPS = 0.05  # m of arclength short of the end that counts as done


@dataclass(frozen=True)
class RunResult:
    scenario: Scenario
    rows: list[Row]
    status: str  # completed | timeout | aborted
    completion_time: float
    detail: str = ""  # diagnostic for aborted runs

    def metrics(self) -> Metrics:
        return compute_metrics(self.rows, self.scenario.seed, self.scenario.mode,
                               self.completion_time)


class Simulation:
    """Steppable closed-loop state for one scenario run."""

    def __init__(self, scenario: Scenario):
        self.sc = scenario
        self.vehicle = veh.VehicleState(scenario.start_pose, veh.BodyVelocity(0.0, 0.0, 0.0))
        self.stick = js.JoystickState()
        self.omega_applied = 0.0
        self.override_held = False
        self.was_in_gap = False
        self.k = 0
        self.rows: list[Row] = []
        self.status = "running"

    @property
    def t(self) -> float:
        return self.k * self.sc.dt

    def _check_done(self) -> None:
        if self.status != "running":
            return
        proj = self.sc.path.project(self.vehicle.pose.x, self.vehicle.pose.y)
        if proj.s >= self.sc.path.total_length - COMPLETION_EPS:
            self.status = "completed"
        elif self.t >= self.sc.max_duration:
            self.status = "timeout"

    def abort(self) -> None:
        if self.status == "running":
            self.status = "aborted"

    def step(self, operator) -> Row:
        """Advance one tick; operator.act(Observation) supplies the input."""
        if self.status != "running":
            raise RuntimeError(f"simulation is {self.status}")
        sc = self.sc
        hap = sc.haptics
        cc = sc.mode == "CC"
        t = self.t
        pose = self.vehicle.pose

        detected, proj, _ = detect(sc.path, pose, sc.sensing_radius)
        e1, e2, e3 = ef.compute_errors(pose, proj.pose)
        override = self.override_held
        err = ef.ErrorState(e1, e2, e3, 0.0, 0.0, proj.curvature, detected)
        gated = ef.gate(err, detected, override)

        v_ctl = js.stick_to_speed(self.stick.phi_x, hap.k_v, hap.allow_reverse)
        if cc:
            beta, _, _ = ctl.velocity_conversion(v_ctl, gated.e2, sc.controller.alpha)
            v_r = ef.reference_speed(v_ctl, beta, gated.e2, gated.e3,
                                     self.omega_applied, 2.0 * sc.vehicle.v_max)
            omega_r = ef.reference_turn_rate(gated.rho, v_r)
            gated = replace(gated, v_r=v_r, omega_r=omega_r)
            cmd = ctl.control(gated, v_ctl, sc.controller, sc.vehicle.omega_max)
            beta, u, u_sat = cmd.beta, cmd.u, cmd.saturated
            phi_d = js.omega_to_stick(u, hap.k_omega)
        else:
            beta, u, u_sat = 0.0, 0.0, False
            v_r, omega_r = 0.0, 0.0
            phi_d = 0.0
        f_guidance = 0.0
        if cc and not hap.direct_drive:
            f_guidance = js.guidance_force(self.stick.phi_y, phi_d,
                                           self.stick.phi_y_dot, hap.k_p, hap.k_d)

        assist_active = cc and detected and not override
        obs = Observation(t, e2, e3, detected, assist_active, proj.curvature,
                          self.stick.phi_x, self.stick.phi_y)
        action = operator.act(obs)

        if action.phi_y_cmd is not None:
            target = min(max(action.phi_y_cmd, -1.0), 1.0)
            f_human = sc.operator.hand_stiffness * (target - self.stick.phi_y)
        else:
            f_human = action.f_human if action.f_human is not None else 0.0

        if cc and hap.direct_drive:
            # controller drives the vehicle directly; stick shows the suggestion
            stick = js.JoystickState(min(max(action.phi_x_cmd, -1.0), 1.0), phi_d, 0.0)
            omega_d = u
        else:
            stick = js.joystick_step(self.stick, f_guidance, f_human, sc.dt, hap,
                                     phi_x_cmd=action.phi_x_cmd,
                                     phi_d=phi_d if cc else None)
            omega_d = js.stick_to_omega(stick.phi_y, hap.k_omega)
        v = js.stick_to_speed(stick.phi_x, hap.k_v, hap.allow_reverse)

        if cc:
            body_cmd = veh.BodyVelocity(v * math.cos(beta), v * math.sin(beta), omega_d)
        else:
            body_cmd = veh.BodyVelocity(v, 0.0, omega_d)
        body_cmd, cmd_sat = veh.saturate(body_cmd, sc.vehicle)
        self.vehicle = veh.step(self.vehicle, body_cmd, sc.dt, sc.vehicle)

        events: list[str] = []
        if proj.in_gap and not self.was_in_gap:
            events.append("gap_enter")
        elif self.was_in_gap and not proj.in_gap:
            events.append("gap_exit")
        if action.override and not self.override_held:
            events.append("override_on")
        elif self.override_held and not action.override:
            events.append("override_off")
        if action.count_submit is not None:
            events.append(f"count:{action.count_submit}")

        row = Row(
            t=t, x=pose.x, y=pose.y, theta=pose.theta,
            e1=e1, e2=e2, e3=e3, ge2=gated.e2, ge3=gated.e3, detected=detected,
            beta=beta, u=u,
            phi_x=stick.phi_x, phi_y=stick.phi_y, phi_d=phi_d,
            f=f_guidance, f_human=f_human,
            v=v, v_r=v_r, omega_r=omega_r,
            u_saturated=u_sat, cmd_saturated=cmd_sat,
            override=action.override,
            phi_x_cmd=action.phi_x_cmd, phi_y_cmd=action.phi_y_cmd,
            f_human_cmd=action.f_human,
            count_submit=action.count_submit,
            events=tuple(events),
        )
        self.rows.append(row)

        self.stick = stick
        self.omega_applied = omega_d
        self.override_held = action.override
        self.was_in_gap = proj.in_gap
        self.k += 1
        self._check_done()
        return row

    def result(self, detail: str = "") -> RunResult:
        status = self.status if self.status != "running" else "aborted"
        return RunResult(self.sc, self.rows, status, self.t, detail)


def run(scenario: Scenario, operator=None) -> RunResult:
    """Run a scenario to completion or timeout with a synthetic operator.

    A non-finite input or state aborts the run instead of raising; the
    result then has status "aborted" and the cause in .detail.
    """
    if operator is None:
        operator = make_operator(scenario.operator_kind, scenario.operator,
                                 scenario.seed, scenario.dt)
    sim = Simulation(scenario)
    sim._check_done()
    detail = ""
    while sim.status == "running":
        try:
            sim.step(operator)
        except ValueError as e:
            detail = str(e)
            sim.abort()
    return sim.result(detail)


def actions_from_rows(rows: list[Row]) -> list[OperatorAction]:
    """Reconstruct the per-tick input trace from a run record."""
    return [OperatorAction(
        phi_x_cmd=r.phi_x_cmd,
        phi_y_cmd=r.phi_y_cmd,
        f_human=r.f_human_cmd,
        override=r.override,
        count_submit=r.count_submit,
    ) for r in rows]


def replay(scenario: Scenario, actions: list[OperatorAction]) -> RunResult:
    """Re-run a recorded input trace; reproduces the original record."""
    sim = Simulation(scenario)
    op = ScriptedOperator(actions)
    sim._check_done()
    for _ in range(len(actions)):
        if sim.status != "running":
            break
        sim.step(op)
    sim.abort()
    return sim.result()


def _run_metrics(scenario: Scenario) -> Metrics:
    return run(scenario).metrics()


def batch(scenario: Scenario, seeds: list[int], jobs: int = 1) -> list[Metrics]:
    """Paired MC/CC runs per seed with identical operator noise streams.

    Both runs of a pair share the scenario seed, and operators draw
    noise at a fixed per-tick rate, so the two modes see the same
    disturbance realization. Rows are ordered by (seed, mode).
    """
    if not seeds:
        raise ValueError("batch needs at least one seed")
    configs = [with_overrides(scenario, mode=m, seed=s) for s in seeds for m in ("CC", "MC")]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_run_metrics, configs))
    else:
        results = [_run_metrics(c) for c in configs]
    return sorted(results, key=lambda m: (m.seed, m.mode))
