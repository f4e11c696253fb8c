"""Synthetic operator models for closed-loop runs.

Operators consume a per-tick observation and emit a joystick action.
All are deterministic given (params, seed): the noisy models draw
exactly two Gaussians per tick from their own random.Random stream, so
two runs of the same seed see identical noise regardless of mode.

compliant   passive hand: zero lateral force, constant speed setpoint.
manual_pd   delayed, noisy proportional-derivative steering on the
            observed errors; position-mode lateral commands; slows down
            where the observed path curves.
hybrid      rides the assist while it is active (zero lateral force)
            and takes over with the manual PD law elsewhere, e.g.
            inside gaps; force-mode lateral via a stiff virtual hand.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass

_DERIV_WINDOW = 0.1  # s, backward-difference span for the derivative term


@dataclass(frozen=True)
class Observation:
    t: float
    e2: float
    e3: float
    detected: bool
    assist_active: bool
    rho: float
    phi_x: float
    phi_y: float


@dataclass(frozen=True)
class OperatorAction:
    """Joystick intent for one tick.

    Exactly one lateral channel is set: phi_y_cmd (position mode, the
    engine renders it with a stiff virtual hand) or f_human (force
    mode, applied to the stick directly).
    """

    phi_x_cmd: float = 0.0
    phi_y_cmd: float | None = None
    f_human: float | None = None
    override: bool = False
    count_submit: int | None = None


@dataclass(frozen=True)
class OperatorParams:
    delay: float = 0.3
    sigma_e2: float = 0.02
    sigma_e3: float = 0.05
    k_p2: float = 2.0
    k_p3: float = 1.5
    k_d: float = 0.3
    speed_setpoint: float = 0.67
    hand_stiffness: float = 4.0
    r_slow: float = 0.5
    smoothing: float = 0.1


class CompliantOperator:
    """Holds the speed setpoint and keeps the hand off the lateral axis."""

    def __init__(self, params: OperatorParams, seed: int = 0, dt: float = 0.01):
        self.params = params

    def act(self, obs: Observation) -> OperatorAction:
        return OperatorAction(phi_x_cmd=self.params.speed_setpoint, f_human=0.0)


class _PerceivedErrors:
    """Delay, noise, and smoothing applied to the observed errors.

    Models the human's reaction delay and imperfect reading of the
    camera view. Two Gaussian draws happen every update so the stream
    stays aligned across modes for paired-seed comparisons.
    """

    def __init__(self, params: OperatorParams, seed: int, dt: float):
        self.params = params
        self.dt = dt
        self.rng = random.Random(seed)
        self.delay_ticks = max(0, round(params.delay / dt))
        self.buffer: deque = deque(maxlen=self.delay_ticks + 1)
        self.e2_f: float | None = None
        self.e3_f: float | None = None
        n = max(1, round(_DERIV_WINDOW / dt))
        self.e3_hist: deque = deque(maxlen=n + 1)

    def update(self, obs: Observation) -> tuple[float, float, float, float, bool]:
        n2 = self.rng.gauss(0.0, self.params.sigma_e2)
        n3 = self.rng.gauss(0.0, self.params.sigma_e3)
        self.buffer.append((obs.e2 + n2, obs.e3 + n3, obs.rho, obs.assist_active))
        e2, e3, rho, assist = self.buffer[0]
        if self.params.smoothing > 0.0:
            k = min(1.0, self.dt / self.params.smoothing)
            self.e2_f = e2 if self.e2_f is None else self.e2_f + k * (e2 - self.e2_f)
            self.e3_f = e3 if self.e3_f is None else self.e3_f + k * (e3 - self.e3_f)
        else:
            self.e2_f, self.e3_f = e2, e3
        self.e3_hist.append(self.e3_f)
        if len(self.e3_hist) >= 2:
            de3 = (self.e3_hist[-1] - self.e3_hist[0]) / (self.dt * (len(self.e3_hist) - 1))
        else:
            de3 = 0.0
        return self.e2_f, self.e3_f, de3, rho, assist

    def pd_command(self, e2: float, e3: float, de3: float) -> float:
        # positive e2/e3 mean the path is to the left, so steer left
        p = self.params
        return min(max(p.k_p2 * e2 + p.k_p3 * e3 + p.k_d * de3, -1.0), 1.0)

    def speed_command(self, rho: float) -> float:
        p = self.params
        return min(max(p.speed_setpoint / (1.0 + abs(rho) * p.r_slow), 0.0), 1.0)


class ManualPDOperator:
    """Delayed noisy PD steering, position-mode lateral commands."""

    def __init__(self, params: OperatorParams, seed: int = 0, dt: float = 0.01):
        self.perceived = _PerceivedErrors(params, seed, dt)

    def act(self, obs: Observation) -> OperatorAction:
        e2, e3, de3, rho, _ = self.perceived.update(obs)
        return OperatorAction(
            phi_x_cmd=self.perceived.speed_command(rho),
            phi_y_cmd=self.perceived.pd_command(e2, e3, de3),
        )


class HybridOperator:
    """Compliant while the assist is active, manual PD otherwise.

    The switch follows the operator's delayed perception of the assist
    state, so takeover and handback each engage within one reaction
    delay. Lateral output is always a force: zero when compliant, a
    stiff virtual hand toward the PD command when taken over.
    """

    def __init__(self, params: OperatorParams, seed: int = 0, dt: float = 0.01):
        self.params = params
        self.perceived = _PerceivedErrors(params, seed, dt)

    def act(self, obs: Observation) -> OperatorAction:
        e2, e3, de3, rho, assist = self.perceived.update(obs)
        if assist:
            return OperatorAction(phi_x_cmd=self.params.speed_setpoint, f_human=0.0)
        cmd = self.perceived.pd_command(e2, e3, de3)
        return OperatorAction(
            phi_x_cmd=self.perceived.speed_command(rho),
            f_human=self.params.hand_stiffness * (cmd - obs.phi_y),
        )


class ScriptedOperator:
    """Plays back a recorded per-tick action sequence (replay)."""

    def __init__(self, actions: list[OperatorAction]):
        self.actions = list(actions)
        self.k = 0

    def act(self, obs: Observation) -> OperatorAction:
        a = self.actions[min(self.k, len(self.actions) - 1)]
        self.k += 1
        return a


OPERATOR_KINDS = {
    "compliant": CompliantOperator,
    "manual_pd": ManualPDOperator,
    "hybrid": HybridOperator,
}


def make_operator(kind: str, params: OperatorParams, seed: int, dt: float):
    try:
        cls = OPERATOR_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown operator kind {kind!r}") from None
    return cls(params, seed=seed, dt=dt)
