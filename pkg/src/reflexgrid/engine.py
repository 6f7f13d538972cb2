"""Deterministic discrete-time simulation loop and stability metrics.

Each step: compute the source voltage from the disturbance schedule, hand
every agent the load-bus voltage recorded ``sensing_delay`` steps ago, let
the controller (if any) deposit instructions, advance every agent, then
solve the circuit and record.  Agent randomness comes from a counter-based
stream (Philox keyed by the scenario seed, counter word 0 = step index,
agent id = position in the block), so draws are independent of evaluation
order and of which rules actually consume them.

The agent update here is a vectorized twin of ``agents.agent_step``; the
test suite asserts step-for-step equality between the two.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.random import Generator, Philox

from .agents import Action, AgentConfig, Band, RuleKind, controller_plan
from .circuit import CircuitConfig, LoadState, solve, v_load_for_count

_RULE_CODES = {
    RuleKind.PASSIVE: 0,
    RuleKind.REACTIVE: 1,
    RuleKind.PROBABILISTIC: 2,
    RuleKind.COMMANDED: 3,
}

SHIFT_RECORDING_MAX_AGENTS = 1000


@dataclass(frozen=True)
class Disturbance:
    """Source-voltage sag of ``delta_v`` volts over steps [t_start, t_end)."""

    t_start: int
    t_end: int
    delta_v: float

    def __post_init__(self):
        if not 0 <= self.t_start <= self.t_end:
            raise ValueError(f"need 0 <= t_start <= t_end, got [{self.t_start}, {self.t_end})")

    @staticmethod
    def none() -> "Disturbance":
        return Disturbance(0, 0, 0.0)


@dataclass(frozen=True)
class ControllerConfig:
    v_nominal: float
    band: Band
    control_interval: int = 1

    def __post_init__(self):
        if self.control_interval < 1:
            raise ValueError(f"control_interval must be positive, got {self.control_interval}")


@dataclass(frozen=True)
class Scenario:
    circuit: CircuitConfig
    v_source_base: float
    disturbance: Disturbance
    agents: tuple[AgentConfig, ...]
    band: Band
    horizon: int
    seed: int
    controller: ControllerConfig | None = None
    sensing_delay: int = 1
    record_shifts: bool | None = None  # None: record unless the fleet is large

    def __post_init__(self):
        if self.horizon < 1:
            raise ValueError(f"horizon must be positive, got {self.horizon}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.sensing_delay < 1:
            raise ValueError(f"sensing_delay must be at least 1, got {self.sensing_delay}")
        if self.v_source_base < 0:
            raise ValueError(f"v_source_base must be non-negative, got {self.v_source_base}")
        if self.disturbance.t_end > self.horizon:
            raise ValueError("disturbance must end within the horizon")
        if len(self.agents) != self.circuit.n_branches:
            raise ValueError(
                f"{len(self.agents)} agents for {self.circuit.n_branches} circuit branches"
            )
        ids = [a.agent_id for a in self.agents]
        if ids != list(range(len(self.agents))):
            raise ValueError("agents must have distinct ids 0..N-1 in order")
        object.__setattr__(self, "agents", tuple(self.agents))

    @property
    def n_agents(self) -> int:
        return len(self.agents)

    @property
    def shifts_recorded(self) -> bool:
        if self.record_shifts is None:
            return self.n_agents <= SHIFT_RECORDING_MAX_AGENTS
        return self.record_shifts


@dataclass(frozen=True)
class Trace:
    """Per-step time series; ``shifts`` is (horizon, N) or None."""

    v_source: np.ndarray
    v_load: np.ndarray
    i_total: np.ndarray
    n_flex_on: np.ndarray
    shifts: np.ndarray | None = None

    @property
    def horizon(self) -> int:
        return len(self.v_load)


@dataclass(frozen=True)
class Metrics:
    outside_band_fraction: float
    band_crossings: int
    max_overshoot: float
    max_undershoot: float
    settled: bool


def uniform_draws(seed: int, t: int, n: int) -> np.ndarray:
    """The step-``t`` block of n uniforms in [0, 1); agent i takes entry i."""
    return Generator(Philox(key=seed, counter=[t, 0, 0, 0])).random(n)


def initial_sensed_voltage(scenario: Scenario) -> float:
    """Steady bus voltage at t=0 under every agent's passive schedule."""
    desired = [(0 - a.phase) % a.period < a.on_steps for a in scenario.agents]
    vs0 = source_voltage(scenario, 0)
    return solve(scenario.circuit, vs0, LoadState.of(desired)).v_load


def source_voltage(scenario: Scenario, t: int) -> float:
    d = scenario.disturbance
    if d.t_start <= t < d.t_end:
        return scenario.v_source_base - d.delta_v
    return scenario.v_source_base


def run(scenario: Scenario) -> Trace:
    """Simulate the scenario; two runs with equal inputs are bit-identical."""
    n = scenario.n_agents
    horizon = scenario.horizon
    cfgs = scenario.agents

    period = np.array([a.period for a in cfgs], dtype=np.int64)
    on_steps = np.array([a.on_steps for a in cfgs], dtype=np.int64)
    phase = np.array([a.phase for a in cfgs], dtype=np.int64)
    v_low = np.array([a.v_low for a in cfgs])
    v_high = np.array([a.v_high for a in cfgs])
    max_shift = np.array([a.max_shift for a in cfgs], dtype=np.int64)
    prob = np.array([a.p for a in cfgs])
    rule = np.array([_RULE_CODES[a.rule] for a in cfgs], dtype=np.int8)
    latch_cfg = np.array([a.p_latch for a in cfgs], dtype=bool)

    reactive_mask = rule == _RULE_CODES[RuleKind.REACTIVE]
    prob_mask = rule == _RULE_CODES[RuleKind.PROBABILISTIC]
    cmd_mask = rule == _RULE_CODES[RuleKind.COMMANDED]
    senses = reactive_mask | prob_mask
    senses_any = bool(senses.any())
    has_prob = bool(prob_mask.any())
    has_cmd = bool(cmd_mask.any())
    has_latch = bool((prob_mask & latch_cfg).any())
    # uniform thresholds let the trigger comparison collapse to scalars; an
    # all-reactive fleet then needs no per-agent dispatch at all
    uniform_thresholds = bool((v_low == v_low[0]).all() and (v_high == v_high[0]).all())
    v_low0, v_high0 = float(v_low[0]), float(v_high[0])
    fast_reactive = bool(reactive_mask.all()) and uniform_thresholds

    # state
    shift = np.zeros(n, dtype=np.int64)
    pending = np.zeros(n, dtype=np.int64)  # +1 postpone, -1 advance, 0 none
    pos_init = (-1 - phase) % period
    connected = pos_init < on_steps
    run_rem = np.where(connected, on_steps - pos_init, 0)
    override = np.zeros(n, dtype=np.int64)  # commanded connection mask
    latch_side = np.zeros(n, dtype=np.int64)
    latch_react = np.zeros(n, dtype=bool)

    # summed per branch exactly as circuit.solve does, so traces match the
    # per-agent reference bit for bit
    g_base = scenario.circuit.base_conductances()
    g_flex = scenario.circuit.flex_conductances()
    r_source = scenario.circuit.r_source

    trace_vs = np.empty(horizon)
    trace_v = np.empty(horizon)
    trace_i = np.empty(horizon)
    trace_n = np.empty(horizon, dtype=np.int64)
    trace_shifts = (
        np.empty((horizon, n), dtype=np.int32) if scenario.shifts_recorded else None
    )

    v_init = initial_sensed_voltage(scenario)
    delay = scenario.sensing_delay
    ctrl = scenario.controller
    flex_on = connected.copy()

    for t in range(horizon):
        vs = source_voltage(scenario, t)
        sensed = trace_v[t - delay] if t >= delay else v_init

        if ctrl is not None and t % ctrl.control_interval == 0:
            plan = controller_plan(
                sensed,
                ctrl.v_nominal,
                ctrl.band,
                scenario.circuit,
                vs,
                LoadState.of(flex_on.tolist()),
            )
            pending[:] = 0
            for ins in plan:
                if ins.action is Action.POSTPONE:
                    pending[ins.agent_id] = 1
                elif ins.action is Action.ADVANCE:
                    pending[ins.agent_id] = -1

        # --- decision rules (vectorized twin of agents.agent_step) ---
        if fast_reactive:
            trig = 1 if sensed < v_low0 else (-1 if sensed > v_high0 else 0)
            if trig == 0:
                new_shift = shift
                sweep: np.ndarray | int = 1
            else:
                new_shift = np.clip(shift + trig, -max_shift, max_shift)
                sweep = 1 - (new_shift - shift)
            pos = (t - phase - new_shift) % period
        else:
            if senses_any:
                trigger = np.where(sensed < v_low, 1, np.where(sensed > v_high, -1, 0))
            else:
                trigger = np.zeros(n, dtype=np.int64)

            applied = np.where(reactive_mask, trigger, 0)
            if has_prob:
                draws = uniform_draws(scenario.seed, t, n)
                if has_latch:
                    latched = prob_mask & latch_cfg
                    new_episode = latched & (trigger != 0) & (latch_side != trigger)
                    react = np.where(new_episode, draws < prob, latch_react)
                    latch_react = react & latched & (trigger != 0)
                    latch_side = np.where(latched, np.where(trigger != 0, trigger, 0), 0)
                    applied = np.where(latched, np.where(react, trigger, 0), applied)
                    plain = prob_mask & ~latch_cfg
                    applied = np.where(plain & (draws < prob), trigger, applied)
                else:
                    applied = np.where(prob_mask & (draws < prob), trigger, applied)
            if has_cmd:
                applied = np.where(cmd_mask, pending, applied)
                # postpone (+1 pending) suppresses the connection, advance forces it
                override = np.clip(override - np.where(cmd_mask, pending, 0), -1, 1)
            if ctrl is not None:
                pending[:] = 0  # instructions are consumed within their step

            new_shift = np.clip(shift + applied, -max_shift, max_shift)

            # commanded schedules free-run unshifted
            sweep = 1 - (new_shift - shift)
            pos = (t - phase - new_shift) % period
            if has_cmd:
                sweep = np.where(cmd_mask, 1, sweep)
                pos = np.where(cmd_mask, (t - phase) % period, pos)

        # --- cycle machine ---
        run_rem = run_rem - connected
        connected = connected & (run_rem > 0)
        starting = ~connected & (pos < sweep) & (pos < on_steps)
        run_rem = np.where(starting, on_steps - pos, run_rem)
        connected = connected | starting
        run_rem = np.where(connected, run_rem, 0)
        shift = new_shift

        flex_on = connected
        if has_cmd:
            flex_on = np.where(cmd_mask & (override != 0), override > 0, connected)

        # --- physical layer ---
        g_total = float((g_base + np.where(flex_on, g_flex, 0.0)).sum())
        v = vs / (1.0 + r_source * g_total)
        trace_vs[t] = vs
        trace_v[t] = v
        trace_i[t] = v * g_total
        trace_n[t] = int(flex_on.sum())
        if trace_shifts is not None:
            trace_shifts[t] = shift

    return Trace(trace_vs, trace_v, trace_i, trace_n, trace_shifts)


def compute_metrics(trace: Trace, band: Band, window: tuple[int, int]) -> Metrics:
    """Stability statistics of ``v_load`` over [w_start, w_end).

    Band crossings count edge transitions between consecutive samples, per
    edge (a single-step jump across the whole band crosses both edges).
    ``settled`` checks the last 10% of the window.
    """
    w_start, w_end = window
    if not 0 <= w_start < w_end <= trace.horizon:
        raise ValueError(f"window [{w_start}, {w_end}) invalid for horizon {trace.horizon}")
    v = trace.v_load[w_start:w_end]
    below = v < band.v_low
    above = v > band.v_high
    outside = below | above
    crossings = int(np.count_nonzero(below[1:] != below[:-1])) + int(
        np.count_nonzero(above[1:] != above[:-1])
    )
    tail = max(1, (w_end - w_start) // 10)
    return Metrics(
        outside_band_fraction=float(outside.mean()),
        band_crossings=crossings,
        max_overshoot=max(0.0, float(v.max()) - band.v_high),
        max_undershoot=max(0.0, band.v_low - float(v.min())),
        settled=bool(~outside[-tail:].any()),
    )


def calibrate_nominal(
    circuit: CircuitConfig,
    agent_configs: Sequence[AgentConfig],
    v_source_base: float,
    band_ratio: float = 0.002,
) -> tuple[float, Band]:
    """Nominal bus voltage and band for a homogeneous fleet.

    Nominal is the voltage with the duty-cycle-expected number of flexible
    loads connected; the band is nominal times (1 +/- band_ratio), the
    voltage analog of a narrow frequency tolerance around 50 Hz.
    """
    if not circuit.is_homogeneous:
        raise ValueError("calibration requires identical branches")
    duties = {(a.period, a.on_steps) for a in agent_configs}
    if len(duties) != 1:
        raise ValueError("calibration requires agents with identical duty cycles")
    period, on_steps = duties.pop()
    n = len(agent_configs)
    expected_on = round(n * on_steps / period)
    v_nominal = v_load_for_count(circuit, v_source_base, expected_on)
    band = Band(v_nominal * (1.0 - band_ratio), v_nominal * (1.0 + band_ratio))
    return v_nominal, band
