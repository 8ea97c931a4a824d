"""Scenario files and the batch closed-loop runner.

A scenario is a JSON document fixing the initial field, the dynamics, the
controller settings, the run length and any scripted mode commands:

    {
      "initial_moisture": 30.0,
      "initial_npk": {"n": 10, "p": 5, "k": 10},
      "sim": {"tick_seconds": 1.0, "evap_rate": 0.05, "infil_rate": 0.5,
              "adc_noise_sd": 0.0, "seed": 42},
      "controller": {"threshold_pct": 50.0, "hysteresis_pct": 0.0, "poll_ticks": 1},
      "duration_ticks": 1000,
      "commands": [{"tick": 200, "mode": "manual", "on": true}]
    }

Every field has a default, so {} is a valid scenario. Runs are fully
deterministic given the file and the seed.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional

from . import modbus
from .agronomy import NutrientProfile
from .control import AUTO, MANUAL, ControllerConfig, IrrigationController, TickTelemetry
from .errors import DomainError, SchemaError
from .simcore import FieldState, SimConfig

FrameHook = Callable[[str, bytes], None]


@dataclass(frozen=True)
class ScriptedCommand:
    tick: int
    mode: str
    on: bool = False

    def __post_init__(self) -> None:
        if self.tick < 0:
            raise SchemaError(f"command tick must be >= 0, got {self.tick}")
        if self.mode not in (AUTO, MANUAL):
            raise SchemaError(f"command mode must be auto or manual, got {self.mode!r}")


@dataclass(frozen=True)
class Scenario:
    initial_moisture: float = 30.0
    initial_npk: NutrientProfile = field(default_factory=lambda: NutrientProfile(10.0, 5.0, 10.0))
    sim: SimConfig = field(default_factory=SimConfig)
    controller: ControllerConfig = field(default_factory=ControllerConfig)
    duration_ticks: int = 1000
    commands: tuple[ScriptedCommand, ...] = ()

    def initial_field(self) -> FieldState:
        return FieldState(moisture_pct=self.initial_moisture, npk=self.initial_npk)

    def with_overrides(
        self, seed: Optional[int] = None, duration: Optional[int] = None
    ) -> "Scenario":
        out = self
        if seed is not None:
            out = replace(out, sim=replace(out.sim, seed=seed))
        if duration is not None:
            out = replace(out, duration_ticks=duration)
        return out


def load_scenario(path: str | Path) -> Scenario:
    """Parse and validate a scenario file; bad content raises SchemaError."""
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"scenario file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise SchemaError(f"scenario file {path} must contain a JSON object")
    try:
        npk = raw.get("initial_npk", {"n": 10.0, "p": 5.0, "k": 10.0})
        commands = tuple(
            ScriptedCommand(
                tick=int(c["tick"]), mode=str(c["mode"]), on=bool(c.get("on", False))
            )
            for c in raw.get("commands", [])
        )
        return Scenario(
            initial_moisture=float(raw.get("initial_moisture", 30.0)),
            initial_npk=NutrientProfile(
                float(npk.get("n", 0.0)), float(npk.get("p", 0.0)), float(npk.get("k", 0.0))
            ),
            sim=SimConfig(**raw.get("sim", {})),
            controller=ControllerConfig(**raw.get("controller", {})),
            duration_ticks=int(raw.get("duration_ticks", 1000)),
            commands=commands,
        )
    except (KeyError, TypeError, ValueError, DomainError) as exc:
        raise SchemaError(f"scenario file {path} is invalid: {exc}") from exc


@dataclass
class ScenarioResult:
    trace: list[TickTelemetry]
    ticks_pump_on: int
    final_moisture: float

    @property
    def duration(self) -> int:
        return len(self.trace)


def run_scenario(
    scenario: Scenario,
    npk_poll_ticks: int = 0,
    frame_hook: Optional[FrameHook] = None,
) -> ScenarioResult:
    """Run the closed loop for duration_ticks and collect the trace.

    npk_poll_ticks > 0 also reads the NPK probe over the RTU codec every
    that many ticks (the values only matter to frame_hook, which receives
    each request/response frame, e.g. for hex dumping).
    """
    trace: list[TickTelemetry] = []
    controller = IrrigationController(
        field=scenario.initial_field(),
        sim_cfg=scenario.sim,
        ctrl_cfg=scenario.controller,
        sink=trace.append,
    )
    slave = modbus.NpkSlave()
    pending = sorted(scenario.commands, key=lambda c: c.tick)
    next_cmd = 0

    for tick in range(scenario.duration_ticks):
        while next_cmd < len(pending) and pending[next_cmd].tick <= tick:
            controller.submit_command(pending[next_cmd].mode, pending[next_cmd].on)
            next_cmd += 1
        record = controller.tick()
        if npk_poll_ticks > 0 and record.tick % npk_poll_ticks == 0:
            npk = controller.field.npk
            slave.set_npk(round(npk.n), round(npk.p), round(npk.k))
            request = modbus.encode_read_request(
                slave.map, modbus.ReadRequest(slave.map.n_register, 3)
            )
            response = slave.respond(request)
            if frame_hook:
                frame_hook(">>", request)
                if response is not None:
                    frame_hook("<<", response)

    return ScenarioResult(
        trace=trace,
        ticks_pump_on=sum(1 for r in trace if r.pump_on),
        final_moisture=controller.field.moisture_pct,
    )


TRACE_HEADER = ("tick", "moisture", "adc", "pump_on", "mode")


def write_trace_csv(result: ScenarioResult, path: str | Path) -> None:
    """Write the per-tick trace; stable formatting so equal runs diff clean."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_HEADER)
        for r in result.trace:
            writer.writerow(
                (r.tick, f"{r.moisture:.6f}", r.adc, int(r.pump_on), r.mode)
            )
