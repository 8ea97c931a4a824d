"""Threshold irrigation controller with manual override.

Each tick the controller reads the moisture probe, decides the pump state
(auto: on below threshold, off at or above it, optional hysteresis band in
between), applies it to the field, and publishes a telemetry record. Mode
changes arrive through a serialized command queue and take effect between
ticks; telemetry failures never block actuation.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Optional

import numpy as np

from . import simcore
from .errors import DomainError
from .simcore import FieldState, SimConfig

log = logging.getLogger(__name__)

AUTO = "auto"
MANUAL = "manual"


class Reason(str, Enum):
    BELOW_THRESHOLD = "below_threshold"
    REACHED_THRESHOLD = "reached_threshold"
    MANUAL = "manual"
    HOLD = "hold"


@dataclass(frozen=True)
class ControllerConfig:
    threshold_pct: float = 50.0
    hysteresis_pct: float = 0.0
    poll_ticks: int = 1

    def __post_init__(self) -> None:
        if not 0.0 < self.threshold_pct < 100.0:
            raise DomainError(f"threshold_pct must lie in (0, 100): {self.threshold_pct}")
        if self.hysteresis_pct < 0:
            raise DomainError(f"hysteresis_pct must be >= 0: {self.hysteresis_pct}")
        if self.threshold_pct + self.hysteresis_pct > 100.0:
            raise DomainError("threshold_pct + hysteresis_pct must not exceed 100")
        if self.poll_ticks < 1:
            raise DomainError(f"poll_ticks must be >= 1: {self.poll_ticks}")


@dataclass(frozen=True)
class ControllerState:
    mode: str = AUTO
    manual_on: bool = False
    pump_on: bool = False
    last_moisture: Optional[float] = None


@dataclass(frozen=True)
class PumpCommand:
    turn_on: bool
    reason: Reason


@dataclass(frozen=True)
class TickTelemetry:
    """What the controller publishes after each tick."""

    tick: int
    moisture: float
    adc: int
    pump_on: bool
    mode: str


def decide(moisture: float, state: ControllerState, cfg: ControllerConfig) -> PumpCommand:
    """Pick the pump state for one reading.

    Manual mode always wins. In auto mode the pump turns on strictly below
    threshold - hysteresis, turns off at or above threshold, and holds its
    previous state inside the band.
    """
    if not 0.0 <= moisture <= 100.0:
        raise DomainError(f"moisture outside [0, 100]: {moisture}")
    if state.mode == MANUAL:
        return PumpCommand(turn_on=state.manual_on, reason=Reason.MANUAL)
    if moisture < cfg.threshold_pct - cfg.hysteresis_pct:
        return PumpCommand(turn_on=True, reason=Reason.BELOW_THRESHOLD)
    if moisture >= cfg.threshold_pct:
        return PumpCommand(turn_on=False, reason=Reason.REACHED_THRESHOLD)
    return PumpCommand(turn_on=state.pump_on, reason=Reason.HOLD)


def set_mode(state: ControllerState, mode: str, manual_on: bool = False) -> ControllerState:
    """Return state with the requested mode; applied at the next tick."""
    if mode not in (AUTO, MANUAL):
        raise DomainError(f"mode must be {AUTO!r} or {MANUAL!r}, got {mode!r}")
    return replace(state, mode=mode, manual_on=manual_on)


TelemetrySink = Callable[[TickTelemetry], None]


class IrrigationController:
    """Closed loop over a simulated field.

    Owns the field snapshot, the probe RNG and the pending-command queue.
    tick() is the only mutator and is meant to be called from a single loop;
    submit_command() may be called from other threads (deque append is
    atomic) and commands are drained at the start of the next tick.
    """

    def __init__(
        self,
        field: FieldState,
        sim_cfg: SimConfig,
        ctrl_cfg: ControllerConfig | None = None,
        sink: TelemetrySink | None = None,
    ) -> None:
        self.field = field
        self.sim_cfg = sim_cfg
        self.ctrl_cfg = ctrl_cfg or ControllerConfig()
        self.state = ControllerState()
        self.sink = sink
        self.rng = np.random.default_rng(sim_cfg.seed)
        self.dropped_telemetry = 0
        self._commands: deque[tuple[str, bool]] = deque()
        self._ticks_since_poll = 0

    def submit_command(self, mode: str, manual_on: bool = False) -> None:
        if mode not in (AUTO, MANUAL):
            raise DomainError(f"mode must be {AUTO!r} or {MANUAL!r}, got {mode!r}")
        self._commands.append((mode, manual_on))

    def _drain_commands(self) -> None:
        while self._commands:
            mode, manual_on = self._commands.popleft()
            self.state = set_mode(self.state, mode, manual_on)

    def tick(self) -> TickTelemetry:
        """Run one control cycle and return the telemetry it produced."""
        self._drain_commands()
        sample = simcore.sample_adc(self.field, self.rng, self.sim_cfg)
        moisture = simcore.adc_to_moisture(sample.counts)

        if self._ticks_since_poll % self.ctrl_cfg.poll_ticks == 0:
            command = decide(moisture, self.state, self.ctrl_cfg)
            pump_on = command.turn_on
        else:
            pump_on = self.state.pump_on  # hold between polls
        self._ticks_since_poll = (self._ticks_since_poll + 1) % self.ctrl_cfg.poll_ticks

        self.state = replace(self.state, pump_on=pump_on, last_moisture=moisture)
        self.field = simcore.step_field(self.field, pump_on, self.sim_cfg)

        record = TickTelemetry(
            tick=sample.tick,
            moisture=moisture,
            adc=sample.counts,
            pump_on=pump_on,
            mode=self.state.mode,
        )
        if self.sink is not None:
            try:
                self.sink(record)
            except Exception:
                self.dropped_telemetry += 1
                log.warning("telemetry sink failed; record for tick %d dropped", record.tick)
        return record
