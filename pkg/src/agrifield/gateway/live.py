"""The live system: controller loop, NPK bus polling and store wiring.

Runs the irrigation controller against the simulated field, pushes each
tick's readings into the telemetry store, polls the NPK probe over the
in-process RTU bus every few ticks, and drains pump commands queued by the
HTTP API. One thread owns the loop; everything it touches is either
thread-safe (store, command queue) or owned exclusively by it.
"""

from __future__ import annotations

import logging
import threading
import time
from typing import Callable, Optional

from .. import agronomy, modbus
from ..control import IrrigationController, TickTelemetry
from ..scenario import Scenario
from .store import TelemetryRecord, TelemetryStore

log = logging.getLogger(__name__)

FrameHook = Callable[[str, bytes], None]


def hex_frame_logger(direction: str, frame: bytes) -> None:
    log.info("%s %s", direction, modbus.frame_to_hex(frame))


class LiveSystem:
    """Couples controller, field, NPK slave and store for cmd_serve."""

    def __init__(
        self,
        scenario: Scenario,
        store: TelemetryStore,
        device_id: str = "field-1",
        npk_poll_ticks: int = 5,
        frame_hook: Optional[FrameHook] = None,
    ) -> None:
        self.store = store
        self.device_id = device_id
        self.npk_poll_ticks = max(1, npk_poll_ticks)
        self.frame_hook = frame_hook
        self.controller = IrrigationController(
            field=scenario.initial_field(),
            sim_cfg=scenario.sim,
            ctrl_cfg=scenario.controller,
            sink=self._publish,
        )
        self.slave = modbus.NpkSlave()
        self._last_mode: Optional[str] = None
        self._stop = threading.Event()
        self._thread: Optional[threading.Thread] = None

    # -- telemetry fan-out -------------------------------------------------

    def _publish(self, record: TickTelemetry) -> None:
        now = time.time()
        self.store.ingest(
            TelemetryRecord(self.device_id, "moisture_pct", record.moisture, record.tick, now)
        )
        self.store.ingest(
            TelemetryRecord(
                self.device_id, "pump_on", 1.0 if record.pump_on else 0.0, record.tick, now
            )
        )
        if record.mode != self._last_mode:
            self.store.record_mode(record.mode, record.tick)
            self._last_mode = record.mode

    # -- command path --------------------------------------------------------

    def submit_command(self, mode: str, on: bool) -> None:
        self.controller.submit_command(mode, on)

    # -- NPK sensor over the RTU bus ----------------------------------------

    def poll_npk(self, tick: int) -> Optional[agronomy.NutrientProfile]:
        """One full bus exchange: request, slave response, decode, ingest."""
        npk = self.controller.field.npk
        self.slave.set_npk(round(npk.n), round(npk.p), round(npk.k))
        request = modbus.encode_read_request(
            self.slave.map, modbus.ReadRequest(self.slave.map.n_register, 3)
        )
        if self.frame_hook:
            self.frame_hook(">>", request)
        response = self.slave.respond(request)
        if response is None:
            log.warning("NPK probe silent at tick %d", tick)
            return None
        if self.frame_hook:
            self.frame_hook("<<", response)
        values = modbus.decode_register_response(response)
        profile = agronomy.npk_from_registers(values, self.slave.map.unit)
        now = time.time()
        for metric, value in (("npk_n", profile.n), ("npk_p", profile.p), ("npk_k", profile.k)):
            self.store.ingest(TelemetryRecord(self.device_id, metric, value, tick, now))
        return profile

    # -- loop ------------------------------------------------------------------

    def tick_once(self) -> TickTelemetry:
        record = self.controller.tick()
        if record.tick % self.npk_poll_ticks == 0:
            self.poll_npk(record.tick)
        return record

    def run(self) -> None:
        interval = self.controller.sim_cfg.tick_seconds
        while not self._stop.is_set():
            started = time.monotonic()
            self.tick_once()
            elapsed = time.monotonic() - started
            self._stop.wait(max(0.0, interval - elapsed))

    def start(self) -> None:
        self._thread = threading.Thread(target=self.run, name="agrifield-loop", daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=5.0)
            self._thread = None
