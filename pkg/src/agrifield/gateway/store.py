"""Durable telemetry store: an append-only, line-delimited JSON log.

Every accepted reading (and every controller mode change) is one JSON line;
replaying the file rebuilds the exact same device state, which is the whole
recovery story. Writes are serialized under a lock; reads return snapshots.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Optional

from ..errors import DomainError, NotFoundError

METRICS = ("moisture_pct", "pump_on", "npk_n", "npk_p", "npk_k")
MODES = ("auto", "manual")


@dataclass(frozen=True)
class TelemetryRecord:
    device_id: str
    metric: str
    value: float
    tick: int
    received_at: float

    def validate(self) -> None:
        if self.metric not in METRICS:
            raise DomainError(f"unknown metric {self.metric!r}; expected one of {METRICS}")
        if self.tick < 0:
            raise DomainError(f"tick must be >= 0, got {self.tick}")
        if not isinstance(self.value, (int, float)) or isinstance(self.value, bool):
            raise DomainError(f"value must be a number, got {type(self.value).__name__}")


@dataclass(frozen=True)
class DeviceState:
    """Latest value per metric (None until first reading), mode and pump."""

    values: dict[str, Optional[float]]
    ticks: dict[str, Optional[int]]
    mode: str
    pump_on: Optional[bool]

    @property
    def last_tick(self) -> Optional[int]:
        seen = [t for t in self.ticks.values() if t is not None]
        return max(seen) if seen else None


class TelemetryStore:
    """Ingest log with per-metric latest tracking and history queries.

    path=None keeps everything in memory; otherwise the JSONL file at path
    is replayed on open and appended to (flushed per record) afterwards.
    """

    def __init__(self, path: str | Path | None = None) -> None:
        self._lock = threading.Lock()
        self._log: list[TelemetryRecord] = []
        self._by_metric: dict[str, list[TelemetryRecord]] = {m: [] for m in METRICS}
        self._latest: dict[str, TelemetryRecord] = {}
        self._mode = "auto"
        self._path = Path(path) if path is not None else None
        self._fh: Optional[IO[str]] = None
        if self._path is not None:
            if self._path.exists():
                self._replay(self._path)
            self._path.parent.mkdir(parents=True, exist_ok=True)
            self._fh = open(self._path, "a")

    # -- ingest ----------------------------------------------------------

    def ingest(self, record: TelemetryRecord) -> int:
        """Append one reading; returns its sequence number in the log."""
        record.validate()
        with self._lock:
            self._append_reading(record)
            self._write_line(
                {
                    "kind": "reading",
                    "device_id": record.device_id,
                    "metric": record.metric,
                    "value": record.value,
                    "tick": record.tick,
                    "received_at": record.received_at,
                }
            )
            return len(self._log)

    def record_mode(self, mode: str, tick: int) -> None:
        """Log a controller mode transition so restarts reproduce it."""
        if mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}, got {mode!r}")
        with self._lock:
            self._mode = mode
            self._write_line(
                {"kind": "mode", "mode": mode, "tick": tick, "received_at": time.time()}
            )

    def _append_reading(self, record: TelemetryRecord) -> None:
        self._log.append(record)
        self._by_metric[record.metric].append(record)
        latest = self._latest.get(record.metric)
        if latest is None or record.tick >= latest.tick:
            self._latest[record.metric] = record

    def _write_line(self, payload: dict) -> None:
        if self._fh is not None:
            self._fh.write(json.dumps(payload) + "\n")
            self._fh.flush()

    def _replay(self, path: Path) -> None:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                entry = json.loads(line)
                if entry.get("kind") == "mode":
                    self._mode = entry["mode"]
                else:
                    self._append_reading(
                        TelemetryRecord(
                            device_id=entry["device_id"],
                            metric=entry["metric"],
                            value=entry["value"],
                            tick=entry["tick"],
                            received_at=entry["received_at"],
                        )
                    )

    # -- queries ----------------------------------------------------------

    def get_state(self) -> DeviceState:
        with self._lock:
            values = {m: None for m in METRICS}
            ticks = {m: None for m in METRICS}
            for metric, record in self._latest.items():
                values[metric] = record.value
                ticks[metric] = record.tick
            pump = values["pump_on"]
            return DeviceState(
                values=values,
                ticks=ticks,
                mode=self._mode,
                pump_on=None if pump is None else bool(pump),
            )

    def get_history(self, metric: str, limit: int = 100) -> list[TelemetryRecord]:
        """Newest-first records for one metric, at most limit of them."""
        if metric not in METRICS:
            raise NotFoundError(f"unknown metric {metric!r}; expected one of {METRICS}")
        if limit < 0:
            raise DomainError(f"limit must be >= 0, got {limit}")
        with self._lock:
            records = self._by_metric[metric]
            newest_first = sorted(
                range(len(records)), key=lambda i: (records[i].tick, i), reverse=True
            )
            return [records[i] for i in newest_first[:limit]]

    def all_readings(self) -> list[TelemetryRecord]:
        with self._lock:
            return list(self._log)

    def close(self) -> None:
        with self._lock:
            if self._fh is not None:
                self._fh.flush()
                self._fh.close()
                self._fh = None
