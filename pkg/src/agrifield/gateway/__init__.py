"""Telemetry gateway: append-only store, HTTP API and the live control loop."""

from .store import METRICS, DeviceState, TelemetryRecord, TelemetryStore

__all__ = ["METRICS", "DeviceState", "TelemetryRecord", "TelemetryStore"]
