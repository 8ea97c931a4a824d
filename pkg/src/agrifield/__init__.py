"""agrifield: deterministic precision-agriculture controller stack.

Simulated field hardware (moisture probe, NPK sensor on an RTU bus, pump
relay), a threshold irrigation controller, fertilizer dose arithmetic, a
crop-damage ML pipeline, and a telemetry gateway with an HTTP API.
"""

__version__ = "0.1.0"
