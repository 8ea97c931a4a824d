"""Virtual field hardware: soil moisture dynamics and the 10-bit analog probe.

All state objects are immutable snapshots; stepping returns a new state, so
traces are safe to share across threads. The probe maps moisture to ADC counts
with the convention that a fully wet field reads 0 counts and a fully dry one
reads 1023 (higher counts = drier soil).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .agronomy import NutrientProfile
from .errors import DomainError

ADC_MAX = 1023


def _round_half_away(x: float) -> int:
    """Round with ties away from zero (not banker's), for non-negative x."""
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class SimConfig:
    """Field dynamics and probe noise parameters.

    evap_rate is lost every tick regardless of the pump; infil_rate is gained
    only while the pump runs, and must exceed evap_rate so irrigation can
    actually raise moisture.
    """

    tick_seconds: float = 1.0
    evap_rate: float = 0.05
    infil_rate: float = 0.5
    adc_noise_sd: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.tick_seconds <= 0:
            raise DomainError(f"tick_seconds must be positive, got {self.tick_seconds}")
        if self.evap_rate < 0:
            raise DomainError(f"evap_rate must be >= 0, got {self.evap_rate}")
        if self.infil_rate <= self.evap_rate:
            raise DomainError(
                f"infil_rate ({self.infil_rate}) must exceed evap_rate ({self.evap_rate})"
            )
        if self.adc_noise_sd < 0:
            raise DomainError(f"adc_noise_sd must be >= 0, got {self.adc_noise_sd}")
        if not 0 <= int(self.seed) < 2**64:
            raise DomainError(f"seed must fit in 64 unsigned bits, got {self.seed}")


@dataclass(frozen=True)
class FieldState:
    """Snapshot of the simulated plot: moisture, nutrients, pump, tick clock."""

    moisture_pct: float = 50.0
    npk: NutrientProfile = field(default_factory=lambda: NutrientProfile(0.0, 0.0, 0.0))
    pump_on: bool = False
    clock: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.moisture_pct <= 100.0:
            raise DomainError(f"moisture_pct outside [0, 100]: {self.moisture_pct}")


@dataclass(frozen=True)
class AdcSample:
    """One probe reading: raw counts in [0, 1023] plus the tick it was taken."""

    counts: int
    tick: int

    def __post_init__(self) -> None:
        if not 0 <= self.counts <= ADC_MAX:
            raise DomainError(f"counts outside [0, {ADC_MAX}]: {self.counts}")


def adc_to_moisture(counts: int) -> float:
    """Convert raw ADC counts to moisture percent: 100 - (counts / 1023) * 100.

    Strictly decreasing; 0 counts reads 100% (wet), 1023 reads 0% (dry).
    """
    if not 0 <= counts <= ADC_MAX:
        raise DomainError(f"counts outside [0, {ADC_MAX}]: {counts}")
    return 100.0 - (counts / ADC_MAX) * 100.0


def moisture_to_adc(moisture: float) -> int:
    """Inverse of adc_to_moisture, rounding ties away from zero (50.0% -> 512)."""
    if not 0.0 <= moisture <= 100.0:
        raise DomainError(f"moisture outside [0, 100]: {moisture}")
    return _round_half_away((100.0 - moisture) / 100.0 * ADC_MAX)


def step_field(state: FieldState, pump_on: bool, cfg: SimConfig) -> FieldState:
    """Advance the field one tick: evaporation always, infiltration if pumping.

    Moisture is clamped to [0, 100]; nutrients are unchanged.
    """
    moisture = state.moisture_pct - cfg.evap_rate
    if pump_on:
        moisture += cfg.infil_rate
    moisture = min(100.0, max(0.0, moisture))
    return replace(state, moisture_pct=moisture, pump_on=pump_on, clock=state.clock + 1)


def sample_adc(state: FieldState, rng: np.random.Generator, cfg: SimConfig) -> AdcSample:
    """Read the moisture probe, adding Gaussian noise in ADC counts.

    Noise is applied after conversion and the result clamped to [0, 1023];
    with adc_noise_sd = 0 the reading is exactly moisture_to_adc(moisture).
    The same seed and call sequence always produces the same readings.
    """
    counts = moisture_to_adc(state.moisture_pct)
    if cfg.adc_noise_sd > 0:
        noisy = counts + rng.normal(0.0, cfg.adc_noise_sd)
        counts = _round_half_away(noisy) if noisy >= 0 else -_round_half_away(-noisy)
        counts = min(ADC_MAX, max(0, counts))
    return AdcSample(counts=counts, tick=state.clock)
