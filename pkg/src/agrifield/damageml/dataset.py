"""Crop-damage survey records: CSV ingestion, null filling and a synthetic
generator for benchmarking without the original data."""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from ..errors import SchemaError
from .features import FeatureSpec

# Survey schema: one row per field observation.
ID_COLUMN = "id"
LABEL_COLUMN = "crop_damage"
NUMERIC_COLUMNS = (
    "estimated_insect_count",
    "number_doses_week",
    "number_weeks_used",
    "number_weeks_quit",
)
CATEGORICAL_COLUMNS = ("crop_type", "soil_type", "pesticide_use_category", "season")
FEATURE_COLUMNS = NUMERIC_COLUMNS + CATEGORICAL_COLUMNS
ALL_COLUMNS = (ID_COLUMN,) + FEATURE_COLUMNS + (LABEL_COLUMN,)


@dataclass(frozen=True)
class DamageRecord:
    """One survey row; None marks a missing value prior to filling."""

    id: int
    estimated_insect_count: Optional[float] = None
    crop_type: Optional[int] = None
    soil_type: Optional[int] = None
    pesticide_use_category: Optional[int] = None
    number_doses_week: Optional[float] = None
    number_weeks_used: Optional[float] = None
    number_weeks_quit: Optional[float] = None
    season: Optional[int] = None
    crop_damage: Optional[int] = None


def _parse_number(raw: str) -> Optional[float]:
    raw = raw.strip()
    if not raw:
        return None
    try:
        return float(raw)
    except ValueError:
        return None  # unparseable numeric cells become missing


def _parse_code(raw: str):
    """Categorical cells: keep integers as ints, other text verbatim."""
    raw = raw.strip()
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        return raw


def load_records(
    path: str | Path,
    require_label: bool = True,
    column_map: Mapping[str, str] | None = None,
) -> list[DamageRecord]:
    """Parse a header-first CSV of survey rows.

    column_map renames canonical column -> actual header, absorbing naming
    drift in exported files. Missing required columns raise SchemaError
    naming them; a missing file propagates as the usual OSError.
    """
    column_map = dict(column_map or {})
    required = list(ALL_COLUMNS) if require_label else [c for c in ALL_COLUMNS if c != LABEL_COLUMN]

    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        actual = {canon: column_map.get(canon, canon) for canon in ALL_COLUMNS}
        missing = [canon for canon in required if actual[canon] not in header]
        if missing:
            raise SchemaError(f"missing required columns: {', '.join(sorted(missing))}")

        records = []
        for row in reader:
            def cell(canon: str) -> str:
                return row.get(actual[canon]) or ""

            label_raw = _parse_number(cell(LABEL_COLUMN))
            records.append(
                DamageRecord(
                    id=int(_parse_number(cell(ID_COLUMN)) or 0),
                    estimated_insect_count=_parse_number(cell("estimated_insect_count")),
                    crop_type=_parse_code(cell("crop_type")),
                    soil_type=_parse_code(cell("soil_type")),
                    pesticide_use_category=_parse_code(cell("pesticide_use_category")),
                    number_doses_week=_parse_number(cell("number_doses_week")),
                    number_weeks_used=_parse_number(cell("number_weeks_used")),
                    number_weeks_quit=_parse_number(cell("number_weeks_quit")),
                    season=_parse_code(cell("season")),
                    crop_damage=None if label_raw is None else int(label_raw),
                )
            )
    return records


def fill_missing(records: Sequence[DamageRecord], spec: FeatureSpec) -> list[DamageRecord]:
    """Replace missing numeric fields with the sentinel; idempotent."""
    filled = []
    for rec in records:
        updates = {
            col: spec.fill_value
            for col in NUMERIC_COLUMNS
            if getattr(rec, col) is None
        }
        filled.append(replace(rec, **updates) if updates else rec)
    return filled


def synth_generate(n: int, seed: int, noise_rate: float = 0.05) -> list[DamageRecord]:
    """Generate n survey rows with a known damage rule, for benchmarks.

    Insect counts follow a slowly drifting positive series; damage is 2 when
    the count is above its 90th percentile under heavy pesticide use
    (category 3), 1 when above the 60th percentile, else 0, and noise_rate
    of the labels are then flipped to a different class. Class 0 stays the
    clear majority and class 2 a small minority, so the benchmark keeps the
    imbalanced flavour of real damage surveys. Deterministic per seed; about
    8% of number_weeks_used values are left missing.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)

    # AR(1) drift plus a seasonal swing gives the counts a time-series look.
    drift = np.empty(n)
    drift[0] = 0.0
    shocks = rng.normal(0.0, 1.0, size=n)
    for i in range(1, n):
        drift[i] = 0.97 * drift[i - 1] + shocks[i]
    seasonal = 6.0 * np.sin(np.arange(n) * (2 * np.pi / 360.0))
    counts = np.maximum(0.0, 180.0 + 14.0 * drift + seasonal + rng.normal(0.0, 25.0, n))
    counts = np.round(counts)

    crop_type = rng.integers(0, 2, size=n)
    soil_type = rng.integers(0, 2, size=n)
    season = rng.integers(1, 4, size=n)
    pesticide = rng.choice([1, 2, 3], size=n, p=[0.25, 0.45, 0.30])
    doses_week = rng.integers(0, 60, size=n)
    weeks_used = rng.integers(0, 55, size=n).astype(float)
    weeks_quit = rng.integers(0, 12, size=n)
    missing_mask = rng.random(n) < 0.08

    q60, q90 = np.quantile(counts, [0.60, 0.90])
    labels = np.zeros(n, dtype=int)
    labels[counts > q60] = 1
    labels[(counts > q90) & (pesticide == 3)] = 2

    flip = rng.random(n) < noise_rate
    offsets = rng.integers(1, 3, size=n)  # shift to a different class mod 3
    labels[flip] = (labels[flip] + offsets[flip]) % 3

    return [
        DamageRecord(
            id=i + 1,
            estimated_insect_count=float(counts[i]),
            crop_type=int(crop_type[i]),
            soil_type=int(soil_type[i]),
            pesticide_use_category=int(pesticide[i]),
            number_doses_week=float(doses_week[i]),
            number_weeks_used=None if missing_mask[i] else float(weeks_used[i]),
            number_weeks_quit=float(weeks_quit[i]),
            season=int(season[i]),
            crop_damage=int(labels[i]),
        )
        for i in range(n)
    ]
