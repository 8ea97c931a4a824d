"""Nutrient accounting and fertilizer dose recommendation.

Doses are sized greedily in the order potassium -> phosphorus -> nitrogen:
MOP covers the whole K deficit, DAP the whole P deficit, and urea whatever
nitrogen DAP's 18% N content has not already supplied. All arithmetic uses
the exact product mass fractions with no intermediate rounding.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, NotFoundError, SchemaError


@dataclass(frozen=True)
class NutrientProfile:
    """Nitrogen, phosphorus and potassium content in kg/ha."""

    n: float
    p: float
    k: float

    def __post_init__(self) -> None:
        for name, value in (("n", self.n), ("p", self.p), ("k", self.k)):
            if value < 0:
                raise DomainError(f"nutrient {name} must be >= 0, got {value}")

    def scaled(self, factor: float) -> "NutrientProfile":
        return NutrientProfile(self.n * factor, self.p * factor, self.k * factor)


@dataclass(frozen=True)
class CropRequirement:
    crop_name: str
    required: NutrientProfile


@dataclass(frozen=True)
class FertilizerProduct:
    """A fertilizer and the mass fraction of each macronutrient it supplies."""

    name: str
    fraction_n: float
    fraction_p: float
    fraction_k: float

    def __post_init__(self) -> None:
        for f in (self.fraction_n, self.fraction_p, self.fraction_k):
            if not 0.0 <= f <= 1.0:
                raise DomainError(f"{self.name}: fractions must lie in [0, 1]")
        if self.fraction_n + self.fraction_p + self.fraction_k > 1.0:
            raise DomainError(f"{self.name}: fractions sum above 1")


MOP = FertilizerProduct("MOP", 0.0, 0.0, 0.60)
UREA = FertilizerProduct("urea", 0.46, 0.0, 0.0)
DAP = FertilizerProduct("DAP", 0.18, 0.46, 0.0)

# Sole built-in crop requirement; add others via a crop table file.
DEFAULT_CROP_TABLE: dict[str, CropRequirement] = {
    "wheat": CropRequirement("wheat", NutrientProfile(100.0, 20.0, 60.0)),
}


@dataclass(frozen=True)
class DoseRecommendation:
    """Per-product doses in kg/ha plus the nutrients they supply.

    supplied is reconstructed from the doses via the product fractions;
    residual_deficit is whatever the doses leave uncovered (phosphorus and
    potassium are always covered exactly, nitrogen may be oversupplied when
    DAP alone exceeds the N deficit).
    """

    mop_kg_ha: float
    dap_kg_ha: float
    urea_kg_ha: float
    supplied: NutrientProfile
    residual_deficit: NutrientProfile


def deficit(soil: NutrientProfile, req: NutrientProfile) -> NutrientProfile:
    """Componentwise shortfall max(req - soil, 0)."""
    return NutrientProfile(
        max(req.n - soil.n, 0.0),
        max(req.p - soil.p, 0.0),
        max(req.k - soil.k, 0.0),
    )


def recommend_doses(def_: NutrientProfile) -> DoseRecommendation:
    """Size MOP, DAP and urea doses to cover a nutrient deficit.

    mop = deficit.k / 0.60; dap = deficit.p / 0.46; urea covers the nitrogen
    DAP did not: max(deficit.n - 0.18 * dap, 0) / 0.46. Urea clamps to zero
    when DAP nitrogen alone exceeds the N deficit.
    """
    mop = def_.k / MOP.fraction_k
    dap = def_.p / DAP.fraction_p
    n_from_dap = DAP.fraction_n * dap
    urea = max(def_.n - n_from_dap, 0.0) / UREA.fraction_n
    supplied = NutrientProfile(
        n=UREA.fraction_n * urea + DAP.fraction_n * dap,
        p=DAP.fraction_p * dap,
        k=MOP.fraction_k * mop,
    )
    residual = NutrientProfile(
        max(def_.n - supplied.n, 0.0),
        max(def_.p - supplied.p, 0.0),
        max(def_.k - supplied.k, 0.0),
    )
    return DoseRecommendation(
        mop_kg_ha=mop,
        dap_kg_ha=dap,
        urea_kg_ha=urea,
        supplied=supplied,
        residual_deficit=residual,
    )


def npk_from_registers(values: Sequence[int], unit_factor: float = 1.0) -> NutrientProfile:
    """Convert three 16-bit sensor registers (N, P, K order) to kg/ha."""
    if len(values) != 3:
        raise DomainError(f"expected exactly 3 register values, got {len(values)}")
    return NutrientProfile(*(v * unit_factor for v in values))


def load_crop_table(path: str | Path) -> dict[str, CropRequirement]:
    """Read a crop requirement table from a CSV with crop_name,n,p,k columns."""
    table: dict[str, CropRequirement] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required_cols = {"crop_name", "n", "p", "k"}
        if reader.fieldnames is None or not required_cols.issubset(reader.fieldnames):
            missing = sorted(required_cols - set(reader.fieldnames or []))
            raise SchemaError(f"crop table missing columns: {', '.join(missing)}")
        for row in reader:
            name = row["crop_name"].strip()
            try:
                profile = NutrientProfile(float(row["n"]), float(row["p"]), float(row["k"]))
            except ValueError as exc:
                raise SchemaError(f"crop table row for {name!r}: {exc}") from exc
            table[name.lower()] = CropRequirement(name, profile)
    return table


def lookup_crop(
    name: str, table: Mapping[str, CropRequirement] | None = None
) -> CropRequirement:
    """Find a crop requirement by case-insensitive name."""
    table = DEFAULT_CROP_TABLE if table is None else table
    req = table.get(name.strip().lower())
    if req is None:
        known = ", ".join(sorted(table)) or "<none>"
        raise NotFoundError(f"unknown crop {name!r}; available crops: {known}")
    return req


def available_crops(table: Mapping[str, CropRequirement] | None = None) -> list[str]:
    table = DEFAULT_CROP_TABLE if table is None else table
    return sorted(table)
