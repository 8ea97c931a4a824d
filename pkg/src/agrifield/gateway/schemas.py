"""Request and response bodies for the gateway HTTP API."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class ReadingIn(BaseModel):
    device_id: str = "field-1"
    metric: Literal["moisture_pct", "pump_on", "npk_n", "npk_p", "npk_k"]
    value: float
    tick: int = Field(ge=0)


class IngestAck(BaseModel):
    status: Literal["ok"] = "ok"
    seq: int


class NpkOut(BaseModel):
    n: Optional[float] = None
    p: Optional[float] = None
    k: Optional[float] = None


class StateOut(BaseModel):
    moisture_pct: Optional[float] = None
    pump_on: Optional[bool] = None
    mode: str
    npk: NpkOut
    last_tick: Optional[int] = None


class HistoryItem(BaseModel):
    device_id: str
    metric: str
    value: float
    tick: int
    received_at: float


class HistoryOut(BaseModel):
    metric: str
    records: list[HistoryItem]


class PumpCommandIn(BaseModel):
    mode: Literal["auto", "manual"]
    on: bool = False


class CommandAck(BaseModel):
    status: Literal["queued"] = "queued"
    mode: str
    on: bool


class SoilIn(BaseModel):
    n: float = Field(ge=0)
    p: float = Field(ge=0)
    k: float = Field(ge=0)


class RecommendIn(BaseModel):
    crop: str
    soil: Optional[SoilIn] = None


class DosesOut(BaseModel):
    crop: str
    soil: SoilIn
    required: SoilIn
    deficit: SoilIn
    mop_kg_ha: float
    dap_kg_ha: float
    urea_kg_ha: float
    supplied: SoilIn
