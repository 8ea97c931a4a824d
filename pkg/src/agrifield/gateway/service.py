"""HTTP face of the gateway.

Five endpoints: ingest readings, read state, read history, queue pump
commands, compute dose recommendations. Validation failures return 400 with
field-level details (not FastAPI's default 422), unknown crops or metrics
404, and a recommendation without any NPK source 412.
"""

from __future__ import annotations

import time
from pathlib import Path
from typing import Callable, Mapping, Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .. import agronomy
from ..errors import DomainError, NotFoundError
from .schemas import (
    CommandAck,
    DosesOut,
    HistoryItem,
    HistoryOut,
    IngestAck,
    NpkOut,
    PumpCommandIn,
    ReadingIn,
    RecommendIn,
    SoilIn,
    StateOut,
)
from .store import TelemetryRecord, TelemetryStore

CommandSubmitter = Callable[[str, bool], None]


def create_app(
    store: TelemetryStore,
    submit_command: Optional[CommandSubmitter] = None,
    crop_table: Optional[Mapping[str, agronomy.CropRequirement]] = None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    """Build the gateway app around a store and a controller command queue."""
    app = FastAPI(title="agrifield gateway", version="0.1.0")
    pending_commands: list[tuple[str, bool]] = []
    submit = submit_command or (lambda mode, on: pending_commands.append((mode, on)))
    table = crop_table if crop_table is not None else agronomy.DEFAULT_CROP_TABLE

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        details = [
            {"field": ".".join(str(p) for p in err["loc"]), "message": err["msg"]}
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"detail": details})

    @app.post("/api/v1/readings", response_model=IngestAck, status_code=201)
    def ingest_reading(reading: ReadingIn) -> IngestAck:
        record = TelemetryRecord(
            device_id=reading.device_id,
            metric=reading.metric,
            value=reading.value,
            tick=reading.tick,
            received_at=time.time(),
        )
        try:
            seq = store.ingest(record)
        except DomainError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return IngestAck(seq=seq)

    @app.get("/api/v1/state", response_model=StateOut)
    def get_state() -> StateOut:
        state = store.get_state()
        return StateOut(
            moisture_pct=state.values["moisture_pct"],
            pump_on=state.pump_on,
            mode=state.mode,
            npk=NpkOut(
                n=state.values["npk_n"], p=state.values["npk_p"], k=state.values["npk_k"]
            ),
            last_tick=state.last_tick,
        )

    @app.get("/api/v1/history", response_model=HistoryOut)
    def get_history(metric: str, limit: int = 100) -> HistoryOut:
        try:
            records = store.get_history(metric, limit)
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except DomainError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return HistoryOut(
            metric=metric,
            records=[
                HistoryItem(
                    device_id=r.device_id,
                    metric=r.metric,
                    value=r.value,
                    tick=r.tick,
                    received_at=r.received_at,
                )
                for r in records
            ],
        )

    @app.post("/api/v1/pump", response_model=CommandAck)
    def set_pump(command: PumpCommandIn) -> CommandAck:
        submit(command.mode, command.on)
        return CommandAck(mode=command.mode, on=command.on)

    @app.post("/api/v1/recommend", response_model=DosesOut)
    def recommend(body: RecommendIn) -> DosesOut:
        try:
            crop = agronomy.lookup_crop(body.crop, table)
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

        if body.soil is not None:
            soil = agronomy.NutrientProfile(body.soil.n, body.soil.p, body.soil.k)
        else:
            state = store.get_state()
            n, p, k = (state.values[m] for m in ("npk_n", "npk_p", "npk_k"))
            if n is None or p is None or k is None:
                raise HTTPException(
                    status_code=412,
                    detail="no NPK telemetry yet; supply soil values in the request",
                )
            soil = agronomy.NutrientProfile(n, p, k)

        shortfall = agronomy.deficit(soil, crop.required)
        doses = agronomy.recommend_doses(shortfall)
        return DosesOut(
            crop=crop.crop_name,
            soil=SoilIn(n=soil.n, p=soil.p, k=soil.k),
            required=SoilIn(n=crop.required.n, p=crop.required.p, k=crop.required.k),
            deficit=SoilIn(n=shortfall.n, p=shortfall.p, k=shortfall.k),
            mop_kg_ha=doses.mop_kg_ha,
            dap_kg_ha=doses.dap_kg_ha,
            urea_kg_ha=doses.urea_kg_ha,
            supplied=SoilIn(n=doses.supplied.n, p=doses.supplied.p, k=doses.supplied.k),
        )

    app.state.pending_commands = pending_commands
    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="portal")
    return app
