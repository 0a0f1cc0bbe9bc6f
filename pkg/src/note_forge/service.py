"""Two-button demo service: build a sequential record, then summarize it.

The summary route deliberately fails with 409 until the sequential
record has been generated in the same session, mirroring the intended
button ordering in the UI.
"""

from __future__ import annotations

import logging
import os
import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Header, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .datasets import sequential_record_to_json
from .errors import GatewayError, NoteForgeError, ValidationError
from .evaluation import evaluate_pair
from .gateway import EndpointConfig, GatewayClient
from .pipeline import fixtures_dir, run_pipeline

logger = logging.getLogger(__name__)

DEMO_PATIENT_COUNT = 2
FRONTEND_DIST_ENV = "NOTE_FORGE_FRONTEND_DIST"


class EvaluateRequest(BaseModel):
    reference: str
    hypothesis: str
    lexical_only: bool = True
    pair_id: str = "pair"


def _demo_patients(pipeline):
    members = sorted(pipeline.cohort.members,
                     key=lambda m: m.subject_id)[:DEMO_PATIENT_COUNT]
    patients = {}
    for letter, member in zip("ABCDEFGH", members):
        patients[member.subject_id] = {
            "id": member.subject_id,
            "label": f"Patient {letter} ({member.patient.gender}, "
                     f"age {member.age.years})",
            "hadm_id": member.hadm_id,
        }
    return patients


def create_app(gateway: Optional[GatewayClient] = None, data_dir=None,
               frontend_dist=None) -> FastAPI:
    pipeline = run_pipeline(data_dir or fixtures_dir())
    patients = _demo_patients(pipeline)
    records = {p["hadm_id"]: pipeline.record_for_hadm(p["hadm_id"])
               for p in patients.values()}

    app = FastAPI(title="note-forge demo")
    # session -> set of patient ids whose sequential record was generated
    generated: dict = {}
    generated_lock = threading.Lock()

    def _gateway() -> GatewayClient:
        nonlocal gateway
        if gateway is None:
            try:
                gateway = GatewayClient(EndpointConfig.from_env())
            except ValidationError as exc:
                raise HTTPException(status_code=502,
                                    detail=f"no gateway configured: {exc}")
        return gateway

    def _patient_or_404(patient_id: int) -> dict:
        patient = patients.get(patient_id)
        if patient is None:
            raise HTTPException(status_code=404,
                                detail=f"unknown patient {patient_id}")
        return patient

    @app.get("/api/health")
    def health():
        return {"status": "ok", "patients": len(patients),
                "gateway_configured": gateway is not None
                or bool(os.environ.get("NOTE_GATEWAY_URL"))}

    @app.get("/api/patients")
    def list_patients():
        return {"patients": sorted(patients.values(), key=lambda p: p["id"])}

    @app.post("/api/patients/{patient_id}/sequential")
    def build_sequential(patient_id: int,
                         x_session_id: str = Header(default="default")):
        patient = _patient_or_404(patient_id)
        record = records[patient["hadm_id"]]
        with generated_lock:
            generated.setdefault(x_session_id, set()).add(patient_id)
        return sequential_record_to_json(record)

    @app.post("/api/patients/{patient_id}/summary")
    def summarize(patient_id: int,
                  x_session_id: str = Header(default="default")):
        patient = _patient_or_404(patient_id)
        with generated_lock:
            ready = patient_id in generated.get(x_session_id, set())
        if not ready:
            raise HTTPException(
                status_code=409,
                detail="generate the sequential dataset first")
        record = records[patient["hadm_id"]]
        try:
            summary = _gateway().generate(record.instruction)
        except GatewayError as exc:
            raise HTTPException(status_code=502,
                                detail=f"gateway failure: {exc}")
        return {"patient_id": patient_id, "hadm_id": patient["hadm_id"],
                "summary": summary}

    @app.post("/api/evaluate")
    def evaluate(request: EvaluateRequest):
        client = None if request.lexical_only else _gateway()
        try:
            report = evaluate_pair(request.reference, request.hypothesis,
                                   client, pair_id=request.pair_id,
                                   lexical_only=request.lexical_only)
        except GatewayError as exc:
            raise HTTPException(status_code=502,
                                detail=f"gateway failure: {exc}")
        except NoteForgeError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return report.as_dict()

    dist = frontend_dist or os.environ.get(FRONTEND_DIST_ENV) or "frontend/dist"
    dist = Path(dist)
    if dist.is_dir():
        app.mount("/", StaticFiles(directory=dist, html=True),
                  name="frontend")
        logger.info("serving frontend from %s", dist)
    else:
        @app.get("/")
        def index():
            return {"service": "note-forge demo", "api": "/api", "docs": "/docs"}

    return app
