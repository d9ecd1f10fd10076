"""HTTP gateway. Thin request/response shell around the Engine facade.

Request bodies are validated by the same ingest/gold parsers the CLI uses;
there is deliberately no second schema layer that could drift. Errors map to
a small set of statuses: 422 for content problems, 404 for unknown ids, 409
for stage-order violations.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import ENGINE_VERSION
from .config import RunConfig
from .errors import (
    AuditError,
    DuplicateIdError,
    GoldLabelError,
    PayloadError,
    StageOrderError,
    StaleStageError,
    UnknownManuscriptError,
    UnknownReferenceError,
)
from .pipeline import Engine
from .report import to_html, to_json
from .store import STAGES

_STATUS_BY_TYPE = (
    ((UnknownManuscriptError, UnknownReferenceError), 404),
    ((StageOrderError, StaleStageError), 409),
    ((PayloadError, DuplicateIdError, GoldLabelError), 422),
)


def _status_for(exc: Exception) -> int:
    for types, status in _STATUS_BY_TYPE:
        if isinstance(exc, types):
            return status
    return 422 if isinstance(exc, ValueError) else 500


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except json.JSONDecodeError as exc:
        raise PayloadError("body", f"not valid JSON: {exc}") from None
    if not isinstance(body, dict):
        raise PayloadError("body", "expected a JSON object")
    return body


def _float_param(raw: str | None, name: str) -> float | None:
    if raw is None or raw == "":
        return None
    try:
        return float(raw)
    except ValueError:
        raise PayloadError(name, f"expected a number, got {raw!r}") from None


def _int_param(raw: str | None, name: str, default: int) -> int:
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise PayloadError(name, f"expected an integer, got {raw!r}") from None


def create_app(config: RunConfig | None = None, engine: Engine | None = None) -> FastAPI:
    engine = engine or Engine(config or RunConfig())
    app = FastAPI(title="citeaudit", version=ENGINE_VERSION)
    app.state.engine = engine
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST", "PUT"],
        allow_headers=["*"],
    )

    @app.exception_handler(AuditError)
    async def _audit_error(request: Request, exc: AuditError):
        return JSONResponse(
            status_code=_status_for(exc),
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return JSONResponse(
            status_code=422,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.get("/health")
    async def health():
        return {"status": "ok", "engine_version": ENGINE_VERSION, "stub_mode": engine.config.stub_mode}

    @app.get("/documents")
    async def list_documents():
        ids = engine.store.list_documents()
        return {"documents": [engine.status(manuscript_id) for manuscript_id in ids]}

    @app.post("/documents", status_code=201)
    async def ingest(request: Request):
        payload = await _json_body(request)
        manuscript_id = engine.ingest(payload)
        return {"manuscript_id": manuscript_id}

    @app.get("/documents/{manuscript_id}/status")
    async def status(manuscript_id: str):
        return engine.status(manuscript_id)

    @app.post("/documents/{manuscript_id}/process")
    async def process(manuscript_id: str, request: Request):
        raw = request.query_params.get("stages")
        stages = None
        if raw:
            stages = [part.strip() for part in raw.split(",") if part.strip()]
            unknown = [s for s in stages if s not in STAGES]
            if unknown:
                raise PayloadError("stages", f"unknown stages: {', '.join(unknown)}")
        return {"manuscript_id": manuscript_id, "stages": engine.process(manuscript_id, stages)}

    @app.get("/documents/{manuscript_id}/report")
    async def report(manuscript_id: str, request: Request):
        tau = _float_param(request.query_params.get("tau"), "tau")
        rendered = engine.report(manuscript_id, tau)
        if request.query_params.get("format") == "html":
            return Response(content=to_html(rendered), media_type="text/html")
        return Response(content=to_json(rendered), media_type="application/json")

    @app.get("/documents/{manuscript_id}/citations")
    async def citations(manuscript_id: str, request: Request):
        params = request.query_params
        return engine.citations(
            manuscript_id,
            tau=_float_param(params.get("tau"), "tau"),
            offset=_int_param(params.get("offset"), "offset", 0),
            limit=_int_param(params.get("limit"), "limit", 500),
        )

    @app.get("/documents/{manuscript_id}/citations/{ref_id}")
    async def citation_detail(manuscript_id: str, ref_id: str):
        return engine.citation_detail(manuscript_id, ref_id)

    @app.put("/documents/{manuscript_id}/tau")
    async def set_tau(manuscript_id: str, request: Request):
        body = await _json_body(request)
        tau = body.get("tau")
        if isinstance(tau, bool) or not isinstance(tau, (int, float)):
            raise PayloadError("tau", "expected a number")
        return engine.set_tau(manuscript_id, float(tau))

    @app.post("/documents/{manuscript_id}/overrides", status_code=201)
    async def record_override(manuscript_id: str, request: Request):
        body = await _json_body(request)
        ref_id = body.get("reference_id")
        decision = body.get("decision")
        if not isinstance(ref_id, str) or not ref_id:
            raise PayloadError("reference_id", "expected a non-empty string")
        if not isinstance(decision, str) or not decision:
            raise PayloadError("decision", "expected a non-empty string")
        note = body.get("note", "")
        if not isinstance(note, str):
            raise PayloadError("note", "expected a string")
        return engine.record_override(manuscript_id, ref_id, decision, note)

    @app.get("/documents/{manuscript_id}/overrides")
    async def list_overrides(manuscript_id: str):
        engine.store.get_document(manuscript_id)
        return {"overrides": engine.store.get_overrides(manuscript_id)}

    @app.post("/documents/{manuscript_id}/evaluation")
    async def evaluate(manuscript_id: str, request: Request):
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("application/json"):
            body = await _json_body(request)
            gold_text = body.get("gold_csv")
            if not isinstance(gold_text, str):
                raise PayloadError("gold_csv", "expected the gold CSV as a string")
        else:
            gold_text = (await request.body()).decode("utf-8")
        tau = _float_param(request.query_params.get("tau"), "tau")
        return engine.evaluate(manuscript_id, gold_text, tau).as_dict()

    @app.get("/documents/{manuscript_id}/evaluation/sweep")
    async def sweep(manuscript_id: str, request: Request):
        raw = request.query_params.get("taus")
        if not raw:
            raise PayloadError("taus", "expected comma-separated thresholds")
        try:
            taus = [float(part) for part in raw.split(",") if part.strip()]
        except ValueError:
            raise PayloadError("taus", f"expected numbers, got {raw!r}") from None
        if not taus:
            raise PayloadError("taus", "expected at least one threshold")
        return {"rows": [r.as_dict() for r in engine.sweep(manuscript_id, taus)]}

    @app.get("/documents/{manuscript_id}/diagnostics")
    async def diagnostics(manuscript_id: str, request: Request):
        params = request.query_params
        window = params.get("window_years")
        ref_year = params.get("reference_year")
        return engine.diagnostics(
            manuscript_id,
            window_years=_int_param(window, "window_years", 0) or None,
            reference_year=_int_param(ref_year, "reference_year", 0) or None,
        )

    return app
