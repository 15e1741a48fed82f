"""HTTP API over the engine with file-backed persistence.

The service adds no semantics: derivation, relevance, what-if, controls,
reports, and portfolio endpoints return the canonical bytes the in-process
engine produces for the same payloads. Validation failures surface the
module-level error codes in a structured body::

    {"error": {"code": "...", "message": "...", "items": [...]}}

Writes require the ``X-Expected-Revision`` header (0 to create); a stale
value returns 409 with code ``conflict``. No authentication: deploy behind
organizational access control.
"""
from __future__ import annotations

import json
import uuid
from pathlib import Path

from fastapi import FastAPI, Request, Response

from . import assessment as engine
from .errors import (
    CONFLICT,
    CORRUPT_ENTITY,
    FINALIZED_IMMUTABLE,
    NOT_FOUND,
    SCHEMA,
    STORAGE_IO,
    AgentRiskError,
    EngineError,
    NotFoundError,
)
from .regdiff import diff_registers, diff_to_doc
from .register import (
    CapabilityProfile,
    RiskRegister,
    canonical_json,
    parse_register,
    profile_from_doc,
    register_to_doc,
    validate_register,
    _Issues,
)
from .reporting import build_portfolio, render_report
from .store import KINDS, FileStore, StoredEntity
from .taxonomy import catalog_to_doc

REVISION_HEADER = "X-Expected-Revision"

_STATUS_BY_CODE = {
    NOT_FOUND: 404,
    CONFLICT: 409,
    FINALIZED_IMMUTABLE: 409,
    CORRUPT_ENTITY: 500,
    STORAGE_IO: 500,
}

_KIND_BY_PLURAL = {f"{kind}s": kind for kind in KINDS}


def _canonical_response(doc: dict, status_code: int = 200) -> Response:
    return Response(
        content=canonical_json(doc).encode("utf-8"),
        status_code=status_code,
        media_type="application/json",
    )


def _entity_doc(entity: StoredEntity) -> dict:
    return {
        "kind": entity.kind,
        "id": entity.id,
        "revision": entity.revision,
        "created_at": entity.created_at,
        "updated_at": entity.updated_at,
        "payload": entity.payload,
    }


async def _json_body(request: Request) -> dict:
    raw = await request.body()
    try:
        doc = json.loads(raw) if raw else {}
    except json.JSONDecodeError as exc:
        raise EngineError(SCHEMA, f"request body is not valid JSON: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise EngineError(SCHEMA, "request body must be a JSON object")
    return doc


def _expected_revision(request: Request) -> int:
    value = request.headers.get(REVISION_HEADER)
    if value is None:
        raise EngineError(SCHEMA, f"missing {REVISION_HEADER} header (0 to create)")
    try:
        return int(value)
    except ValueError:
        raise EngineError(SCHEMA, f"{REVISION_HEADER} must be an integer") from None


def _kind(plural: str) -> str:
    kind = _KIND_BY_PLURAL.get(plural)
    if kind is None:
        raise NotFoundError(f"unknown collection {plural!r}")
    return kind


class _Api:
    """Request-level glue between the store and the pure engine."""

    def __init__(self, data_dir: str | Path):
        self.store = FileStore(data_dir)

    # -- entity resolution -------------------------------------------

    def register_value(self, entity: StoredEntity) -> RiskRegister:
        return parse_register(canonical_json(entity.payload))

    def profile_value(self, payload: dict) -> CapabilityProfile:
        issues = _Issues()
        profile = profile_from_doc(payload, issues)
        if issues:
            raise EngineError(SCHEMA, "invalid profile", tuple(issues.items))
        return profile

    def assessment_value(self, entity: StoredEntity) -> engine.Assessment:
        return engine.assessment_from_doc(entity.payload)

    def register_for(self, assessment: engine.Assessment) -> RiskRegister:
        name, version = assessment.register_ref
        for entity in self.store.list("register"):
            if (
                entity.payload.get("name") == name
                and entity.payload.get("version") == version
            ):
                return self.register_value(entity)
        raise NotFoundError(f"no stored register named {name!r} version {version!r}")

    def resolve_profile(self, body: dict) -> CapabilityProfile:
        if "profile" in body:
            if not isinstance(body["profile"], dict):
                raise EngineError(SCHEMA, "profile must be an object")
            return self.profile_value(body["profile"])
        if "profile_id" in body:
            entity = self.store.get("profile", str(body["profile_id"]))
            return self.profile_value(entity.payload)
        raise EngineError(SCHEMA, "body needs 'profile' or 'profile_id'")

    def resolve_register(self, body: dict) -> RiskRegister:
        if "register_id" not in body:
            raise EngineError(SCHEMA, "body needs 'register_id'")
        return self.register_value(self.store.get("register", str(body["register_id"])))

    def load_assessment(self, assessment_id: str) -> tuple[StoredEntity, engine.Assessment]:
        entity = self.store.get("assessment", assessment_id)
        return entity, self.assessment_value(entity)

    def save_assessment(
        self, entity: StoredEntity, value: engine.Assessment, expected_revision: int
    ) -> StoredEntity:
        return self.store.put(
            "assessment", entity.id, engine.assessment_to_doc(value), expected_revision
        )

    def threshold_from(self, body: dict) -> engine.RelevanceThreshold:
        threshold = body.get("threshold", body)
        if not isinstance(threshold, dict):
            raise EngineError(SCHEMA, "threshold must be an object")
        return engine.RelevanceThreshold(
            threshold.get("impact_min"), threshold.get("likelihood_min")
        )


def create_app(
    data_dir: str | Path,
    preload_register: str | Path | None = None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    api = _Api(data_dir)
    app = FastAPI(title="agentrisk", docs_url=None, redoc_url=None)

    if preload_register is not None:
        path = Path(preload_register)
        register = parse_register(path.read_text(encoding="utf-8"))
        entity_id = path.stem
        if not api.store.exists("register", entity_id):
            api.store.put("register", entity_id, register_to_doc(register), None)

    @app.exception_handler(AgentRiskError)
    async def _handle_error(_request, exc: AgentRiskError):
        return _canonical_response(exc.to_doc(), _STATUS_BY_CODE.get(exc.code, 422))

    @app.get("/api/catalog")
    async def get_catalog():
        return _canonical_response(catalog_to_doc())

    @app.get("/api/portfolio")
    async def portfolio(register: str):
        reg = api.register_value(api.store.get("register", register))
        assessments = []
        for entity in api.store.list("assessment"):
            value = api.assessment_value(entity)
            if value.register_ref == reg.ref:
                assessments.append(value)
        summary = build_portfolio(assessments, reg)
        return _canonical_response(summary.doc)

    @app.get("/api/{plural}")
    async def list_entities(plural: str):
        kind = _kind(plural)
        items = [
            {"id": e.id, "revision": e.revision, "updated_at": e.updated_at}
            for e in api.store.list(kind)
        ]
        return _canonical_response({"items": items})

    @app.get("/api/{plural}/{entity_id}")
    async def get_entity(plural: str, entity_id: str):
        entity = api.store.get(_kind(plural), entity_id)
        return _canonical_response(
            _entity_doc(entity), status_code=200
        )

    @app.put("/api/{plural}/{entity_id}")
    async def put_entity(plural: str, entity_id: str, request: Request):
        kind = _kind(plural)
        expected = _expected_revision(request)
        body = await _json_body(request)
        if kind == "register":
            report = validate_register(parse_register(canonical_json(body)))
            if not report.ok:
                raise EngineError(SCHEMA, "register is invalid", report.errors)
        if kind == "assessment":
            current = None
            if api.store.exists(kind, entity_id):
                current = api.assessment_value(api.store.get(kind, entity_id))
            if current is not None and current.status is engine.AssessmentStatus.FINALIZED:
                raise EngineError(
                    FINALIZED_IMMUTABLE, f"assessment {entity_id!r} is finalized"
                )
        created = not api.store.exists(kind, entity_id)
        entity = api.store.put(kind, entity_id, body, expected)
        return _canonical_response(
            {"id": entity.id, "revision": entity.revision}, 201 if created else 200
        )

    @app.delete("/api/{plural}/{entity_id}")
    async def delete_entity(plural: str, entity_id: str, request: Request):
        kind = _kind(plural)
        expected = _expected_revision(request)
        api.store.delete(kind, entity_id, expected)
        return Response(status_code=204)

    @app.get("/api/registers/{entity_id}/diff/{other_id}")
    async def get_diff(entity_id: str, other_id: str):
        old = api.register_value(api.store.get("register", entity_id))
        new = api.register_value(api.store.get("register", other_id))
        return _canonical_response(diff_to_doc(diff_registers(old, new)))

    @app.post("/api/derive")
    async def derive(request: Request):
        body = await _json_body(request)
        register = api.resolve_register(body)
        profile = api.resolve_profile(body)
        risk_ids = engine.derive_applicable_risks(profile, register)
        return _canonical_response({"risk_ids": risk_ids})

    @app.post("/api/assessments")
    async def create_assessment(request: Request):
        body = await _json_body(request)
        register = api.resolve_register(body)
        profile = api.resolve_profile(body)
        threshold = api.threshold_from(
            body if "threshold" in body else {"threshold": {}}
        )
        assessment_id = str(body.get("id") or f"a-{uuid.uuid4().hex[:12]}")
        value = engine.new_assessment(assessment_id, profile, register, threshold)
        entity = api.store.put(
            "assessment", assessment_id, engine.assessment_to_doc(value), 0
        )
        return _canonical_response(_entity_doc(entity), 201)

    def _mutate(request: Request, assessment_id: str, fn) -> Response:
        expected = _expected_revision(request)
        entity, value = api.load_assessment(assessment_id)
        updated = fn(value)
        saved = api.save_assessment(entity, updated, expected)
        return _canonical_response({"id": saved.id, "revision": saved.revision})

    @app.post("/api/assessments/{assessment_id}/rate")
    async def rate(assessment_id: str, request: Request):
        body = await _json_body(request)
        rating = engine.RiskRating(
            risk_id=str(body.get("risk_id", "")),
            impact=body.get("impact"),
            likelihood=body.get("likelihood"),
            rationale=str(body.get("rationale", "")),
        )
        return _mutate(request, assessment_id, lambda a: engine.rate_risk(a, rating))

    @app.post("/api/assessments/{assessment_id}/threshold")
    async def put_threshold(assessment_id: str, request: Request):
        body = await _json_body(request)
        threshold = api.threshold_from(body)
        return _mutate(
            request, assessment_id, lambda a: engine.set_threshold(a, threshold)
        )

    @app.post("/api/assessments/{assessment_id}/evaluate")
    async def evaluate(assessment_id: str):
        _, value = api.load_assessment(assessment_id)
        relevance = engine.evaluate_relevance(value)
        return _canonical_response(
            {"relevance": [{"risk_id": rid, "relevant": rel} for rid, rel in relevance]}
        )

    @app.post("/api/assessments/{assessment_id}/whatif")
    async def whatif(assessment_id: str, request: Request):
        body = await _json_body(request)
        candidate = api.threshold_from(body)
        _, value = api.load_assessment(assessment_id)
        register = api.register_for(value)
        delta = engine.what_if(value, register, candidate)
        return _canonical_response(engine.whatif_to_doc(delta))

    @app.get("/api/assessments/{assessment_id}/controls")
    async def controls(assessment_id: str):
        _, value = api.load_assessment(assessment_id)
        register = api.register_for(value)
        resolutions = engine.resolve_controls(value, register)
        return _canonical_response(
            {"controls": [engine.resolution_to_doc(r) for r in resolutions]}
        )

    @app.post("/api/assessments/{assessment_id}/dispose")
    async def dispose(assessment_id: str, request: Request):
        body = await _json_body(request)
        try:
            disposition = engine.Disposition(body.get("disposition"))
        except ValueError:
            raise EngineError(SCHEMA, "disposition must be adopted, adapted, or not_applicable")
        expected = _expected_revision(request)
        entity, value = api.load_assessment(assessment_id)
        register = api.register_for(value)
        updated = engine.set_disposition(
            value,
            str(body.get("control_id", "")),
            disposition,
            str(body.get("justification", "")),
            register=register,
        )
        saved = api.save_assessment(entity, updated, expected)
        return _canonical_response({"id": saved.id, "revision": saved.revision})

    @app.post("/api/assessments/{assessment_id}/notes")
    async def add_note(assessment_id: str, request: Request):
        body = await _json_body(request)
        follow_up_of = body.get("follow_up_of")
        return _mutate(
            request,
            assessment_id,
            lambda a: engine.record_residual_note(
                a,
                str(body.get("text", "")),
                bool(body.get("accepted", False)),
                str(body.get("approver", "")),
                follow_up_of,
            ),
        )

    @app.post("/api/assessments/{assessment_id}/notes/{index}/accept")
    async def accept_note(assessment_id: str, index: int, request: Request):
        body = await _json_body(request)
        return _mutate(
            request,
            assessment_id,
            lambda a: engine.accept_residual_note(a, index, str(body.get("approver", ""))),
        )

    @app.post("/api/assessments/{assessment_id}/finalize")
    async def finalize(assessment_id: str, request: Request):
        expected = _expected_revision(request)
        entity, value = api.load_assessment(assessment_id)
        register = api.register_for(value)
        updated = engine.finalize(value, register)
        saved = api.save_assessment(entity, updated, expected)
        return _canonical_response({"id": saved.id, "revision": saved.revision})

    @app.get("/api/assessments/{assessment_id}/report")
    async def report(assessment_id: str, format: str = "structured"):
        _, value = api.load_assessment(assessment_id)
        register = api.register_for(value)
        rendered = render_report(value, register, format)
        media = "application/json" if format == "structured" else "text/plain"
        return Response(content=rendered.encode("utf-8"), media_type=media)

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="static")

    return app
