"""HTTP session API: abstract in, editable parts out, candidates on demand.

Endpoints:
    POST /api/sessions                  create a session from an abstract
    GET  /api/sessions/{id}             fetch the current session view
    PUT  /api/sessions/{id}/parts       replace the parts with user edits
    POST /api/sessions/{id}/candidates  arrange, gate, score, and rank

Errors are always ``{"error": ..., "detail": ...}`` with a 4xx/5xx status.
Models and the pattern bank are immutable shared state loaded at startup.
"""

from __future__ import annotations

import asyncio
import logging
from contextlib import asynccontextmanager
from pathlib import Path
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..arranger import (
    GenerationConfig,
    ModelBundle,
    TitlePartsUnavailable,
    extract_parts,
    shape_with_fallback,
)
from ..parts import TitlePart
from .schemas import (
    CandidateOut,
    CandidatesResponse,
    PartOut,
    PartsUpdateRequest,
    SessionCreateRequest,
    SessionView,
)
from .store import GENERATED, PARTS_READY, DEFAULT_TTL_SECONDS, Session, SessionStore

logger = logging.getLogger(__name__)

MAX_ABSTRACT_CHARS = 10_000


class ApiError(Exception):
    def __init__(self, status: int, error: str, detail: str = ""):
        super().__init__(error)
        self.status = status
        self.error = error
        self.detail = detail


def _view(session: Session) -> SessionView:
    return SessionView(
        session_id=session.id,
        state=session.state,  # type: ignore[arg-type]
        abstract=session.abstract,
        parts=[PartOut(text=p.text, span=p.source_span) for p in session.current_parts],
        candidates=None
        if session.candidates is None
        else [CandidateOut(text=c.text, score=c.score, grammar_ok=c.grammar_ok) for c in session.candidates],
        used_fallback=session.used_fallback,
        created_at=session.created_at,
    )


def create_app(
    bundle: ModelBundle,
    config: GenerationConfig = GenerationConfig(),
    *,
    session_ttl: float = DEFAULT_TTL_SECONDS,
    request_timeout: float = 60.0,
    snapshot_path: str | Path | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    store = SessionStore(ttl_seconds=session_ttl)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if snapshot_path and Path(snapshot_path).exists():
            try:
                n = store.restore(snapshot_path)
                logger.info("restored %d sessions from %s", n, snapshot_path)
            except (ValueError, KeyError, OSError) as exc:
                logger.warning("could not restore snapshot %s: %s", snapshot_path, exc)
        yield
        if snapshot_path:
            store.snapshot(snapshot_path)
            logger.info("snapshot written to %s", snapshot_path)

    app = FastAPI(title="titlegen", lifespan=lifespan)
    app.state.store = store
    app.state.bundle = bundle
    app.state.config = config

    @app.exception_handler(ApiError)
    async def api_error_handler(_: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.status, content={"error": exc.error, "detail": exc.detail}
        )

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=400, content={"error": "validation error", "detail": str(exc)}
        )

    def _get_session(session_id: str) -> Session:
        try:
            return store.get(session_id)
        except KeyError:
            raise ApiError(404, "unknown session", f"no session with id {session_id!r}") from None

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok", "sessions": len(store)}

    @app.post("/api/sessions", response_model=SessionView)
    def create_session(body: SessionCreateRequest) -> SessionView:
        abstract = body.abstract.strip()
        if not abstract:
            raise ApiError(400, "empty abstract", "provide a non-empty abstract")
        if len(abstract) > MAX_ABSTRACT_CHARS:
            raise ApiError(
                400,
                "abstract too long",
                f"{len(abstract)} characters exceeds the limit of {MAX_ABSTRACT_CHARS}",
            )
        try:
            parts = extract_parts(abstract, bundle, config)
        except TitlePartsUnavailable as exc:
            raise ApiError(422, "no title parts", exc.diagnostic) from None
        session = store.create(abstract, parts)
        return _view(session)

    @app.get("/api/sessions/{session_id}", response_model=SessionView)
    def get_session(session_id: str) -> SessionView:
        session = _get_session(session_id)
        with session.lock:
            return _view(session)

    @app.put("/api/sessions/{session_id}/parts", response_model=SessionView)
    def update_parts(session_id: str, body: PartsUpdateRequest) -> SessionView:
        session = _get_session(session_id)
        texts = [t.strip() for t in body.parts]
        if not texts:
            raise ApiError(400, "empty parts list", "provide at least one part")
        if any(not t for t in texts):
            raise ApiError(400, "empty part", "every part must be non-empty after trimming")
        if len(texts) > config.max_parts:
            raise ApiError(
                400, "too many parts", f"{len(texts)} parts exceeds the cap of {config.max_parts}"
            )
        with session.lock:
            session.current_parts = [TitlePart(text=t) for t in texts]
            session.candidates = None
            session.used_fallback = None
            session.n_examined = 0
            session.state = PARTS_READY
            return _view(session)

    def _generate(session: Session) -> CandidatesResponse:
        with session.lock:
            candidates, used_fallback, report = shape_with_fallback(
                session.current_parts, bundle, config
            )
            session.candidates = candidates
            session.used_fallback = used_fallback
            session.n_examined = report.n_examined
            session.state = GENERATED
            return CandidatesResponse(
                session_id=session.id,
                state=GENERATED,
                candidates=[
                    CandidateOut(text=c.text, score=c.score, grammar_ok=c.grammar_ok)
                    for c in candidates
                ],
                used_fallback=used_fallback,
                n_examined=report.n_examined,
            )

    @app.post("/api/sessions/{session_id}/candidates", response_model=CandidatesResponse)
    async def generate_candidates(session_id: str) -> CandidatesResponse:
        session = _get_session(session_id)
        loop = asyncio.get_running_loop()
        try:
            return await asyncio.wait_for(
                loop.run_in_executor(None, _generate, session), timeout=request_timeout
            )
        except asyncio.TimeoutError:
            raise ApiError(
                503, "generation timed out", f"exceeded {request_timeout:.0f}s"
            ) from None
        except ValueError as exc:
            raise ApiError(400, "generation failed", str(exc)) from None
        except RuntimeError as exc:
            raise ApiError(502, "parser failure", str(exc)) from None

    if ui_dir:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
