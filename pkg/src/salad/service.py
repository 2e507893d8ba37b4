"""HTTP surface of the learner service.

All endpoints speak JSON except the audio artifact download. Error responses
share one body shape: ``{"code", "stage", "message"}``, where stage names the
pipeline stage for wrapped failures. Request failures never mutate the store.
"""

from __future__ import annotations

import threading
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request, Response
from starlette.datastructures import UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import songcraft, store as store_mod
from .audio import MalformedWav, decode_wav
from .config import ServiceConfig, build_provider_set
from .pipeline import (
    LearnerInput,
    PipelineError,
    TranscriptionFailed,
    TranslationFailed,
    process_input,
)
from .providers.base import ProviderError, ProviderSet
from .vocab import SessionRecord, apply_to_session, display_lines, format_progress_line

DEFAULT_SESSION_ID = "default"
MAX_AUDIO_UPLOAD_BYTES = 2 * 1024 * 1024
MAX_AUDIO_UPLOAD_SECONDS = 30.0


def _error_body(code: str, stage: str, message: str) -> dict:
    return {"code": code, "stage": stage, "message": message}


def _error_response(status: int, code: str, stage: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content=_error_body(code, stage, message))


def _pipeline_error_response(exc: PipelineError) -> JSONResponse:
    cause = exc.cause
    code = getattr(cause, "code", None) or type(cause).__name__
    if isinstance(cause, store_mod.CorruptStore):
        status = 500
    elif isinstance(exc, (TranslationFailed, TranscriptionFailed)):
        status = 422
    else:
        status = 500
    # live upstream failures surface as a bad gateway
    if "live endpoint failed" in str(cause):
        status = 502
    return _error_response(status, code, exc.stage, str(cause))


class ServiceState:
    def __init__(self, config: ServiceConfig, providers: ProviderSet | None = None):
        self.config = config
        self.providers = providers or build_provider_set(config)
        self.store = store_mod.Store(config.data_dir)
        self.templates = songcraft.load_templates(config.template_dir)
        self.commit_lock = threading.Lock()
        self.request_slots = threading.BoundedSemaphore(config.max_concurrent_requests)
        self.sessions: dict[str, SessionRecord] = {}
        for record in self.store.read_sessions():
            self.sessions[record.session_id] = record  # last line per id wins

    def session_for(self, session_id: str | None) -> SessionRecord:
        sid = session_id or DEFAULT_SESSION_ID
        if sid not in self.sessions:
            self.sessions[sid] = SessionRecord(session_id=sid, started_at=datetime.now(timezone.utc))
        return self.sessions[sid]


def _result_payload(result, received_at: datetime) -> dict:
    payload = result.canonical()
    payload["elapsed_ms"] = result.elapsed_ms
    payload["received_at"] = received_at.isoformat().replace("+00:00", "Z")
    return payload


def create_app(
    config: ServiceConfig | None = None,
    providers: ProviderSet | None = None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    config = config or ServiceConfig()
    state = ServiceState(config, providers=providers)
    app = FastAPI(title="salad", docs_url=None, redoc_url=None)
    app.state.service = state

    app.add_middleware(
        CORSMiddleware,
        allow_origins=[config.cors_origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.middleware("http")
    async def cap_concurrency(request: Request, call_next):
        with state.request_slots:
            return await call_next(request)

    @app.post("/api/process")
    async def process(request: Request):
        received_at = datetime.now(timezone.utc)
        content_type = request.headers.get("content-type", "")
        session_id: str | None = None
        try:
            if content_type.startswith("multipart/"):
                form = await request.form()
                session_id = form.get("session_id") or None
                upload = form.get("audio")
                if not isinstance(upload, UploadFile):
                    return _error_response(422, "MissingAudio", "Input", "multipart body needs an 'audio' WAV file")
                wav_bytes = await upload.read()
                if len(wav_bytes) > MAX_AUDIO_UPLOAD_BYTES:
                    return _error_response(422, "AudioTooLarge", "Input", "audio upload exceeds 2 MB")
                clip = decode_wav(wav_bytes)
                if clip.duration > MAX_AUDIO_UPLOAD_SECONDS:
                    return _error_response(422, "AudioTooLong", "Input", "audio upload exceeds 30 s")
                learner_input = LearnerInput(kind="audio", session_id=session_id or DEFAULT_SESSION_ID, audio=clip)
            else:
                body = await request.json()
                session_id = body.get("session_id") or None
                text = body.get("text")
                if not isinstance(text, str) or not text.strip():
                    return _error_response(422, "MissingText", "Input", "body needs a non-empty 'text'")
                learner_input = LearnerInput(kind="text", session_id=session_id or DEFAULT_SESSION_ID, text=text)
        except MalformedWav as exc:
            return _error_response(422, "MalformedWav", "Input", str(exc))
        except ValueError:
            return _error_response(422, "MalformedBody", "Input", "request body is not valid JSON")

        with state.commit_lock:
            db = state.store.load_db()
            try:
                new_db, result = process_input(learner_input, db, state.providers, store=state.store)
            except PipelineError as exc:
                return _pipeline_error_response(exc)
            state.store.save_db(new_db)
            session = apply_to_session(state.session_for(session_id), result.vocab_report)
            state.sessions[session.session_id] = session
            state.store.append_session(session)
        return _result_payload(result, received_at)

    @app.get("/api/vocabulary")
    def vocabulary():
        db = state.store.load_db()
        ordered = sorted(db.entries.values(), key=lambda e: (e.progress, e.surface))
        return {
            "entries": [
                {
                    "surface": e.surface,
                    "reading": e.reading,
                    "meaning": e.meaning,
                    "progress": e.progress,
                    "exposure_count": e.exposure_count,
                    "display": format_progress_line(e),
                }
                for e in ordered
            ],
            "display_lines": display_lines(db),
            "counts": {"learning": db.learning_count(), "learned": db.learned_count()},
        }

    @app.post("/api/song")
    async def song(request: Request):
        try:
            body = await request.json()
        except ValueError:
            return _error_response(422, "MalformedBody", "Input", "request body is not valid JSON")
        template_id = body.get("template_id")
        template = state.templates.get(template_id)
        if template is None:
            return _error_response(404, "UnknownTemplate", "Song", f"no template {template_id!r}")
        with state.commit_lock:
            db = state.store.load_db()
            try:
                rendered = songcraft.generate_song(db, template, state.providers, state.store)
            except songcraft.EmptyVocabulary as exc:
                return _error_response(409, "EmptyVocabulary", "Song", str(exc))
            except songcraft.NoFittingWords as exc:
                return _error_response(409, "NoFittingWords", "Song", str(exc))
            except ProviderError as exc:
                return _error_response(502, getattr(exc, "code", "ProviderError"), "Song", str(exc))
        return {
            "song_id": rendered.song_id,
            "duration_seconds": rendered.duration,
            "slot_words": list(rendered.slot_words),
            "lyric": rendered.score.lyric_text,
            "used_learned_fallback": rendered.score.used_learned_fallback,
        }

    @app.get("/api/audio/{audio_id}")
    def audio(audio_id: str):
        try:
            wav_bytes = state.store.get_audio(audio_id)
        except store_mod.NotFound:
            return _error_response(404, "NotFound", "Audio", f"no audio artifact {audio_id}")
        return Response(content=wav_bytes, media_type="audio/wav")

    @app.get("/api/session/{session_id}")
    def session(session_id: str):
        record = state.sessions.get(session_id)
        if record is None:
            return _error_response(404, "NotFound", "Session", f"no session {session_id!r}")
        return {
            "session_id": record.session_id,
            "started_at": record.started_at.isoformat().replace("+00:00", "Z"),
            "inputs_processed": record.inputs_processed,
            "words_introduced": record.words_introduced,
            "words_advanced": record.words_advanced,
            "words_completed": record.words_completed,
        }

    @app.get("/api/templates")
    def templates():
        return {
            "templates": [
                {
                    "template_id": t.template_id,
                    "slot_count": t.slot_count,
                    "note_count": len(t.melody),
                    "slot_mora_budget": len(t.melody) - t.fixed_mora_count,
                }
                for t in sorted(state.templates.values(), key=lambda t: t.template_id)
            ]
        }

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "providers": state.providers.binding_summary()}

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app
