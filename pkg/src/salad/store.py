"""Durable persistence: vocabulary database, session log, audio artifacts.

Layout under one data directory:

    vocab.json       canonical JSON snapshot of the vocabulary database
    sessions.ndjson  one session record per line, append-only
    audio/<sha256>.wav   content-addressed clips

Saves go through write-temp-then-rename so a crash mid-save leaves the
previous snapshot intact. Serialization is canonical (sorted keys, fixed
field order), so equal databases produce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

from .vocab import SessionRecord, VocabDatabase, VocabEntry

SCHEMA_VERSION = 1


class CorruptStore(Exception):
    pass


class NotFound(Exception):
    def __init__(self, audio_id: str):
        self.audio_id = audio_id
        super().__init__(f"no audio artifact {audio_id}")


def _ts(value: datetime) -> str:
    return value.isoformat().replace("+00:00", "Z")


def _parse_ts(value: str) -> datetime:
    return datetime.fromisoformat(value.replace("Z", "+00:00"))


def serialize_db(db: VocabDatabase) -> bytes:
    """Canonical on-disk form; a pure function of the database value."""
    doc = {
        "schema_version": db.schema_version,
        "entries": {
            surface: {
                "reading": e.reading,
                "meaning": e.meaning,
                "progress": e.progress,
                "first_seen": _ts(e.first_seen),
                "last_seen": _ts(e.last_seen),
                "exposure_count": e.exposure_count,
            }
            for surface, e in db.entries.items()
        },
    }
    return (json.dumps(doc, ensure_ascii=False, sort_keys=True, separators=(",", ":")) + "\n").encode("utf-8")


def deserialize_db(data: bytes) -> VocabDatabase:
    try:
        doc = json.loads(data.decode("utf-8"))
        if not isinstance(doc, dict):
            raise ValueError("top level is not an object")
        version = doc["schema_version"]
        if version != SCHEMA_VERSION:
            raise ValueError(f"unknown schema_version {version}")
        entries = {}
        for surface, raw in doc["entries"].items():
            entries[surface] = VocabEntry(
                surface=surface,
                reading=raw["reading"],
                meaning=raw["meaning"],
                progress=raw["progress"],
                first_seen=_parse_ts(raw["first_seen"]),
                last_seen=_parse_ts(raw["last_seen"]),
                exposure_count=raw["exposure_count"],
            )
        db = VocabDatabase(entries=entries, schema_version=version)
        db.validate()
        return db
    except CorruptStore:
        raise
    except Exception as exc:
        raise CorruptStore(f"vocab database unreadable: {exc}") from exc


def _session_doc(record: SessionRecord) -> dict:
    return {
        "session_id": record.session_id,
        "started_at": _ts(record.started_at),
        "inputs_processed": record.inputs_processed,
        "words_introduced": list(record.words_introduced),
        "words_advanced": list(record.words_advanced),
        "words_completed": list(record.words_completed),
    }


def _session_from_doc(doc: dict) -> SessionRecord:
    return SessionRecord(
        session_id=doc["session_id"],
        started_at=_parse_ts(doc["started_at"]),
        inputs_processed=doc["inputs_processed"],
        words_introduced=list(doc["words_introduced"]),
        words_advanced=list(doc["words_advanced"]),
        words_completed=list(doc["words_completed"]),
    )


@dataclass
class StoreRoot:
    data_dir: Path

    @property
    def vocab_path(self) -> Path:
        return self.data_dir / "vocab.json"

    @property
    def sessions_path(self) -> Path:
        return self.data_dir / "sessions.ndjson"

    @property
    def audio_dir(self) -> Path:
        return self.data_dir / "audio"


class Store:
    """Single-writer store handle; all mutations serialize on one lock."""

    def __init__(self, data_dir: str | Path):
        self.root = StoreRoot(data_dir=Path(data_dir))
        self.root.data_dir.mkdir(parents=True, exist_ok=True)
        self.root.audio_dir.mkdir(parents=True, exist_ok=True)
        self._write_lock = threading.Lock()

    def load_db(self) -> VocabDatabase:
        path = self.root.vocab_path
        if not path.exists():
            return VocabDatabase(entries={}, schema_version=SCHEMA_VERSION)
        return deserialize_db(path.read_bytes())

    def save_db(self, db: VocabDatabase) -> None:
        db.validate()  # never write an invalid snapshot
        data = serialize_db(db)
        with self._write_lock:
            self._atomic_write(self.root.vocab_path, data)

    def append_session(self, record: SessionRecord) -> None:
        line = json.dumps(_session_doc(record), ensure_ascii=False, sort_keys=True) + "\n"
        with self._write_lock:
            with open(self.root.sessions_path, "a", encoding="utf-8") as f:
                f.write(line)
                f.flush()
                os.fsync(f.fileno())

    def read_sessions(self) -> list[SessionRecord]:
        path = self.root.sessions_path
        if not path.exists():
            return []
        records = []
        for line in path.read_text("utf-8").splitlines():
            if not line.strip():
                continue
            try:
                records.append(_session_from_doc(json.loads(line)))
            except Exception as exc:
                raise CorruptStore(f"session log unreadable: {exc}") from exc
        return records

    def put_audio(self, wav_bytes: bytes) -> str:
        audio_id = hashlib.sha256(wav_bytes).hexdigest()
        path = self.root.audio_dir / f"{audio_id}.wav"
        if not path.exists():
            self._atomic_write(path, wav_bytes)
        return audio_id

    def get_audio(self, audio_id: str) -> bytes:
        if not audio_id or any(c not in "0123456789abcdef" for c in audio_id):
            raise NotFound(audio_id)
        path = self.root.audio_dir / f"{audio_id}.wav"
        if not path.exists():
            raise NotFound(audio_id)
        return path.read_bytes()

    @staticmethod
    def _atomic_write(path: Path, data: bytes) -> None:
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as f:
                f.write(data)
                f.flush()
                os.fsync(f.fileno())
            os.replace(tmp, path)
        except Exception:
            Path(tmp).unlink(missing_ok=True)
            raise
