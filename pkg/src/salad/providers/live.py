"""Live adapters for hosted chat-completion endpoints.

Each capability has a versioned prompt template under ``data/prompts/``; the
model must answer with a single JSON object matching the documented shape,
anything else is rejected. Requests retry up to 3 times with exponential
backoff. Endpoint URL and API key come from the environment, never from
files on disk.
"""

from __future__ import annotations

import json
import os
import time
from importlib import resources

import httpx

from .. import jptext
from .base import GrammarNote, TranslationTriple, UnknownWord, UntranslatableInput

MAX_RETRIES = 3
BACKOFF_BASE_SECONDS = 0.5


class LiveEndpoint:
    """Shared chat-completion transport for the live adapters."""

    def __init__(self, url: str, api_key_env: str, model: str = "default", timeout: float = 30.0):
        self.url = url
        self.model = model
        self.timeout = timeout
        self.api_key = os.environ.get(api_key_env, "")
        if not self.api_key:
            raise ValueError(f"live provider requires API key in ${api_key_env}")

    def complete(self, prompt: str) -> str:
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": 0,
        }
        last_error: Exception | None = None
        for attempt in range(MAX_RETRIES):
            try:
                response = httpx.post(
                    self.url,
                    json=payload,
                    headers={"Authorization": f"Bearer {self.api_key}"},
                    timeout=self.timeout,
                )
                response.raise_for_status()
                return response.json()["choices"][0]["message"]["content"]
            except (httpx.HTTPError, KeyError, ValueError) as exc:
                last_error = exc
                if attempt < MAX_RETRIES - 1:
                    time.sleep(BACKOFF_BASE_SECONDS * 2**attempt)
        raise UntranslatableInput(f"live endpoint failed after {MAX_RETRIES} attempts: {last_error}")


def _load_prompt(name: str) -> str:
    return resources.files("salad.data.prompts").joinpath(f"{name}.txt").read_text("utf-8")


def _parse_json_object(raw: str) -> dict:
    try:
        parsed = json.loads(raw.strip())
    except json.JSONDecodeError as exc:
        raise UntranslatableInput(f"malformed provider response: {exc}")
    if not isinstance(parsed, dict):
        raise UntranslatableInput("provider response is not a JSON object")
    return parsed


class LiveTranslator:
    def __init__(self, endpoint: LiveEndpoint):
        self.endpoint = endpoint
        self.template = _load_prompt("translate")

    def translate(self, source_en: str) -> TranslationTriple:
        if not source_en or not source_en.strip():
            raise UntranslatableInput("empty input")
        raw = self.endpoint.complete(self.template.format(text=source_en))
        data = _parse_json_object(raw)
        for key in ("kanji", "kana", "segmentation"):
            if key not in data:
                raise UntranslatableInput(f"provider response missing {key!r}")
        if not isinstance(data["segmentation"], list) or not all(
            isinstance(p, list) and len(p) == 2 for p in data["segmentation"]
        ):
            raise UntranslatableInput("malformed segmentation in provider response")
        kana = data["kana"]
        jptext.validate_kana(kana)
        romaji = data.get("romaji") or jptext.kana_to_romaji(kana)
        return TranslationTriple(
            source_en=source_en,
            kanji=data["kanji"],
            kana=kana,
            romaji=romaji,
            segmentation=tuple((s, r) for s, r in data["segmentation"]),
        )


class LiveGrammarian:
    def __init__(self, endpoint: LiveEndpoint):
        self.endpoint = endpoint
        self.template = _load_prompt("grammar")

    def explain(self, triple: TranslationTriple) -> list[GrammarNote]:
        raw = self.endpoint.complete(self.template.format(kanji=triple.kanji, english=triple.source_en))
        data = _parse_json_object(raw)
        notes = data.get("notes")
        if not isinstance(notes, list):
            raise UntranslatableInput("provider response missing 'notes' list")
        out = []
        for note in notes:
            if not isinstance(note, dict) or not note.get("pattern") or not note.get("explanation"):
                raise UntranslatableInput("malformed grammar note in provider response")
            out.append(GrammarNote(pattern=note["pattern"], explanation=note["explanation"]))
        return out


class LiveLexicon:
    def __init__(self, endpoint: LiveEndpoint):
        self.endpoint = endpoint
        self.template = _load_prompt("define")

    def get_meaning(self, surface: str) -> str:
        if not surface:
            raise UnknownWord(surface)
        raw = self.endpoint.complete(self.template.format(word=surface))
        data = _parse_json_object(raw)
        meaning = data.get("meaning")
        if not isinstance(meaning, str) or not meaning.strip():
            raise UnknownWord(surface)
        return meaning.strip()
