"""Capability port contracts and the types they exchange.

Six ports: translator, grammarian, recognizer, speech synth, singing synth
and lexicon. Each has a deterministic offline mock and an optional live
adapter; the rest of the system only ever sees these interfaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

from ..audio import AudioClip


class ProviderError(Exception):
    code = "ProviderError"


class UntranslatableInput(ProviderError):
    code = "UntranslatableInput"


class UnrecognizableAudio(ProviderError):
    code = "UnrecognizableAudio"


class UnknownWord(ProviderError):
    code = "UnknownWord"

    def __init__(self, surface: str):
        self.surface = surface
        super().__init__(f"no meaning known for {surface!r}")


class EmptyScore(ProviderError):
    code = "EmptyScore"


@dataclass(frozen=True)
class TranslationTriple:
    source_en: str
    kanji: str
    kana: str
    romaji: str
    segmentation: tuple[tuple[str, str], ...]  # (surface, reading) pairs

    def surfaces(self) -> list[str]:
        return [s for s, _ in self.segmentation]

    def readings(self) -> dict[str, str]:
        return {s: r for s, r in self.segmentation}


@dataclass(frozen=True)
class GrammarNote:
    pattern: str
    explanation: str


@runtime_checkable
class Translator(Protocol):
    def translate(self, source_en: str) -> TranslationTriple: ...


@runtime_checkable
class Grammarian(Protocol):
    def explain(self, triple: TranslationTriple) -> list[GrammarNote]: ...


@runtime_checkable
class Recognizer(Protocol):
    def transcribe(self, audio: AudioClip) -> str: ...


@runtime_checkable
class SpeechSynth(Protocol):
    def speak(self, kana: str) -> AudioClip: ...


@runtime_checkable
class SingingSynth(Protocol):
    def render(self, score) -> AudioClip: ...


@runtime_checkable
class Lexicon(Protocol):
    def get_meaning(self, surface: str) -> str: ...


@dataclass
class ProviderSet:
    translator: Translator
    grammarian: Grammarian
    recognizer: Recognizer
    speech_synth: SpeechSynth
    singing_synth: SingingSynth
    lexicon: Lexicon
    bindings: dict[str, str] = field(default_factory=dict)  # port name -> mock|live

    def binding_summary(self) -> dict[str, str]:
        ports = ["translator", "grammarian", "recognizer", "speech_synth", "singing_synth", "lexicon"]
        return {p: self.bindings.get(p, "mock") for p in ports}
