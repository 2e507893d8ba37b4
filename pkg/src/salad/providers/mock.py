"""Deterministic offline providers backed by the shipped fixture tables.

Every port here is a pure function of its input plus ``corpus.tsv``,
``lexicon.tsv`` and ``grammar_rules.tsv``; repeated calls are byte-identical,
so the whole pipeline is testable with no network at all.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources

from .. import jptext
from ..audio import SAMPLE_RATE, AudioClip, tone_sequence
from .base import (
    EmptyScore,
    GrammarNote,
    ProviderSet,
    TranslationTriple,
    UnknownWord,
    UnrecognizableAudio,
    UntranslatableInput,
)

MORA_SECONDS = 0.150
BASE_FREQ_HZ = 220.0
FREQ_STEP_HZ = 20.0


def _read_table(name: str) -> list[list[str]]:
    text = resources.files("salad.data").joinpath(name).read_text("utf-8")
    rows = []
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        rows.append(line.split("\t"))
    return rows


def _normalize_english(text: str) -> str:
    text = re.sub(r"\s+", " ", text.strip().lower())
    return text.rstrip(".!?")


@lru_cache(maxsize=1)
def _corpus() -> dict[str, TranslationTriple]:
    out = {}
    for english, kanji, kana, romaji, seg in _read_table("corpus.tsv"):
        pairs = tuple(tuple(tok.split(":", 1)) for tok in seg.split(" "))
        out[_normalize_english(english)] = TranslationTriple(
            source_en=english, kanji=kanji, kana=kana, romaji=romaji, segmentation=pairs
        )
    return out


@lru_cache(maxsize=1)
def _lexicon() -> dict[str, tuple[str, str]]:
    return {surface: (reading, meaning) for surface, reading, meaning in _read_table("lexicon.tsv")}


@lru_cache(maxsize=1)
def _meaning_index() -> dict[str, str]:
    # english meaning -> japanese surface, first lexicon row wins
    out: dict[str, str] = {}
    for surface, (_, meaning) in _lexicon().items():
        out.setdefault(meaning.lower(), surface)
    return out


@lru_cache(maxsize=1)
def _grammar_rules() -> list[tuple[str, str]]:
    return [(pattern, explanation) for pattern, explanation in _read_table("grammar_rules.tsv")]


class MockTranslator:
    """Exact-match corpus lookup, falling back to word-by-word lexicon joins."""

    def translate(self, source_en: str) -> TranslationTriple:
        if not source_en or not source_en.strip():
            raise UntranslatableInput("empty input")
        key = _normalize_english(source_en)
        hit = _corpus().get(key)
        if hit is not None:
            return hit
        surfaces = []
        for word in key.split(" "):
            surface = _meaning_index().get(word)
            if surface is None:
                raise UntranslatableInput(f"no fixture translation covers {word!r}")
            surfaces.append(surface)
        lex = _lexicon()
        kana = "".join(lex[s][0] for s in surfaces)
        return TranslationTriple(
            source_en=source_en,
            kanji="".join(surfaces),
            kana=kana,
            romaji=jptext.kana_to_romaji(kana),
            segmentation=tuple((s, lex[s][0]) for s in surfaces),
        )


class MockGrammarian:
    """Emits one note per rule-table pattern present, in sentence order."""

    @staticmethod
    def _match_index(pattern: str, surfaces: list[str]) -> int | None:
        for i, surface in enumerate(surfaces):
            if surface == pattern:
                return i
            if pattern == "ます" and surface != pattern and surface.endswith("ます"):
                return i
        return None

    def explain(self, triple: TranslationTriple) -> list[GrammarNote]:
        surfaces = triple.surfaces()
        hits = []
        for pattern, explanation in _grammar_rules():
            idx = self._match_index(pattern, surfaces)
            if idx is not None:
                hits.append((idx, pattern, explanation))
        hits.sort(key=lambda h: h[0])
        return [GrammarNote(pattern=p, explanation=e) for _, p, e in hits]


class MockRecognizer:
    """Returns the transcript embedded in the fixture clip's metadata chunk."""

    def transcribe(self, audio: AudioClip) -> str:
        if not audio.samples:
            raise UnrecognizableAudio("empty audio")
        if audio.sample_rate != SAMPLE_RATE:
            raise UnrecognizableAudio(f"expected {SAMPLE_RATE} Hz, got {audio.sample_rate}")
        if audio.transcript is None:
            raise UnrecognizableAudio("no transcript metadata in clip")
        return audio.transcript


def _mora_frequency(unit: jptext.PhonemeUnit) -> float:
    final = unit.symbols[-1]
    try:
        index = jptext.VOWELS.index(final)
    except ValueError:
        index = 0  # N / cl morae carry no vowel; pin them to the base tone
    return BASE_FREQ_HZ + FREQ_STEP_HZ * index


class MockSpeechSynth:
    """One 150 ms tone per mora; pitch tracks the mora's final vowel."""

    def speak(self, kana: str) -> AudioClip:
        units = jptext.kana_to_phonemes(kana)
        if not units:
            raise UntranslatableInput("empty kana")
        return tone_sequence([(_mora_frequency(u), MORA_SECONDS) for u in units])


def midi_to_hz(midi_pitch: int) -> float:
    return 440.0 * 2.0 ** ((midi_pitch - 69) / 12.0)


class MockSingingSynth:
    """One tone per note at its equal-temperament pitch, for its duration."""

    def render(self, score) -> AudioClip:
        if not score.notes:
            raise EmptyScore("score has no notes")
        return tone_sequence([(midi_to_hz(note.midi_pitch), note.duration) for note, _ in score.notes])


class MockLexicon:
    def get_meaning(self, surface: str) -> str:
        if not surface:
            raise UnknownWord(surface)
        row = _lexicon().get(surface)
        if row is None:
            raise UnknownWord(surface)
        return row[1]


def fixture_lexicon() -> dict[str, tuple[str, str]]:
    """surface -> (reading, meaning), as shipped."""
    return dict(_lexicon())


def fixture_corpus() -> list[TranslationTriple]:
    """All corpus rows, in file order."""
    return list(_corpus().values())


def mock_provider_set() -> ProviderSet:
    return ProviderSet(
        translator=MockTranslator(),
        grammarian=MockGrammarian(),
        recognizer=MockRecognizer(),
        speech_synth=MockSpeechSynth(),
        singing_synth=MockSingingSynth(),
        lexicon=MockLexicon(),
        bindings={p: "mock" for p in ["translator", "grammarian", "recognizer", "speech_synth", "singing_synth", "lexicon"]},
    )
