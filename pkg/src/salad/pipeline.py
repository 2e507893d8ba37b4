"""End-to-end processing of one learner input.

Stage order: transcribe (audio only) -> translate -> grammar -> vocabulary
tracking -> pronunciation synthesis -> store the clip -> assemble the result.
Translation and tracking failures are fatal and leave the database untouched;
grammar and synthesis failures degrade (empty notes / no pronunciation).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .audio import AudioClip, encode_wav
from .providers.base import GrammarNote, ProviderSet, TranslationTriple
from .vocab import LexiconFailure, VocabDatabase, VocabReport, track_vocabulary


class PipelineError(Exception):
    """A stage failed; `stage` names the wrapped stage, `cause` the original error."""

    stage = "Pipeline"

    def __init__(self, cause: Exception):
        self.cause = cause
        super().__init__(f"{self.stage}: {cause}")


class TranscriptionFailed(PipelineError):
    stage = "TranscriptionFailed"


class TranslationFailed(PipelineError):
    stage = "TranslationFailed"


class GrammarFailed(PipelineError):
    stage = "GrammarFailed"


class TrackingFailed(PipelineError):
    stage = "TrackingFailed"


class SynthesisFailed(PipelineError):
    stage = "SynthesisFailed"


class AbortedAt(Exception):
    """Replay stopped at the 1-based `index`; `database` and `results` hold the
    state produced by the inputs before it."""

    def __init__(self, index: int, cause: Exception, database=None, results=None):
        self.index = index
        self.cause = cause
        self.database = database
        self.results = results or []
        super().__init__(f"replay aborted at input {index}: {cause}")


@dataclass(frozen=True)
class LearnerInput:
    kind: str  # "text" | "audio"
    session_id: str
    text: str | None = None
    audio: AudioClip | None = None
    received_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))

    def validate(self) -> None:
        if self.kind not in ("text", "audio"):
            raise ValueError(f"unknown input kind {self.kind!r}")
        if self.kind == "text" and (self.text is None or self.audio is not None):
            raise ValueError("text input must carry text and no audio")
        if self.kind == "audio" and (self.audio is None or self.text is not None):
            raise ValueError("audio input must carry audio and no text")


@dataclass(frozen=True)
class PipelineResult:
    transcript: str
    triple: TranslationTriple
    grammar: tuple[GrammarNote, ...]
    vocab_report: VocabReport
    pronunciation_ref: str | None
    elapsed_ms: int

    def canonical(self) -> dict:
        """Deterministic view: everything except timestamps and elapsed time."""
        return {
            "transcript": self.transcript,
            "triple": {
                "source_en": self.triple.source_en,
                "kanji": self.triple.kanji,
                "kana": self.triple.kana,
                "romaji": self.triple.romaji,
                "segmentation": [list(pair) for pair in self.triple.segmentation],
            },
            "grammar": [{"pattern": n.pattern, "explanation": n.explanation} for n in self.grammar],
            "vocab_report": {
                "new_words": [list(p) for p in self.vocab_report.new_words],
                "advanced_words": [list(p) for p in self.vocab_report.advanced_words],
                "display_lines": list(self.vocab_report.display_lines),
            },
            "pronunciation_ref": self.pronunciation_ref,
        }


def process_input(
    learner_input: LearnerInput,
    db: VocabDatabase,
    providers: ProviderSet,
    store=None,
    now: datetime | None = None,
) -> tuple[VocabDatabase, PipelineResult]:
    """Run one input through all stages; returns the post-tracking database.

    `store` receives the synthesized pronunciation clip (content-addressed);
    without one the pronunciation reference is left unset.
    """
    learner_input.validate()
    started = time.monotonic()

    if learner_input.kind == "audio":
        try:
            transcript = providers.recognizer.transcribe(learner_input.audio)
        except Exception as exc:
            raise TranscriptionFailed(exc) from exc
    else:
        transcript = learner_input.text

    try:
        triple = providers.translator.translate(transcript)
    except Exception as exc:
        raise TranslationFailed(exc) from exc

    try:
        grammar = tuple(providers.grammarian.explain(triple))
    except Exception:
        grammar = ()  # enrichment only, degrade to no notes

    try:
        new_db, report = track_vocabulary(
            triple.surfaces(), db, providers.lexicon, readings=triple.readings(), now=now
        )
    except LexiconFailure as exc:
        raise TrackingFailed(exc) from exc

    pronunciation_ref = None
    try:
        clip = providers.speech_synth.speak(triple.kana)
        if store is not None:
            pronunciation_ref = store.put_audio(encode_wav(clip))
    except Exception:
        pronunciation_ref = None  # pronunciation is optional, keep the result

    elapsed_ms = int((time.monotonic() - started) * 1000)
    result = PipelineResult(
        transcript=transcript,
        triple=triple,
        grammar=grammar,
        vocab_report=report,
        pronunciation_ref=pronunciation_ref,
        elapsed_ms=elapsed_ms,
    )
    return new_db, result


def replay_corpus(
    inputs: list[LearnerInput],
    db: VocabDatabase,
    providers: ProviderSet,
    store=None,
) -> tuple[VocabDatabase, list[PipelineResult]]:
    """Sequential fold of process_input; a fatal error aborts with the failing
    input's 1-based position, leaving only the preceding inputs applied."""
    results: list[PipelineResult] = []
    current = db
    for index, learner_input in enumerate(inputs, start=1):
        try:
            current, result = process_input(learner_input, current, providers, store=store)
        except PipelineError as exc:
            raise AbortedAt(index, exc, database=current, results=results) from exc
        results.append(result)
    return current, results
