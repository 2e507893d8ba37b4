"""Practice-song construction: pick under-learned words, fill lyric templates,
align morae to melody notes, render through the singing-synth port.

Templates are authored files (see ``data/templates/``): a melody as
``midi:duration`` pairs plus lyric lines mixing literal kana with ``{SLOT}``
markers. Every mora sings exactly one note, so a filled lyric must hit the
melody's note count exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path

from . import jptext
from .audio import encode_wav
from .providers.base import ProviderSet

MIN_MIDI, MAX_MIDI = 36, 96
MAX_FILL_ATTEMPTS_PER_SLOT = 20
SLOT_MARKER = "{SLOT}"


class EmptyVocabulary(Exception):
    pass


class NoFittingWords(Exception):
    pass


class SlotArityMismatch(ValueError):
    pass


class MoraOverflow(ValueError):
    pass


class LengthMismatch(ValueError):
    pass


class TemplateError(ValueError):
    pass


@dataclass(frozen=True)
class MelodyNote:
    midi_pitch: int
    duration: float

    def validate(self) -> None:
        if not MIN_MIDI <= self.midi_pitch <= MAX_MIDI:
            raise TemplateError(f"midi pitch {self.midi_pitch} out of [{MIN_MIDI}, {MAX_MIDI}]")
        if self.duration <= 0:
            raise TemplateError(f"note duration {self.duration} must be positive")


@dataclass(frozen=True)
class LyricTemplate:
    template_id: str
    lines: tuple[tuple[str, ...], ...]  # each line: literal kana segments and SLOT_MARKER entries
    melody: tuple[MelodyNote, ...]

    @property
    def slot_count(self) -> int:
        return sum(1 for line in self.lines for seg in line if seg == SLOT_MARKER)

    @property
    def fixed_mora_count(self) -> int:
        return sum(
            jptext.mora_count(seg) for line in self.lines for seg in line if seg != SLOT_MARKER
        )

    def validate(self) -> None:
        if self.slot_count < 1:
            raise TemplateError(f"template {self.template_id} has no slots")
        for note in self.melody:
            note.validate()


@dataclass(frozen=True)
class SongScore:
    notes: tuple[tuple[MelodyNote, jptext.PhonemeUnit], ...]
    lyric_text: str
    slot_words: tuple[str, ...]
    used_learned_fallback: bool = False


@dataclass(frozen=True)
class RenderedSong:
    song_id: str
    score: SongScore
    audio_ref: str
    duration: float
    slot_words: tuple[str, ...] = field(default=())


def parse_template(text: str, template_id_hint: str = "") -> LyricTemplate:
    """Parse one template file: ``id:``, ``notes:`` and ``line:`` directives."""
    template_id = template_id_hint
    melody: list[MelodyNote] = []
    lines: list[tuple[str, ...]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition(":")
        value = value.strip()
        if key == "id":
            template_id = value
        elif key == "notes":
            for pair in value.split():
                midi_str, _, dur_str = pair.partition(":")
                melody.append(MelodyNote(midi_pitch=int(midi_str), duration=float(dur_str)))
        elif key == "line":
            segments: list[str] = []
            rest = value
            while rest:
                idx = rest.find(SLOT_MARKER)
                if idx < 0:
                    segments.append(rest)
                    break
                if idx > 0:
                    segments.append(rest[:idx])
                segments.append(SLOT_MARKER)
                rest = rest[idx + len(SLOT_MARKER) :]
            lines.append(tuple(segments))
        else:
            raise TemplateError(f"unknown template directive {key!r}")
    if not template_id or not melody or not lines:
        raise TemplateError("template needs id, notes and at least one line")
    template = LyricTemplate(template_id=template_id, lines=tuple(lines), melody=tuple(melody))
    template.validate()
    return template


def load_templates(template_dir: str | Path) -> dict[str, LyricTemplate]:
    templates = {}
    for path in sorted(Path(template_dir).glob("*.txt")):
        template = parse_template(path.read_text("utf-8"), template_id_hint=path.stem)
        templates[template.template_id] = template
    return templates


def select_slot_words(db, n: int) -> list[tuple[str, str]]:
    """First n learning words by (progress ascending, surface), cycling when short.

    Falls back to learned words when nothing is in progress; errors only on an
    empty database.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    candidates, _fallback = _candidates(db)
    return [candidates[i % len(candidates)] for i in range(n)]


def _candidates(db) -> tuple[list[tuple[str, str]], bool]:
    if not db.entries:
        raise EmptyVocabulary("no vocabulary tracked yet")
    learning = sorted(
        (e for e in db.entries.values() if e.progress < 5), key=lambda e: (e.progress, e.surface)
    )
    fallback = not learning
    pool = learning or sorted(db.entries.values(), key=lambda e: (e.progress, e.surface))
    return [(e.surface, e.reading) for e in pool], fallback


def fill_template(
    template: LyricTemplate, words: list[tuple[str, str]]
) -> tuple[str, list[tuple[int, str]]]:
    """Replace slots in order with each word's kana reading.

    Returns the full kana lyric and the (slot index, surface) placement map.
    Raises MoraOverflow when the filled lyric's mora total misses the melody's
    note count (in either direction).
    """
    if len(words) != template.slot_count:
        raise SlotArityMismatch(
            f"template {template.template_id} has {template.slot_count} slots, got {len(words)} words"
        )
    placements: list[tuple[int, str]] = []
    parts: list[str] = []
    slot = 0
    for line in template.lines:
        for seg in line:
            if seg == SLOT_MARKER:
                surface, reading = words[slot]
                placements.append((slot, surface))
                parts.append(reading)
                slot += 1
            else:
                parts.append(seg)
    lyric = "".join(parts)
    total = jptext.mora_count(lyric)
    if total != len(template.melody):
        raise MoraOverflow(
            f"filled lyric has {total} morae, melody has {len(template.melody)} notes"
        )
    return lyric, placements


def align_to_melody(lyric: str, melody: tuple[MelodyNote, ...] | list[MelodyNote]) -> SongScore:
    """Pair the i-th mora with the i-th note; one mora per note, no melisma."""
    units = jptext.kana_to_phonemes(lyric)
    if len(units) != len(melody):
        raise LengthMismatch(f"{len(units)} morae vs {len(melody)} notes")
    return SongScore(
        notes=tuple(zip(melody, units)),
        lyric_text=lyric,
        slot_words=(),
    )


def generate_song(db, template: LyricTemplate, providers: ProviderSet, store) -> RenderedSong:
    """select -> fill -> align -> render -> persist.

    Candidate words are tried in selection order; on mora mismatch the search
    advances through bounded combinations of substitutes before giving up.
    """
    template.validate()
    candidates, fallback = _candidates(db)
    pool = candidates[:MAX_FILL_ATTEMPTS_PER_SLOT]
    attempt_cap = 500
    lyric = None
    chosen: list[tuple[str, str]] = []
    for combo in itertools.islice(itertools.product(pool, repeat=template.slot_count), attempt_cap):
        try:
            lyric, _placements = fill_template(template, list(combo))
            chosen = list(combo)
            break
        except MoraOverflow:
            continue
    if lyric is None:
        raise NoFittingWords(
            f"no candidate assignment fits template {template.template_id}"
        )
    score = align_to_melody(lyric, template.melody)
    score = SongScore(
        notes=score.notes,
        lyric_text=score.lyric_text,
        slot_words=tuple(s for s, _ in chosen),
        used_learned_fallback=fallback,
    )
    clip = providers.singing_synth.render(score)
    wav = encode_wav(clip)
    audio_ref = store.put_audio(wav)
    return RenderedSong(
        song_id=audio_ref,
        score=score,
        audio_ref=audio_ref,
        duration=clip.duration,
        slot_words=score.slot_words,
    )
