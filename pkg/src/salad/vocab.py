"""Per-word vocabulary progress tracking.

Each tracked word carries a progress counter from 1 to 5; a word is "learned"
once it reaches 5. Tracking walks a segmented sentence word by word, creating
entries for unseen words (meaning fetched once, at creation) and bumping the
counter for known ones, then reports the full database as display lines.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timezone

MAX_PROGRESS = 5


class LexiconFailure(Exception):
    """Meaning resolution failed for one or more words.

    The rest of the sentence's updates are kept; the post-state database and
    the partial report ride on the exception so the caller can decide.
    """

    def __init__(self, failed_words: list[str], database: "VocabDatabase", report: "VocabReport"):
        self.failed_words = failed_words
        self.database = database
        self.report = report
        super().__init__(f"meaning resolution failed for: {', '.join(failed_words)}")


@dataclass(frozen=True, slots=True)
class VocabEntry:
    surface: str
    reading: str
    meaning: str
    progress: int
    first_seen: datetime
    last_seen: datetime
    exposure_count: int

    def validate(self) -> None:
        if not self.surface:
            raise ValueError("entry surface must be non-empty")
        if not self.meaning:
            raise ValueError(f"entry {self.surface!r} has empty meaning")
        if not 1 <= self.progress <= MAX_PROGRESS:
            raise ValueError(f"entry {self.surface!r} progress {self.progress} out of [1, {MAX_PROGRESS}]")
        if self.first_seen > self.last_seen:
            raise ValueError(f"entry {self.surface!r} first_seen after last_seen")
        if self.exposure_count < self.progress:
            raise ValueError(f"entry {self.surface!r} exposure_count below progress")


@dataclass(frozen=True)
class VocabDatabase:
    entries: dict[str, VocabEntry] = field(default_factory=dict)
    schema_version: int = 1

    def validate(self) -> None:
        for surface, entry in self.entries.items():
            if surface != entry.surface:
                raise ValueError(f"map key {surface!r} != entry surface {entry.surface!r}")
            entry.validate()

    def learning_count(self) -> int:
        return sum(1 for e in self.entries.values() if e.progress < MAX_PROGRESS)

    def learned_count(self) -> int:
        return sum(1 for e in self.entries.values() if e.progress == MAX_PROGRESS)


class VocabReport:
    """Outcome of tracking one sentence: what appeared, what advanced, and
    the full display listing. The listing is rendered on first access; most
    bulk callers (replay, property tests) never look at it."""

    __slots__ = ("new_words", "advanced_words", "_database", "_display_lines")

    def __init__(
        self,
        new_words: list[tuple[str, str]],
        advanced_words: list[tuple[str, int, int]],
        database: "VocabDatabase",
    ):
        self.new_words = new_words
        self.advanced_words = advanced_words
        self._database = database
        self._display_lines: list[str] | None = None

    @property
    def display_lines(self) -> list[str]:
        if self._display_lines is None:
            self._display_lines = display_lines(self._database)
        return self._display_lines

    def __eq__(self, other) -> bool:
        if not isinstance(other, VocabReport):
            return NotImplemented
        return (
            self.new_words == other.new_words
            and self.advanced_words == other.advanced_words
            and self.display_lines == other.display_lines
        )

    def __repr__(self) -> str:
        return (
            f"VocabReport(new_words={self.new_words!r}, "
            f"advanced_words={self.advanced_words!r}, "
            f"display_lines={self.display_lines!r})"
        )


@dataclass(frozen=True)
class SessionRecord:
    session_id: str
    started_at: datetime
    inputs_processed: int = 0
    words_introduced: list[str] = field(default_factory=list)
    words_advanced: list[str] = field(default_factory=list)
    words_completed: list[str] = field(default_factory=list)


def format_progress_line(entry: VocabEntry) -> str:
    """The canonical per-word display line: ``<surface>: <meaning> (Progress: <p>/5)``."""
    return f"{entry.surface}: {entry.meaning} (Progress: {entry.progress}/{MAX_PROGRESS})"


def display_lines(db: VocabDatabase) -> list[str]:
    """One line per entry, sorted by (progress ascending, surface code point)."""
    keyed = sorted((e.progress, e.surface, e.meaning) for e in db.entries.values())
    return [f"{s}: {m} (Progress: {p}/{MAX_PROGRESS})" for p, s, m in keyed]


def word_status(db: VocabDatabase, surface: str) -> str:
    """'unknown', 'learning' or 'learned' for the given surface."""
    entry = db.entries.get(surface)
    if entry is None:
        return "unknown"
    return "learned" if entry.progress == MAX_PROGRESS else "learning"


def track_vocabulary(
    sentence_words: list[str],
    db: VocabDatabase,
    lexicon,
    readings: dict[str, str] | None = None,
    now: datetime | None = None,
) -> tuple[VocabDatabase, VocabReport]:
    """Fold one segmented sentence into the database, one occurrence at a time.

    Known words below 5 advance by one per occurrence; unseen words are
    inserted at progress 1 with their meaning resolved through the lexicon
    port. The caller's database value is never mutated. `readings` optionally
    supplies kana readings for newly created entries.

    Raises LexiconFailure (carrying the partial post-state) if any word's
    meaning cannot be resolved; that word is skipped, the rest still commit.
    """
    if now is None:
        now = datetime.now(timezone.utc)
    entries = dict(db.entries)
    new_order: list[str] = []
    old_progress: dict[str, int] = {}
    failed: list[str] = []

    for word in sentence_words:
        if word in failed:
            continue
        entry = entries.get(word)
        if entry is not None:
            if word not in new_order and word not in old_progress:
                old_progress[word] = entry.progress
            progress = entry.progress
            if progress < MAX_PROGRESS:
                progress += 1
            entries[word] = VocabEntry(
                surface=entry.surface,
                reading=entry.reading,
                meaning=entry.meaning,
                progress=progress,
                first_seen=entry.first_seen,
                last_seen=now,
                exposure_count=entry.exposure_count + 1,
            )
        else:
            try:
                meaning = lexicon.get_meaning(word)
            except Exception:
                failed.append(word)
                continue
            reading = (readings or {}).get(word, word)
            entries[word] = VocabEntry(
                surface=word,
                reading=reading,
                meaning=meaning,
                progress=1,
                first_seen=now,
                last_seen=now,
                exposure_count=1,
            )
            new_order.append(word)

    post = VocabDatabase(entries=entries, schema_version=db.schema_version)
    report = VocabReport(
        new_words=[(w, entries[w].meaning) for w in new_order],
        advanced_words=[
            (w, old, entries[w].progress)
            for w, old in old_progress.items()
            if entries[w].progress > old
        ],
        database=post,
    )
    if failed:
        raise LexiconFailure(failed, post, report)
    return post, report


def apply_to_session(session: SessionRecord, report: VocabReport) -> SessionRecord:
    """Accumulate one pipeline result's vocabulary outcome into the session."""

    def extend(base: list[str], extra: list[str]) -> list[str]:
        out = list(base)
        for w in extra:
            if w not in out:
                out.append(w)
        return out

    completed = [w for w, _old, new in report.advanced_words if new == MAX_PROGRESS]
    return replace(
        session,
        inputs_processed=session.inputs_processed + 1,
        words_introduced=extend(session.words_introduced, [w for w, _ in report.new_words]),
        words_advanced=extend(session.words_advanced, [w for w, _o, _n in report.advanced_words]),
        words_completed=extend(session.words_completed, completed),
    )
