"""Acceptance suite: one test per release criterion, mock providers only.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS line per
criterion. Every tolerance is pinned here, not configured elsewhere.
"""

import hashlib
import io
import itertools
import json
import random
import time
from datetime import datetime, timezone
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from salad.audio import SAMPLE_RATE, AudioClip, decode_wav, encode_wav
from salad.config import ServiceConfig, default_template_dir
from salad.jptext import kana_table, kana_to_phonemes, kana_to_romaji, mora_count
from salad.providers.mock import fixture_corpus
from salad.service import create_app
from salad.songcraft import (
    MoraOverflow,
    align_to_melody,
    fill_template,
    generate_song,
    load_templates,
)
from salad.store import deserialize_db, serialize_db, Store
from salad.vocab import MAX_PROGRESS, VocabDatabase, VocabEntry, format_progress_line, track_vocabulary

import oracles
from test_jptext import random_kana
from test_store import random_db

NOW = datetime(2026, 8, 1, tzinfo=timezone.utc)
DATA = Path(__file__).parent / "data"

SAMPLE_TOLERANCE_SECONDS = 1 / SAMPLE_RATE  # one sample at 22050 Hz, ~45 µs


class FixedLexicon:
    def __init__(self, words):
        self.meanings = {w: f"meaning-{i}" for i, w in enumerate(words)}

    def get_meaning(self, surface):
        return self.meanings[surface]


def ok(name):
    print(f"\nACCEPTANCE PASS: {name}")


def canonical_body(body):
    body = {k: v for k, v in body.items() if k not in ("elapsed_ms", "received_at")}
    return json.dumps(body, sort_keys=True, ensure_ascii=False).encode("utf-8")


def fresh_client(tmp_path, name):
    return TestClient(create_app(ServiceConfig(data_dir=tmp_path / name)))


def test_tracking_matches_reference_implementation():
    """1,000 randomized sequences against the brute-force tracking reference."""
    words = [f"word{i:02d}" for i in range(30)]
    lexicon = FixedLexicon(words)
    rng = random.Random(0xACCE97)
    started = time.monotonic()
    for _ in range(1000):
        db = VocabDatabase()
        reference = {}
        for _ in range(rng.randint(1, 200)):
            sentence = [rng.choice(words) for _ in range(rng.randint(1, 6))]
            db, _report = track_vocabulary(sentence, db, lexicon, now=NOW)
            oracles.track_vocabulary_reference(sentence, reference, lexicon.get_meaning)
        assert set(db.entries) == set(reference)
        for word, data in reference.items():
            assert db.entries[word].progress == data["progress"]
            assert db.entries[word].meaning == data["meaning"]
    elapsed = time.monotonic() - started
    assert elapsed < 5.0, f"oracle equivalence took {elapsed:.2f}s (limit 5s)"
    ok(f"tracking equals reference on 1000 random sequences ({elapsed:.2f}s)")


def test_saturation_law():
    """progress = min(k, 5) and exposure_count = k over 10,000 generated traces."""
    rng = random.Random(0x5A7)
    lexicon = FixedLexicon(["w", "x", "y"])
    for _ in range(10_000):
        db = VocabDatabase()
        k = 0
        for _ in range(rng.randint(1, 4)):
            occurrences = rng.randint(0, 3)
            filler = ["x"] * rng.randint(0, 2)
            sentence = ["w"] * occurrences + filler
            rng.shuffle(sentence)
            db, _ = track_vocabulary(sentence, db, lexicon, now=NOW)
            k += occurrences
            if k:
                entry = db.entries["w"]
                assert entry.progress == min(k, MAX_PROGRESS)
                assert entry.exposure_count == k
    ok("saturation law holds on 10000 traces")


def test_display_format_golden():
    """format_progress_line matches the frozen 50-case golden file byte-for-byte."""
    rows = [
        line.split("\t")
        for line in (DATA / "progress_lines_golden.tsv").read_text("utf-8").splitlines()
        if not line.startswith("#")
    ]
    assert len(rows) == 50
    for surface, meaning, progress, expected in rows:
        entry = VocabEntry(
            surface=surface, reading=surface, meaning=meaning, progress=int(progress),
            first_seen=NOW, last_seen=NOW, exposure_count=int(progress),
        )
        line = format_progress_line(entry)
        assert line.encode("utf-8") == expected.encode("utf-8")
    ok("display format matches 50-case golden file")


def test_transliteration_against_reference():
    """Exhaustive single-kana sweep plus 500 random strings vs the mora-by-mora reference."""
    for kana in kana_table():
        assert kana_to_romaji(kana) == oracles.romaji_reference(kana)
        assert [list(u.symbols) for u in kana_to_phonemes(kana)] == oracles.phonemes_reference(kana)
    rng = random.Random(0x7AB1E)
    keys = sorted(kana_table())
    for _ in range(500):
        text = random_kana(rng, keys)
        assert kana_to_romaji(text) == oracles.romaji_reference(text)
        assert [list(u.symbols) for u in kana_to_phonemes(text)] == oracles.phonemes_reference(text)
        assert mora_count(text) == len(kana_to_phonemes(text))
    ok("transliteration agrees with reference on sweep + 500 random strings")


def test_pipeline_determinism_over_corpus(tmp_path):
    """Both full-corpus runs byte-identical; 5 repetitions saturate to 5/5."""
    sentences = [t.source_en for t in fixture_corpus()]
    assert len(sentences) >= 50
    runs = []
    for name in ("run_a", "run_b"):
        client = fresh_client(tmp_path, name)
        responses = []
        for sentence in sentences:
            r = client.post("/api/process", json={"text": sentence})
            assert r.status_code == 200, sentence
            responses.append(canonical_body(r.json()))
        runs.append(responses)
    assert runs[0] == runs[1]

    client = fresh_client(tmp_path, "saturate")
    for _ in range(5):
        assert client.post("/api/process", json={"text": "I eat sushi"}).status_code == 200
    vocab = client.get("/api/vocabulary").json()
    assert vocab["counts"] == {"learning": 0, "learned": 5}
    assert all(e["progress"] == 5 for e in vocab["entries"])
    ok("pipeline deterministic over full corpus; 5 repetitions reach 5/5")


def test_song_duration_conservation(tmp_path, providers):
    """Every template x every fitting assignment: WAV duration = sum of note durations
    within one sample; slot words in progress when enough learning words fit."""
    store = Store(tmp_path / "songs")
    # learning words with mora sizes 1..4 so every slot budget is reachable
    pool = [("目", "め", 1), ("寿司", "すし", 1), ("桜", "さくら", 2), ("学校", "がっこう", 2),
            ("犬", "いぬ", 3), ("歌", "うた", 4)]
    entries = {
        s: VocabEntry(surface=s, reading=r, meaning=f"m-{s}", progress=p,
                      first_seen=NOW, last_seen=NOW, exposure_count=p)
        for s, r, p in pool
    }
    db = VocabDatabase(entries=entries)
    templates = load_templates(default_template_dir())
    assert len(templates) >= 2
    checked = 0
    for template in templates.values():
        expected = sum(n.duration for n in template.melody)
        fitting = 0
        for combo in itertools.product(pool, repeat=template.slot_count):
            words = [(s, r) for s, r, _ in combo]
            try:
                lyric, _ = fill_template(template, words)
            except MoraOverflow:
                continue
            fitting += 1
            score = align_to_melody(lyric, template.melody)
            clip = providers.singing_synth.render(score)
            assert abs(clip.duration - expected) <= SAMPLE_TOLERANCE_SECONDS, template.template_id
            checked += 1
        assert fitting > 0, f"no fitting assignment for {template.template_id}"
        # slot purity: selection never uses a learned word while learning words fit
        rendered = generate_song(db, template, providers, store)
        assert not rendered.score.used_learned_fallback
        for surface in rendered.slot_words:
            assert db.entries[surface].progress < MAX_PROGRESS
    ok(f"song duration conserved within 1 sample on {checked} fitting assignments")


def test_store_round_trip_and_crash_safety(tmp_path, monkeypatch):
    """1,000 generated databases round-trip; truncated save leaves prior file loadable."""
    rng = random.Random(0x570E)
    for _ in range(1000):
        db = random_db(rng)
        assert deserialize_db(serialize_db(db)) == db
        assert serialize_db(db) == serialize_db(db)

    import os

    store = Store(tmp_path / "crash")
    db = random_db(random.Random(1))
    store.save_db(db)

    def interrupted(src, dst):
        raise OSError("power loss before rename")

    monkeypatch.setattr(os, "replace", interrupted)
    with pytest.raises(OSError):
        store.save_db(random_db(random.Random(2)))
    monkeypatch.undo()
    assert store.load_db() == db
    ok("store round-trips 1000 generated databases; interrupted save is safe")


def test_audio_path_equivalence(tmp_path):
    """A fixture WAV with embedded transcript T gives the same canonical result as text T."""
    transcript = "I eat sushi"
    wav = encode_wav(AudioClip(samples=(6, -6) * 400, transcript=transcript))

    text_client = fresh_client(tmp_path, "by_text")
    r_text = text_client.post("/api/process", json={"text": transcript})
    audio_client = fresh_client(tmp_path, "by_audio")
    r_audio = audio_client.post(
        "/api/process", files={"audio": ("clip.wav", io.BytesIO(wav), "audio/wav")}
    )
    assert r_text.status_code == 200 and r_audio.status_code == 200
    assert canonical_body(r_text.json()) == canonical_body(r_audio.json())
    ok("audio input equals text input after canonicalization")


def test_error_contracts_leave_store_unchanged(tmp_path):
    """409 EmptyVocabulary and 422 TranslationFailed, with store bytes untouched."""
    client = fresh_client(tmp_path, "errors")
    vocab_path = tmp_path / "errors" / "vocab.json"

    def store_hash():
        return hashlib.sha256(vocab_path.read_bytes()).hexdigest() if vocab_path.exists() else None

    before = store_hash()
    r = client.post("/api/song", json={"template_id": "sakura"})
    assert r.status_code == 409 and r.json()["code"] == "EmptyVocabulary"
    assert store_hash() == before

    client.post("/api/process", json={"text": "I eat sushi"})
    before = store_hash()
    r = client.post("/api/process", json={"text": "this sentence is not in the fixtures"})
    assert r.status_code == 422 and r.json()["stage"] == "TranslationFailed"
    assert store_hash() == before
    ok("error contracts hold and failures never touch the store")
