import json
import random
import threading
from datetime import datetime, timedelta, timezone

import pytest

from salad.store import CorruptStore, NotFound, Store, deserialize_db, serialize_db
from salad.vocab import SessionRecord, VocabDatabase, VocabEntry

BASE = datetime(2026, 8, 1, tzinfo=timezone.utc)


def random_db(rng, max_entries=12):
    surfaces = ["猫", "犬", "水", "日本", "学校", "先生", "花", "空", "海", "山", "本", "歌"]
    entries = {}
    for surface in rng.sample(surfaces, rng.randint(0, max_entries)):
        progress = rng.randint(1, 5)
        first = BASE + timedelta(minutes=rng.randint(0, 1000))
        entries[surface] = VocabEntry(
            surface=surface,
            reading=surface,
            meaning=f"meaning-{surface}",
            progress=progress,
            first_seen=first,
            last_seen=first + timedelta(minutes=rng.randint(0, 1000)),
            exposure_count=progress + rng.randint(0, 20),
        )
    return VocabDatabase(entries=entries)


class TestDbRoundTrip:
    def test_fresh_dir_is_empty_db(self, store):
        db = store.load_db()
        assert db.entries == {} and db.schema_version == 1

    def test_save_load_identity(self, store):
        rng = random.Random(1)
        db = random_db(rng)
        store.save_db(db)
        assert store.load_db() == db

    def test_generated_round_trips(self):
        rng = random.Random(5)
        for _ in range(100):
            db = random_db(rng)
            assert deserialize_db(serialize_db(db)) == db

    def test_canonical_bytes_stable(self, store):
        db = random_db(random.Random(2))
        store.save_db(db)
        first = store.root.vocab_path.read_bytes()
        store.save_db(db)
        assert store.root.vocab_path.read_bytes() == first

    def test_last_write_wins(self, store):
        a = random_db(random.Random(3))
        b = random_db(random.Random(4))
        store.save_db(a)
        store.save_db(b)
        assert store.load_db() == b

    def test_truncated_file_rejected(self, store):
        db = random_db(random.Random(6))
        store.save_db(db)
        data = store.root.vocab_path.read_bytes()
        rng = random.Random(7)
        for _ in range(10):
            store.root.vocab_path.write_bytes(data[: rng.randint(1, len(data) - 2)])
            with pytest.raises(CorruptStore):
                store.load_db()

    def test_unknown_schema_version_rejected(self, store):
        doc = json.loads(serialize_db(VocabDatabase()))
        doc["schema_version"] = 99
        store.root.vocab_path.write_text(json.dumps(doc))
        with pytest.raises(CorruptStore):
            store.load_db()

    def test_invalid_db_rejected_before_write(self, store):
        bad = VocabDatabase(entries={"猫": VocabEntry("猫", "ねこ", "", 1, BASE, BASE, 1)})
        with pytest.raises(ValueError):
            store.save_db(bad)
        assert not store.root.vocab_path.exists()

    def test_interrupted_save_leaves_previous_readable(self, store, monkeypatch):
        import os

        db = random_db(random.Random(8))
        store.save_db(db)

        def boom(*args, **kwargs):
            raise OSError("disk vanished")

        monkeypatch.setattr(os, "replace", boom)
        with pytest.raises(OSError):
            store.save_db(random_db(random.Random(9)))
        monkeypatch.undo()
        assert store.load_db() == db
        assert list(store.root.data_dir.glob("*.tmp")) == []


class TestSessions:
    def record(self, i):
        return SessionRecord(
            session_id=f"s{i}",
            started_at=BASE,
            inputs_processed=i,
            words_introduced=["猫"],
            words_advanced=[],
            words_completed=[],
        )

    def test_append_order(self, store):
        for i in range(5):
            store.append_session(self.record(i))
        records = store.read_sessions()
        assert [r.session_id for r in records] == [f"s{i}" for i in range(5)]

    def test_round_trip(self, store):
        record = self.record(3)
        store.append_session(record)
        assert store.read_sessions() == [record]

    def test_concurrent_appends_do_not_interleave(self, store):
        def writer(i):
            for _ in range(20):
                store.append_session(self.record(i))

        threads = [threading.Thread(target=writer, args=(i,)) for i in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        lines = store.root.sessions_path.read_text("utf-8").splitlines()
        assert len(lines) == 80
        for line in lines:
            json.loads(line)  # every line is a complete record


class TestAudio:
    def test_put_get_bit_exact(self, store):
        data = b"RIFFfakebytes" * 100
        audio_id = store.put_audio(data)
        assert store.get_audio(audio_id) == data

    def test_idempotent_put(self, store):
        data = b"RIFFxyz"
        assert store.put_audio(data) == store.put_audio(data)
        assert len(list(store.root.audio_dir.iterdir())) == 1

    def test_unknown_id(self, store):
        with pytest.raises(NotFound):
            store.get_audio("deadbeef")

    def test_traversal_rejected(self, store):
        with pytest.raises(NotFound):
            store.get_audio("../vocab")
