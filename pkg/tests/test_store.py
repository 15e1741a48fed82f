from __future__ import annotations

import json
import os
import threading

import pytest

from agentrisk.errors import ConflictError, DocumentError, NotFoundError, StorageError
from agentrisk.register import register_to_doc
from agentrisk.store import FileStore

import agentrisk.store as store_module


@pytest.fixture()
def store(tmp_path):
    return FileStore(tmp_path)


@pytest.fixture()
def register_doc(worked_register):
    return register_to_doc(worked_register)


def test_persist_then_load_identical_payload_bytes(store, register_doc):
    store.put("register", "base", register_doc, 0)
    loaded = store.get("register", "base")
    assert loaded.payload == register_doc
    again = store.get("register", "base")
    assert loaded.payload_bytes == again.payload_bytes
    assert loaded.revision == 1


def test_revisions_increment_by_one(store, register_doc):
    first = store.put("register", "base", register_doc, 0)
    second = store.put("register", "base", register_doc, 1)
    third = store.put("register", "base", register_doc, 2)
    assert (first.revision, second.revision, third.revision) == (1, 2, 3)
    assert first.created_at == third.created_at


def test_stale_expected_revision_conflicts(store, register_doc):
    store.put("register", "base", register_doc, 0)
    store.put("register", "base", register_doc, 1)
    with pytest.raises(ConflictError):
        store.put("register", "base", register_doc, 1)
    with pytest.raises(ConflictError):
        store.put("register", "other", register_doc, 3)  # create needs 0


def test_validation_runs_before_storage(store, register_doc, tmp_path):
    bad = dict(register_doc)
    bad["risks"] = [dict(register_doc["risks"][0], hazards=[])]
    with pytest.raises(DocumentError):
        store.put("register", "bad", bad, 0)
    assert not (tmp_path / "registers" / "bad.json").exists()


def test_not_found(store):
    with pytest.raises(NotFoundError):
        store.get("register", "missing")
    with pytest.raises(NotFoundError):
        store.delete("register", "missing", 1)


def test_bad_entity_ids_rejected(store, register_doc):
    for bad_id in ("", "a/b", "../escape", "x" * 200):
        with pytest.raises(Exception):
            store.put("register", bad_id, register_doc, 0)


def test_delete_with_revision_check(store, register_doc):
    store.put("register", "base", register_doc, 0)
    with pytest.raises(ConflictError):
        store.delete("register", "base", 9)
    store.delete("register", "base", 1)
    with pytest.raises(NotFoundError):
        store.get("register", "base")


def test_crash_between_temp_write_and_rename(store, register_doc, monkeypatch):
    store.put("register", "base", register_doc, 0)
    before = store.get("register", "base")

    real_replace = os.replace

    def crash(src, dst):
        raise OSError("simulated crash before rename")

    monkeypatch.setattr(store_module.os, "replace", crash)
    with pytest.raises(StorageError):
        store.put("register", "base", dict(register_doc, version="2.0.0"), 1)
    monkeypatch.setattr(store_module.os, "replace", real_replace)

    after = store.get("register", "base")
    assert after.revision == before.revision
    assert after.payload_bytes == before.payload_bytes  # previous revision intact


def test_partial_temp_files_are_never_visible(store, register_doc, tmp_path):
    store.put("register", "base", register_doc, 0)
    # a stray temp file from a crashed writer must not appear in listings
    stray = tmp_path / "registers" / ".base.json.tmp-dead"
    stray.write_text("{not json", encoding="utf-8")
    ids = [e.id for e in store.list("register")]
    assert ids == ["base"]


def test_corruption_quarantines_and_reports(store, register_doc, tmp_path):
    store.put("register", "base", register_doc, 0)
    path = tmp_path / "registers" / "base.json"
    envelope = json.loads(path.read_text())
    envelope["payload"]["name"] = "tampered"
    path.write_text(json.dumps(envelope), encoding="utf-8")

    with pytest.raises(StorageError) as exc:
        store.get("register", "base")
    assert exc.value.code == "corrupt_entity"
    assert path.with_suffix(".corrupt").exists()
    with pytest.raises(NotFoundError):
        store.get("register", "base")  # quarantined, not silently readable


def test_unparseable_file_quarantined(store, register_doc, tmp_path):
    store.put("register", "base", register_doc, 0)
    path = tmp_path / "registers" / "base.json"
    path.write_text("garbage{{{", encoding="utf-8")
    with pytest.raises(StorageError):
        store.get("register", "base")
    assert path.with_suffix(".corrupt").exists()


def test_concurrent_writers_same_revision_exactly_one_wins(store, register_doc):
    store.put("register", "base", register_doc, 0)
    barrier = threading.Barrier(8)
    outcomes: list[str] = []
    lock = threading.Lock()

    def writer(n: int):
        barrier.wait()
        try:
            store.put("register", "base", dict(register_doc, version=f"2.0.{n}"), 1)
            result = "ok"
        except ConflictError:
            result = "conflict"
        with lock:
            outcomes.append(result)

    threads = [threading.Thread(target=writer, args=(n,)) for n in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert outcomes.count("ok") == 1
    assert outcomes.count("conflict") == 7
    assert store.get("register", "base").revision == 2


def test_accepted_revisions_are_gap_free_under_contention(store, register_doc):
    store.put("register", "base", register_doc, 0)
    accepted: list[int] = []
    lock = threading.Lock()

    def writer():
        for _ in range(25):
            current = store.get("register", "base").revision
            try:
                entity = store.put("register", "base", register_doc, current)
            except ConflictError:
                continue
            with lock:
                accepted.append(entity.revision)

    threads = [threading.Thread(target=writer) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert sorted(accepted) == list(range(2, 2 + len(accepted)))
    assert len(accepted) == len(set(accepted))


def test_list_sorted_by_id(store, register_doc):
    for name in ("zeta", "alpha", "mid"):
        store.put("register", name, register_doc, 0)
    assert [e.id for e in store.list("register")] == ["alpha", "mid", "zeta"]


def test_every_stored_payload_revalidates_on_load(store, register_doc):
    store.put("register", "base", register_doc, 0)
    loaded = store.get("register", "base")
    # the stored payload parses cleanly through the same validator
    store.put("register", "copy", loaded.payload, 0)
