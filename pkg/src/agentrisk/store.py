"""File-backed entity store with optimistic concurrency.

One canonical JSON document per entity at ``<root>/<kind>s/<id>.json``,
wrapped in an envelope carrying revision, timestamps, and a checksum.
Writes go through a temp file, fsync, and an atomic rename, so a crashed
partial write is never observable: a reader sees either the previous
revision or the new one. A checksum mismatch on load quarantines the file
(renamed to ``*.corrupt``) and reports the corruption instead of returning
bad data.

Revisions start at 1 and increment by exactly 1 per successful write.
Writers pass the revision they expect (0 to create); a mismatch fails with
a conflict and changes nothing. Per-id mutexes serialize writers within
the process, which is the service's deployment unit.
"""
from __future__ import annotations

import hashlib
import json
import os
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .assessment import assessment_from_doc, assessment_to_doc
from .errors import (
    BAD_ID,
    CORRUPT_ENTITY,
    STORAGE_IO,
    ConflictError,
    EngineError,
    NotFoundError,
    StorageError,
)
from .register import (
    canonical_json,
    parse_profile,
    parse_register,
    profile_to_doc,
    register_to_doc,
)

KINDS = ("register", "profile", "assessment")

_ID_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789._-")


def _validate_payload(kind: str, payload: dict) -> dict:
    """Normalize the payload through its kind's parser; DocumentError if bad."""
    text = canonical_json(payload)
    if kind == "register":
        return register_to_doc(parse_register(text))
    if kind == "profile":
        return profile_to_doc(parse_profile(text))
    if kind == "assessment":
        return assessment_to_doc(assessment_from_doc(json.loads(text)))
    raise EngineError(BAD_ID, f"unknown entity kind {kind!r}")


@dataclass(frozen=True)
class StoredEntity:
    kind: str
    id: str
    revision: int
    created_at: str
    updated_at: str
    payload: dict

    @property
    def payload_bytes(self) -> bytes:
        return canonical_json(self.payload).encode("utf-8")


def _checksum(kind: str, entity_id: str, revision: int, payload: dict) -> str:
    material = f"{kind}\x00{entity_id}\x00{revision}\x00".encode() + canonical_json(
        payload
    ).encode("utf-8")
    return hashlib.sha256(material).hexdigest()


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class FileStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        for kind in KINDS:
            (self.root / f"{kind}s").mkdir(exist_ok=True)
        self._master = threading.Lock()
        self._locks: dict[tuple[str, str], threading.Lock] = {}

    def _lock_for(self, kind: str, entity_id: str) -> threading.Lock:
        with self._master:
            return self._locks.setdefault((kind, entity_id), threading.Lock())

    def _path(self, kind: str, entity_id: str) -> Path:
        if kind not in KINDS:
            raise NotFoundError(f"unknown entity kind {kind!r}")
        if not entity_id or len(entity_id) > 120 or not set(entity_id) <= _ID_CHARS:
            raise EngineError(BAD_ID, f"bad entity id {entity_id!r}")
        return self.root / f"{kind}s" / f"{entity_id}.json"

    def _read(self, path: Path, kind: str, entity_id: str) -> StoredEntity:
        try:
            raw = path.read_bytes()
        except FileNotFoundError:
            raise NotFoundError(f"{kind} {entity_id!r} not found") from None
        except OSError as exc:
            raise StorageError(STORAGE_IO, f"cannot read {path}: {exc}") from exc
        try:
            envelope = json.loads(raw)
            entity = StoredEntity(
                kind=envelope["kind"],
                id=envelope["id"],
                revision=envelope["revision"],
                created_at=envelope["created_at"],
                updated_at=envelope["updated_at"],
                payload=envelope["payload"],
            )
            stored_checksum = envelope["checksum"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            self._quarantine(path)
            raise StorageError(
                CORRUPT_ENTITY, f"{kind} {entity_id!r} is unreadable and was quarantined"
            ) from exc
        if (
            entity.kind != kind
            or entity.id != entity_id
            or _checksum(kind, entity_id, entity.revision, entity.payload) != stored_checksum
        ):
            self._quarantine(path)
            raise StorageError(
                CORRUPT_ENTITY,
                f"{kind} {entity_id!r} failed its checksum and was quarantined",
            )
        return entity

    def _quarantine(self, path: Path):
        try:
            os.replace(path, path.with_suffix(".corrupt"))
        except OSError:
            pass

    def _write(self, path: Path, entity: StoredEntity):
        envelope = {
            "kind": entity.kind,
            "id": entity.id,
            "revision": entity.revision,
            "created_at": entity.created_at,
            "updated_at": entity.updated_at,
            "checksum": _checksum(entity.kind, entity.id, entity.revision, entity.payload),
            "payload": entity.payload,
        }
        data = canonical_json(envelope).encode("utf-8")
        tmp = path.with_name(f".{path.name}.tmp-{uuid.uuid4().hex}")
        try:
            with open(tmp, "wb") as fh:
                fh.write(data)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except OSError as exc:
            try:
                tmp.unlink(missing_ok=True)
            except OSError:
                pass
            raise StorageError(STORAGE_IO, f"cannot write {path}: {exc}") from exc

    def get(self, kind: str, entity_id: str) -> StoredEntity:
        return self._read(self._path(kind, entity_id), kind, entity_id)

    def exists(self, kind: str, entity_id: str) -> bool:
        return self._path(kind, entity_id).exists()

    def put(
        self, kind: str, entity_id: str, payload: dict, expected_revision: int | None
    ) -> StoredEntity:
        """Create (expected 0) or replace (expected = current revision).

        ``None`` skips the check (preloading); the payload must pass its
        kind's validator before anything touches disk.
        """
        path = self._path(kind, entity_id)
        payload = _validate_payload(kind, payload)
        with self._lock_for(kind, entity_id):
            current: StoredEntity | None
            try:
                current = self._read(path, kind, entity_id)
            except NotFoundError:
                current = None
            current_revision = current.revision if current else 0
            if expected_revision is not None and expected_revision != current_revision:
                raise ConflictError(
                    f"{kind} {entity_id!r}: expected revision {expected_revision}, "
                    f"store is at {current_revision}"
                )
            now = _now()
            entity = StoredEntity(
                kind=kind,
                id=entity_id,
                revision=current_revision + 1,
                created_at=current.created_at if current else now,
                updated_at=now,
                payload=payload,
            )
            self._write(path, entity)
            return entity

    def delete(self, kind: str, entity_id: str, expected_revision: int | None):
        path = self._path(kind, entity_id)
        with self._lock_for(kind, entity_id):
            current = self._read(path, kind, entity_id)
            if expected_revision is not None and expected_revision != current.revision:
                raise ConflictError(
                    f"{kind} {entity_id!r}: expected revision {expected_revision}, "
                    f"store is at {current.revision}"
                )
            try:
                path.unlink()
            except OSError as exc:
                raise StorageError(STORAGE_IO, f"cannot delete {path}: {exc}") from exc

    def list(self, kind: str) -> list[StoredEntity]:
        if kind not in KINDS:
            raise NotFoundError(f"unknown entity kind {kind!r}")
        out = []
        for path in sorted((self.root / f"{kind}s").glob("*.json")):
            if path.name.startswith("."):
                continue
            try:
                out.append(self._read(path, kind, path.stem))
            except StorageError:
                continue  # quarantined; listing stays usable
        out.sort(key=lambda e: e.id)
        return out
