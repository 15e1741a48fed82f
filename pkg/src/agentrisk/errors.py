"""Error codes, exceptions, and validation reports.

Error codes are stable machine-readable strings shared verbatim between the
library, the CLI, and the HTTP API, so callers can branch on them without
parsing messages.
"""
from __future__ import annotations

from dataclasses import dataclass

# Parse / register validation codes.
SYNTAX = "syntax"
SCHEMA = "schema"
UNKNOWN_TOKEN = "unknown_token"
BAD_ID = "bad_id"
DUPLICATE_ID = "duplicate_id"
DANGLING_REFERENCE = "dangling_reference"
NOT_WELL_FORMED = "not_well_formed"
# Validation warnings.
UNCONTROLLED_RISK = "uncontrolled_risk"
NO_EVIDENCE = "no_evidence"
# Assessment engine codes.
NOT_APPLICABLE = "not_applicable"
OUT_OF_RANGE = "out_of_range"
INCOMPLETE_RATINGS = "incomplete_ratings"
EMPTY_NOTE = "empty_note"
MISSING_APPROVER = "missing_approver"
UNKNOWN_NOTE = "unknown_note"
UNKNOWN_CONTROL = "unknown_control"
CARDINAL_WAIVER = "cardinal_waiver"
MISSING_DISPOSITION = "missing_disposition"
MISSING_JUSTIFICATION = "missing_justification"
UNACCEPTED_NOTE = "unaccepted_note"
FINALIZE_BLOCKED = "finalize_blocked"
FINALIZED_IMMUTABLE = "finalized_immutable"
VERSION_MISMATCH = "version_mismatch"
MIXED_REGISTER_VERSIONS = "mixed_register_versions"
INCONSISTENT_DIFF = "inconsistent_diff"
# Storage / API codes.
CONFLICT = "conflict"
NOT_FOUND = "not_found"
CORRUPT_ENTITY = "corrupt_entity"
STORAGE_IO = "storage_io"
VALIDATION = "validation"


@dataclass(frozen=True)
class ValidationItem:
    """One finding: severity is ``error`` or ``warning``."""

    severity: str
    code: str
    location: str
    message: str

    def to_doc(self) -> dict:
        return {
            "severity": self.severity,
            "code": self.code,
            "location": self.location,
            "message": self.message,
        }


def error_item(code: str, location: str, message: str) -> ValidationItem:
    return ValidationItem("error", code, location, message)


def warning_item(code: str, location: str, message: str) -> ValidationItem:
    return ValidationItem("warning", code, location, message)


@dataclass(frozen=True)
class ValidationReport:
    """Aggregated findings; never raised, always returned."""

    items: tuple[ValidationItem, ...] = ()

    @property
    def errors(self) -> tuple[ValidationItem, ...]:
        return tuple(i for i in self.items if i.severity == "error")

    @property
    def warnings(self) -> tuple[ValidationItem, ...]:
        return tuple(i for i in self.items if i.severity == "warning")

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_doc(self) -> dict:
        return {
            "ok": self.ok,
            "errors": [i.to_doc() for i in self.errors],
            "warnings": [i.to_doc() for i in self.warnings],
        }


class AgentRiskError(Exception):
    """Base error; carries a machine-readable code and optional findings."""

    def __init__(self, code: str, message: str, items: tuple[ValidationItem, ...] = ()):
        super().__init__(message)
        self.code = code
        self.message = message
        self.items = tuple(items)

    def to_doc(self) -> dict:
        return {
            "error": {
                "code": self.code,
                "message": self.message,
                "items": [i.to_doc() for i in self.items],
            }
        }


class DocumentError(AgentRiskError):
    """A document failed to parse or validate; items hold every finding."""

    def __init__(self, items, message: str = "document is invalid"):
        items = tuple(items)
        code = items[0].code if len(items) == 1 else VALIDATION
        super().__init__(code, message, items)


class EngineError(AgentRiskError):
    """An operation precondition was violated."""


class ConflictError(AgentRiskError):
    """Optimistic-concurrency check failed: stale expected revision."""

    def __init__(self, message: str):
        super().__init__(CONFLICT, message)


class NotFoundError(AgentRiskError):
    def __init__(self, message: str):
        super().__init__(NOT_FOUND, message)


class StorageError(AgentRiskError):
    """Durable storage failed (I/O or corruption)."""
