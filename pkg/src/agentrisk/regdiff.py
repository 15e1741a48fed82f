"""Structural diffs between register versions, and their application.

A diff carries full payloads for additions, bare ids for removals, and
per-field old/new values for modifications (including register metadata),
which is exactly enough for ``apply_diff(old, diff) == new`` to hold.
Each id appears in at most one list per kind.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import INCONSISTENT_DIFF, EngineError
from .register import (
    Control,
    Risk,
    RiskRegister,
    _Issues,
    control_from_doc,
    control_to_doc,
    id_sort_key,
    risk_from_doc,
    risk_to_doc,
)

_META_FIELDS = ("name", "version", "taxonomy_version")


@dataclass(frozen=True)
class FieldChange:
    """One modified field with its document-encoded old and new values."""

    field: str
    old: object
    new: object


@dataclass(frozen=True)
class ModifiedEntry:
    id: str
    changes: tuple[FieldChange, ...]


@dataclass(frozen=True)
class RegisterDiff:
    meta_changes: tuple[FieldChange, ...] = ()
    added_risks: tuple[Risk, ...] = ()
    removed_risks: tuple[str, ...] = ()
    modified_risks: tuple[ModifiedEntry, ...] = ()
    added_controls: tuple[Control, ...] = ()
    removed_controls: tuple[str, ...] = ()
    modified_controls: tuple[ModifiedEntry, ...] = ()

    @property
    def is_empty(self) -> bool:
        return not (
            self.meta_changes
            or self.added_risks
            or self.removed_risks
            or self.modified_risks
            or self.added_controls
            or self.removed_controls
            or self.modified_controls
        )


def _entry_changes(old_doc: dict, new_doc: dict) -> tuple[FieldChange, ...]:
    changes = []
    for key in old_doc:
        if old_doc[key] != new_doc[key]:
            changes.append(FieldChange(key, old_doc[key], new_doc[key]))
    return tuple(changes)


def diff_registers(old: RiskRegister, new: RiskRegister) -> RegisterDiff:
    """Minimal per-id diff; pure and deterministic."""
    meta = tuple(
        FieldChange(f, getattr(old, f), getattr(new, f))
        for f in _META_FIELDS
        if getattr(old, f) != getattr(new, f)
    )

    old_risks = {r.id: r for r in old.risks}
    new_risks = {r.id: r for r in new.risks}
    added_risks = tuple(
        new_risks[i] for i in sorted(new_risks.keys() - old_risks.keys(), key=id_sort_key)
    )
    removed_risks = tuple(sorted(old_risks.keys() - new_risks.keys(), key=id_sort_key))
    modified_risks = []
    for rid in sorted(old_risks.keys() & new_risks.keys(), key=id_sort_key):
        changes = _entry_changes(risk_to_doc(old_risks[rid]), risk_to_doc(new_risks[rid]))
        if changes:
            modified_risks.append(ModifiedEntry(rid, changes))

    old_controls = {c.id: c for c in old.controls}
    new_controls = {c.id: c for c in new.controls}
    added_controls = tuple(
        new_controls[i]
        for i in sorted(new_controls.keys() - old_controls.keys(), key=id_sort_key)
    )
    removed_controls = tuple(
        sorted(old_controls.keys() - new_controls.keys(), key=id_sort_key)
    )
    modified_controls = []
    for cid in sorted(old_controls.keys() & new_controls.keys(), key=id_sort_key):
        changes = _entry_changes(
            control_to_doc(old_controls[cid]), control_to_doc(new_controls[cid])
        )
        if changes:
            modified_controls.append(ModifiedEntry(cid, changes))

    return RegisterDiff(
        meta,
        added_risks,
        removed_risks,
        tuple(modified_risks),
        added_controls,
        removed_controls,
        tuple(modified_controls),
    )


def _fail(message: str):
    raise EngineError(INCONSISTENT_DIFF, message)


def _apply_entry_changes(doc: dict, entry: ModifiedEntry, kind: str) -> dict:
    out = dict(doc)
    for change in entry.changes:
        if change.field not in doc:
            _fail(f"{kind} {entry.id}: unknown field {change.field!r}")
        if doc[change.field] != change.old:
            _fail(f"{kind} {entry.id}: field {change.field!r} does not match the diff's old value")
        out[change.field] = change.new
    return out


def apply_diff(old: RiskRegister, diff: RegisterDiff) -> RiskRegister:
    """Reconstruct the diff's target; EngineError on any id inconsistency."""
    meta = {f: getattr(old, f) for f in _META_FIELDS}
    for change in diff.meta_changes:
        if change.field not in meta:
            _fail(f"unknown register field {change.field!r}")
        if meta[change.field] != change.old:
            _fail(f"register field {change.field!r} does not match the diff's old value")
        meta[change.field] = change.new

    risks = {r.id: r for r in old.risks}
    for rid in diff.removed_risks:
        if rid not in risks:
            _fail(f"cannot remove {rid}: not in the register")
        del risks[rid]
    for risk in diff.added_risks:
        if risk.id in risks:
            _fail(f"cannot add {risk.id}: id already exists")
        risks[risk.id] = risk
    for entry in diff.modified_risks:
        if entry.id not in risks:
            _fail(f"cannot modify {entry.id}: not in the register")
        issues = _Issues()
        patched = risk_from_doc(
            _apply_entry_changes(risk_to_doc(risks[entry.id]), entry, "risk"),
            entry.id,
            issues,
        )
        if issues or patched is None:
            _fail(f"modifying {entry.id} produced an invalid risk")
        risks[entry.id] = patched

    controls = {c.id: c for c in old.controls}
    for cid in diff.removed_controls:
        if cid not in controls:
            _fail(f"cannot remove {cid}: not in the register")
        del controls[cid]
    for control in diff.added_controls:
        if control.id in controls:
            _fail(f"cannot add {control.id}: id already exists")
        controls[control.id] = control
    for entry in diff.modified_controls:
        if entry.id not in controls:
            _fail(f"cannot modify {entry.id}: not in the register")
        issues = _Issues()
        patched = control_from_doc(
            _apply_entry_changes(control_to_doc(controls[entry.id]), entry, "control"),
            entry.id,
            issues,
        )
        if issues or patched is None:
            _fail(f"modifying {entry.id} produced an invalid control")
        controls[entry.id] = patched

    return RiskRegister(
        meta["name"],
        meta["version"],
        meta["taxonomy_version"],
        tuple(risks.values()),
        tuple(controls.values()),
    )


def _change_doc(change: FieldChange) -> dict:
    return {"field": change.field, "old": change.old, "new": change.new}


def diff_to_doc(diff: RegisterDiff) -> dict:
    """Document form used by the CLI's structured output and the API."""
    return {
        "meta_changes": [_change_doc(c) for c in diff.meta_changes],
        "added_risks": [risk_to_doc(r) for r in diff.added_risks],
        "removed_risks": list(diff.removed_risks),
        "modified_risks": [
            {"id": e.id, "changes": [_change_doc(c) for c in e.changes]}
            for e in diff.modified_risks
        ],
        "added_controls": [control_to_doc(c) for c in diff.added_controls],
        "removed_controls": list(diff.removed_controls),
        "modified_controls": [
            {"id": e.id, "changes": [_change_doc(c) for c in e.changes]}
            for e in diff.modified_controls
        ],
    }
