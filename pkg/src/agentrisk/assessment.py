"""Assessment workflow: applicability, contextual ratings, relevance, controls.

An assessment is an immutable value; every mutating operation returns a new
value with ``revision`` incremented by one and the status recomputed.
Mutating operations optionally take ``expected_revision`` for optimistic
concurrency (pass None to skip the check in single-writer contexts; the
HTTP service always enforces it). A finalized assessment rejects every
mutation.

Applicability rule: component and design risks apply to every system; a
capability risk applies only when the profile declares that capability.
Relevance rule: a rated risk is relevant iff impact >= impact_min AND
likelihood >= likelihood_min (inclusive bounds, conjunctive).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from enum import Enum

from .errors import (
    CARDINAL_WAIVER,
    EMPTY_NOTE,
    FINALIZE_BLOCKED,
    FINALIZED_IMMUTABLE,
    INCOMPLETE_RATINGS,
    MISSING_APPROVER,
    MISSING_DISPOSITION,
    MISSING_JUSTIFICATION,
    NOT_APPLICABLE,
    OUT_OF_RANGE,
    SCHEMA,
    SYNTAX,
    UNACCEPTED_NOTE,
    UNKNOWN_CONTROL,
    UNKNOWN_NOTE,
    UNKNOWN_TOKEN,
    VERSION_MISMATCH,
    ConflictError,
    DocumentError,
    EngineError,
    ValidationItem,
    error_item,
)
from .register import (
    CapabilityProfile,
    RiskRegister,
    _Issues,
    _load_json,
    _normalize_id,
    canonical_json,
    id_sort_key,
    profile_from_doc,
    profile_to_doc,
)
from .taxonomy import TAXONOMY_VERSION, ComponentKind, DesignKind

RATING_MIN = 1
RATING_MAX = 5

IMPACT_SCALE = ("minimal", "minor", "moderate", "major", "catastrophic")
LIKELIHOOD_SCALE = ("very rare", "rare", "possible", "likely", "very likely")


class AssessmentStatus(str, Enum):
    DRAFT = "draft"
    RATINGS_COMPLETE = "ratings_complete"
    FINALIZED = "finalized"


class Disposition(str, Enum):
    ADOPTED = "adopted"
    ADAPTED = "adapted"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class RiskRating:
    """Impact and likelihood on the 1..5 scales, with the rater's reasoning."""

    risk_id: str
    impact: int
    likelihood: int
    rationale: str = ""


@dataclass(frozen=True)
class RelevanceThreshold:
    """Per-organization minimum for both dimensions."""

    impact_min: int
    likelihood_min: int


@dataclass(frozen=True)
class ResidualNote:
    text: str
    accepted: bool = False
    approver: str = ""
    follow_up_of: int | None = None


@dataclass(frozen=True)
class DispositionRecord:
    control_id: str
    disposition: Disposition
    justification: str = ""


@dataclass(frozen=True)
class ControlResolution:
    """A required control, the relevant risks that trigger it, and its fate.

    ``disposition`` is None while a level-1/2 control still needs an
    explicit decision; level-0 controls default to adopted.
    """

    control_id: str
    title: str
    level: int
    triggering_risk_ids: tuple[str, ...]
    disposition: Disposition | None
    justification: str = ""


@dataclass(frozen=True)
class WhatIfDelta:
    became_relevant: tuple[str, ...]
    became_irrelevant: tuple[str, ...]
    controls_added: tuple[str, ...]
    controls_removed: tuple[str, ...]


@dataclass(frozen=True)
class Assessment:
    id: str
    profile: CapabilityProfile
    register_ref: tuple[str, str]
    threshold: RelevanceThreshold
    applicable_risk_ids: tuple[str, ...]
    ratings: dict[str, RiskRating]
    dispositions: dict[str, DispositionRecord]
    residual_notes: tuple[ResidualNote, ...]
    status: AssessmentStatus
    revision: int

    @property
    def unrated_risk_ids(self) -> tuple[str, ...]:
        return tuple(r for r in self.applicable_risk_ids if r not in self.ratings)


def derive_applicable_risks(profile: CapabilityProfile, register: RiskRegister) -> list[str]:
    """Risk ids whose element set intersects the profile's scope, sorted.

    The scope is every component, every design aspect, and the declared
    capabilities; component and design risks therefore always apply.
    Monotone in the capability set.
    """
    scope = set(ComponentKind) | set(DesignKind) | set(profile.capabilities)
    out = [r.id for r in register.risks if r.elements & scope]
    out.sort(key=id_sort_key)
    return out


def _status_for(applicable: tuple[str, ...], ratings: dict[str, RiskRating]) -> AssessmentStatus:
    if all(r in ratings for r in applicable):
        return AssessmentStatus.RATINGS_COMPLETE
    return AssessmentStatus.DRAFT


def new_assessment(
    assessment_id: str,
    profile: CapabilityProfile,
    register: RiskRegister,
    threshold: RelevanceThreshold,
) -> Assessment:
    _check_threshold(threshold)
    applicable = tuple(derive_applicable_risks(profile, register))
    return Assessment(
        id=assessment_id,
        profile=profile,
        register_ref=register.ref,
        threshold=threshold,
        applicable_risk_ids=applicable,
        ratings={},
        dispositions={},
        residual_notes=(),
        status=_status_for(applicable, {}),
        revision=1,
    )


def _check_mutable(assessment: Assessment):
    if assessment.status is AssessmentStatus.FINALIZED:
        raise EngineError(
            FINALIZED_IMMUTABLE,
            f"assessment {assessment.id} is finalized and rejects mutations",
        )


def _check_revision(assessment: Assessment, expected_revision: int | None):
    if expected_revision is not None and expected_revision != assessment.revision:
        raise ConflictError(
            f"expected revision {expected_revision}, assessment is at {assessment.revision}"
        )


def _check_threshold(threshold: RelevanceThreshold):
    for name, value in (
        ("impact_min", threshold.impact_min),
        ("likelihood_min", threshold.likelihood_min),
    ):
        if not (isinstance(value, int) and RATING_MIN <= value <= RATING_MAX):
            raise EngineError(OUT_OF_RANGE, f"{name} must be an integer in 1..5, got {value!r}")


def _bump(assessment: Assessment, **changes) -> Assessment:
    out = replace(assessment, revision=assessment.revision + 1, **changes)
    if out.status is not AssessmentStatus.FINALIZED:
        out = replace(out, status=_status_for(out.applicable_risk_ids, out.ratings))
    return out


def rate_risk(
    assessment: Assessment, rating: RiskRating, expected_revision: int | None = None
) -> Assessment:
    """Upsert one risk's rating; the rationale is stored verbatim."""
    _check_mutable(assessment)
    _check_revision(assessment, expected_revision)
    for name, value in (("impact", rating.impact), ("likelihood", rating.likelihood)):
        if not (isinstance(value, int) and RATING_MIN <= value <= RATING_MAX):
            raise EngineError(
                OUT_OF_RANGE,
                f"{rating.risk_id}: {name} must be an integer in 1..5, got {value!r}",
            )
    if rating.risk_id not in assessment.applicable_risk_ids:
        raise EngineError(
            NOT_APPLICABLE, f"{rating.risk_id} is not applicable to this profile"
        )
    ratings = dict(assessment.ratings)
    ratings[rating.risk_id] = rating
    return _bump(assessment, ratings=ratings)


def set_threshold(
    assessment: Assessment,
    threshold: RelevanceThreshold,
    expected_revision: int | None = None,
) -> Assessment:
    _check_mutable(assessment)
    _check_revision(assessment, expected_revision)
    _check_threshold(threshold)
    return _bump(assessment, threshold=threshold)


def _require_complete(assessment: Assessment):
    missing = assessment.unrated_risk_ids
    if missing:
        raise EngineError(
            INCOMPLETE_RATINGS,
            "ratings incomplete: " + ", ".join(missing),
            tuple(
                error_item(INCOMPLETE_RATINGS, f"ratings.{rid}", f"{rid} is unrated")
                for rid in missing
            ),
        )


def _relevant(rating: RiskRating, threshold: RelevanceThreshold) -> bool:
    return rating.impact >= threshold.impact_min and rating.likelihood >= threshold.likelihood_min


def evaluate_relevance(assessment: Assessment) -> list[tuple[str, bool]]:
    """(risk_id, relevant) for every applicable risk, in id order.

    Unrated risks are a precondition failure, never a silent default.
    """
    _require_complete(assessment)
    return [
        (rid, _relevant(assessment.ratings[rid], assessment.threshold))
        for rid in assessment.applicable_risk_ids
    ]


def relevant_risk_ids(assessment: Assessment) -> list[str]:
    return [rid for rid, relevant in evaluate_relevance(assessment) if relevant]


def check_register_ref(assessment: Assessment, register: RiskRegister):
    if assessment.register_ref != register.ref:
        raise EngineError(
            VERSION_MISMATCH,
            f"assessment pins register {assessment.register_ref}, got {register.ref}",
        )


def resolve_controls(assessment: Assessment, register: RiskRegister) -> list[ControlResolution]:
    """The deduplicated union of controls attached to relevant risks.

    Sorted by (level ascending, id); each resolution lists every relevant
    risk that triggers it. Level-0 controls default to adopted; level-1/2
    controls carry None until explicitly dispositioned.
    """
    check_register_ref(assessment, register)
    relevant = set(relevant_risk_ids(assessment))
    resolutions = []
    for control in register.controls:
        triggering = sorted(control.risk_ids & relevant, key=id_sort_key)
        if not triggering:
            continue
        record = assessment.dispositions.get(control.id)
        if record is not None:
            disposition, justification = record.disposition, record.justification
        elif control.level == 0:
            disposition, justification = Disposition.ADOPTED, ""
        else:
            disposition, justification = None, ""
        resolutions.append(
            ControlResolution(
                control_id=control.id,
                title=control.title,
                level=control.level,
                triggering_risk_ids=tuple(triggering),
                disposition=disposition,
                justification=justification,
            )
        )
    resolutions.sort(key=lambda r: (r.level, id_sort_key(r.control_id)))
    return resolutions


def set_disposition(
    assessment: Assessment,
    control_id: str,
    disposition: Disposition,
    justification: str = "",
    register: RiskRegister | None = None,
    expected_revision: int | None = None,
) -> Assessment:
    """Record an adopt/adapt/waive decision for a resolved control.

    Level-0 (cardinal) controls may not be waived; a waiver on level 1/2
    requires a non-empty justification. When the register is supplied the
    control must be among the currently resolved set.
    """
    _check_mutable(assessment)
    _check_revision(assessment, expected_revision)
    level = None
    if register is not None:
        resolved = {r.control_id: r for r in resolve_controls(assessment, register)}
        if control_id not in resolved:
            raise EngineError(
                UNKNOWN_CONTROL, f"{control_id} is not resolved for this assessment"
            )
        level = resolved[control_id].level
    if disposition is Disposition.NOT_APPLICABLE:
        if level == 0:
            raise EngineError(CARDINAL_WAIVER, f"{control_id}: cardinal control may not be waived")
        if not justification.strip():
            raise EngineError(
                MISSING_JUSTIFICATION,
                f"{control_id}: waiving a control requires a justification",
            )
    dispositions = dict(assessment.dispositions)
    dispositions[control_id] = DispositionRecord(control_id, disposition, justification)
    return _bump(assessment, dispositions=dispositions)


def record_residual_note(
    assessment: Assessment,
    text: str,
    accepted: bool = False,
    approver: str = "",
    follow_up_of: int | None = None,
    expected_revision: int | None = None,
) -> Assessment:
    """Append a residual-risk note; notes are indexed by position."""
    _check_mutable(assessment)
    _check_revision(assessment, expected_revision)
    if not text.strip():
        raise EngineError(EMPTY_NOTE, "residual note text must not be empty")
    if follow_up_of is not None and not (0 <= follow_up_of < len(assessment.residual_notes)):
        raise EngineError(UNKNOWN_NOTE, f"no residual note at index {follow_up_of}")
    note = ResidualNote(text, accepted, approver, follow_up_of)
    return _bump(assessment, residual_notes=assessment.residual_notes + (note,))


def accept_residual_note(
    assessment: Assessment,
    index: int,
    approver: str,
    expected_revision: int | None = None,
) -> Assessment:
    _check_mutable(assessment)
    _check_revision(assessment, expected_revision)
    if not (0 <= index < len(assessment.residual_notes)):
        raise EngineError(UNKNOWN_NOTE, f"no residual note at index {index}")
    if not approver.strip():
        raise EngineError(MISSING_APPROVER, "accepting a note requires an approver")
    notes = list(assessment.residual_notes)
    notes[index] = replace(notes[index], accepted=True, approver=approver)
    return _bump(assessment, residual_notes=tuple(notes))


def _unresolved_notes(assessment: Assessment) -> list[int]:
    followed_up = {
        n.follow_up_of for n in assessment.residual_notes if n.follow_up_of is not None
    }
    return [
        i
        for i, note in enumerate(assessment.residual_notes)
        if not note.accepted and i not in followed_up
    ]


def finalize(
    assessment: Assessment, register: RiskRegister, expected_revision: int | None = None
) -> Assessment:
    """Move to the immutable finalized state; unmet preconditions are
    reported individually."""
    _check_mutable(assessment)
    _check_revision(assessment, expected_revision)
    check_register_ref(assessment, register)
    items: list[ValidationItem] = []
    for rid in assessment.unrated_risk_ids:
        items.append(error_item(INCOMPLETE_RATINGS, f"ratings.{rid}", f"{rid} is unrated"))
    if not items:
        for res in resolve_controls(assessment, register):
            loc = f"dispositions.{res.control_id}"
            if res.level == 0 and res.disposition is Disposition.NOT_APPLICABLE:
                items.append(
                    error_item(
                        CARDINAL_WAIVER, loc, f"{res.control_id}: cardinal control may not be waived"
                    )
                )
            elif res.disposition is None:
                items.append(
                    error_item(
                        MISSING_DISPOSITION,
                        loc,
                        f"{res.control_id}: level-{res.level} control needs a disposition",
                    )
                )
            elif res.disposition is Disposition.NOT_APPLICABLE and not res.justification.strip():
                items.append(
                    error_item(
                        MISSING_JUSTIFICATION,
                        loc,
                        f"{res.control_id}: waiver lacks a justification",
                    )
                )
    for i in _unresolved_notes(assessment):
        items.append(
            error_item(
                UNACCEPTED_NOTE,
                f"residual_notes[{i}]",
                f"note {i} is neither accepted nor followed up",
            )
        )
    if items:
        raise EngineError(FINALIZE_BLOCKED, "assessment cannot be finalized", tuple(items))
    return replace(
        assessment, status=AssessmentStatus.FINALIZED, revision=assessment.revision + 1
    )


def what_if(
    assessment: Assessment, register: RiskRegister, candidate: RelevanceThreshold
) -> WhatIfDelta:
    """Relevance and control deltas if the threshold were ``candidate``.

    Pure: the assessment is unchanged. Requires complete ratings.
    """
    check_register_ref(assessment, register)
    _check_threshold(candidate)
    current = assessment
    moved = replace(assessment, threshold=candidate)
    rel_now = set(relevant_risk_ids(current))
    rel_then = set(relevant_risk_ids(moved))
    controls_now = {r.control_id for r in resolve_controls(current, register)}
    controls_then = {r.control_id for r in resolve_controls(moved, register)}
    return WhatIfDelta(
        became_relevant=tuple(sorted(rel_then - rel_now, key=id_sort_key)),
        became_irrelevant=tuple(sorted(rel_now - rel_then, key=id_sort_key)),
        controls_added=tuple(sorted(controls_then - controls_now, key=id_sort_key)),
        controls_removed=tuple(sorted(controls_now - controls_then, key=id_sort_key)),
    )


# --- document encoding / decoding ---------------------------------------


def rating_to_doc(rating: RiskRating) -> dict:
    return {
        "risk_id": rating.risk_id,
        "impact": rating.impact,
        "likelihood": rating.likelihood,
        "rationale": rating.rationale,
    }


def assessment_to_doc(assessment: Assessment) -> dict:
    return {
        "id": assessment.id,
        "taxonomy_version": TAXONOMY_VERSION,
        "register_ref": {
            "name": assessment.register_ref[0],
            "version": assessment.register_ref[1],
        },
        "profile": profile_to_doc(assessment.profile),
        "threshold": {
            "impact_min": assessment.threshold.impact_min,
            "likelihood_min": assessment.threshold.likelihood_min,
        },
        "applicable_risk_ids": list(assessment.applicable_risk_ids),
        "ratings": [
            rating_to_doc(assessment.ratings[rid])
            for rid in sorted(assessment.ratings, key=id_sort_key)
        ],
        "dispositions": [
            {
                "control_id": cid,
                "disposition": assessment.dispositions[cid].disposition.value,
                "justification": assessment.dispositions[cid].justification,
            }
            for cid in sorted(assessment.dispositions, key=id_sort_key)
        ],
        "residual_notes": [
            {
                "text": n.text,
                "accepted": n.accepted,
                "approver": n.approver,
                "follow_up_of": n.follow_up_of,
            }
            for n in assessment.residual_notes
        ],
        "status": assessment.status.value,
        "revision": assessment.revision,
    }


def serialize_assessment(assessment: Assessment) -> str:
    return canonical_json(assessment_to_doc(assessment))


_ASSESSMENT_KEYS = (
    "id",
    "taxonomy_version",
    "register_ref",
    "profile",
    "threshold",
    "applicable_risk_ids",
    "ratings",
    "dispositions",
    "residual_notes",
    "status",
    "revision",
)


def _int_in_range(value, lo: int, hi: int) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and lo <= value <= hi


def assessment_from_doc(doc: dict) -> Assessment:
    issues = _Issues()
    if not isinstance(doc, dict):
        raise DocumentError([error_item(SCHEMA, "$", "assessment must be an object")])
    for key in doc:
        if key not in _ASSESSMENT_KEYS:
            issues.error(SCHEMA, key, f"unknown key '{key}'")

    assessment_id = doc.get("id")
    if not isinstance(assessment_id, str) or not assessment_id:
        issues.error(SCHEMA, "id", "'id' must be a non-empty string")
        assessment_id = ""

    ref = doc.get("register_ref")
    if not (
        isinstance(ref, dict)
        and isinstance(ref.get("name"), str)
        and isinstance(ref.get("version"), str)
    ):
        issues.error(SCHEMA, "register_ref", "register_ref needs string name and version")
        ref = {"name": "", "version": ""}

    raw_profile = doc.get("profile")
    if not isinstance(raw_profile, dict):
        issues.error(SCHEMA, "profile", "profile must be an object")
        raw_profile = {"system_name": "", "description": "", "capabilities": []}
    profile_issues = _Issues()
    profile = profile_from_doc(raw_profile, profile_issues)
    for item in profile_issues.items:
        issues.items.append(
            error_item(item.code, f"profile.{item.location}", item.message)
        )

    raw_threshold = doc.get("threshold")
    if not isinstance(raw_threshold, dict):
        issues.error(SCHEMA, "threshold", "threshold must be an object")
        raw_threshold = {}
    impact_min = raw_threshold.get("impact_min")
    likelihood_min = raw_threshold.get("likelihood_min")
    if not _int_in_range(impact_min, RATING_MIN, RATING_MAX):
        issues.error(OUT_OF_RANGE, "threshold.impact_min", "impact_min must be in 1..5")
        impact_min = RATING_MIN
    if not _int_in_range(likelihood_min, RATING_MIN, RATING_MAX):
        issues.error(OUT_OF_RANGE, "threshold.likelihood_min", "likelihood_min must be in 1..5")
        likelihood_min = RATING_MIN

    applicable: list[str] = []
    raw_applicable = doc.get("applicable_risk_ids")
    if not isinstance(raw_applicable, list):
        issues.error(SCHEMA, "applicable_risk_ids", "must be a list of risk ids")
        raw_applicable = []
    for i, value in enumerate(raw_applicable):
        rid = _normalize_id("RISK", value) if isinstance(value, str) else None
        if rid is None:
            issues.error(SCHEMA, f"applicable_risk_ids[{i}]", f"bad risk id {value!r}")
        else:
            applicable.append(rid)
    applicable.sort(key=id_sort_key)

    ratings: dict[str, RiskRating] = {}
    raw_ratings = doc.get("ratings", [])
    if not isinstance(raw_ratings, list):
        issues.error(SCHEMA, "ratings", "ratings must be a list")
        raw_ratings = []
    for i, row in enumerate(raw_ratings):
        loc = f"ratings[{i}]"
        if not isinstance(row, dict):
            issues.error(SCHEMA, loc, "rating must be an object")
            continue
        rid = row.get("risk_id")
        rid = _normalize_id("RISK", rid) if isinstance(rid, str) else None
        if rid is None:
            issues.error(SCHEMA, f"{loc}.risk_id", "bad risk id")
            continue
        if rid not in applicable:
            issues.error(NOT_APPLICABLE, f"{loc}.risk_id", f"{rid} is not applicable")
            continue
        impact, likelihood = row.get("impact"), row.get("likelihood")
        if not _int_in_range(impact, RATING_MIN, RATING_MAX):
            issues.error(OUT_OF_RANGE, f"{loc}.impact", f"{rid}: impact must be in 1..5")
            continue
        if not _int_in_range(likelihood, RATING_MIN, RATING_MAX):
            issues.error(OUT_OF_RANGE, f"{loc}.likelihood", f"{rid}: likelihood must be in 1..5")
            continue
        rationale = row.get("rationale", "")
        if not isinstance(rationale, str):
            issues.error(SCHEMA, f"{loc}.rationale", "rationale must be a string")
            rationale = ""
        ratings[rid] = RiskRating(rid, impact, likelihood, rationale)

    dispositions: dict[str, DispositionRecord] = {}
    raw_dispositions = doc.get("dispositions", [])
    if not isinstance(raw_dispositions, list):
        issues.error(SCHEMA, "dispositions", "dispositions must be a list")
        raw_dispositions = []
    for i, row in enumerate(raw_dispositions):
        loc = f"dispositions[{i}]"
        if not isinstance(row, dict):
            issues.error(SCHEMA, loc, "disposition must be an object")
            continue
        cid = row.get("control_id")
        cid = _normalize_id("CTRL", cid) if isinstance(cid, str) else None
        if cid is None:
            issues.error(SCHEMA, f"{loc}.control_id", "bad control id")
            continue
        try:
            disposition = Disposition(row.get("disposition"))
        except ValueError:
            issues.error(UNKNOWN_TOKEN, f"{loc}.disposition", "unknown disposition")
            continue
        justification = row.get("justification", "")
        if not isinstance(justification, str):
            issues.error(SCHEMA, f"{loc}.justification", "justification must be a string")
            justification = ""
        dispositions[cid] = DispositionRecord(cid, disposition, justification)

    notes: list[ResidualNote] = []
    raw_notes = doc.get("residual_notes", [])
    if not isinstance(raw_notes, list):
        issues.error(SCHEMA, "residual_notes", "residual_notes must be a list")
        raw_notes = []
    for i, row in enumerate(raw_notes):
        loc = f"residual_notes[{i}]"
        if not isinstance(row, dict):
            issues.error(SCHEMA, loc, "note must be an object")
            continue
        text = row.get("text")
        if not isinstance(text, str) or not text.strip():
            issues.error(EMPTY_NOTE, f"{loc}.text", "note text must be a non-empty string")
            continue
        accepted = row.get("accepted", False)
        approver = row.get("approver", "")
        follow_up_of = row.get("follow_up_of")
        if not isinstance(accepted, bool):
            issues.error(SCHEMA, f"{loc}.accepted", "accepted must be a boolean")
            accepted = False
        if not isinstance(approver, str):
            issues.error(SCHEMA, f"{loc}.approver", "approver must be a string")
            approver = ""
        if follow_up_of is not None and not (
            isinstance(follow_up_of, int) and 0 <= follow_up_of < i
        ):
            issues.error(UNKNOWN_NOTE, f"{loc}.follow_up_of", "must index an earlier note")
            follow_up_of = None
        notes.append(ResidualNote(text, accepted, approver, follow_up_of))

    status_token = doc.get("status", AssessmentStatus.DRAFT.value)
    try:
        status = AssessmentStatus(status_token)
    except ValueError:
        issues.error(UNKNOWN_TOKEN, "status", f"unknown status {status_token!r}")
        status = AssessmentStatus.DRAFT

    revision = doc.get("revision", 1)
    if not (isinstance(revision, int) and not isinstance(revision, bool) and revision >= 1):
        issues.error(SCHEMA, "revision", "revision must be a positive integer")
        revision = 1

    # Draft/complete is recomputed from the ratings; finalized must be
    # internally consistent.
    computed = _status_for(tuple(applicable), ratings)
    if status is AssessmentStatus.FINALIZED:
        if computed is not AssessmentStatus.RATINGS_COMPLETE:
            issues.error(
                INCOMPLETE_RATINGS, "status", "finalized assessment has unrated risks"
            )
    else:
        status = computed

    if issues:
        raise DocumentError(issues.items)
    return Assessment(
        id=assessment_id,
        profile=profile,
        register_ref=(ref["name"], ref["version"]),
        threshold=RelevanceThreshold(impact_min, likelihood_min),
        applicable_risk_ids=tuple(applicable),
        ratings=ratings,
        dispositions=dispositions,
        residual_notes=tuple(notes),
        status=status,
        revision=revision,
    )


def parse_assessment(text: str) -> Assessment:
    return assessment_from_doc(_load_json(text))


def parse_ratings_file(text: str) -> list[RiskRating]:
    """Batch ratings: a JSON array with one row per risk id."""
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(
            [error_item(SYNTAX, f"line {exc.lineno} column {exc.colno}", exc.msg)]
        ) from exc
    if not isinstance(rows, list):
        raise DocumentError([error_item(SCHEMA, "$", "ratings file must be a JSON array")])
    issues = _Issues()
    out: list[RiskRating] = []
    for i, row in enumerate(rows):
        loc = f"[{i}]"
        if not isinstance(row, dict):
            issues.error(SCHEMA, loc, "row must be an object")
            continue
        rid = row.get("risk_id")
        rid = _normalize_id("RISK", rid) if isinstance(rid, str) else None
        if rid is None:
            issues.error(SCHEMA, f"{loc}.risk_id", f"row {i}: bad risk id")
            continue
        impact, likelihood = row.get("impact"), row.get("likelihood")
        if not _int_in_range(impact, RATING_MIN, RATING_MAX):
            issues.error(OUT_OF_RANGE, f"{loc}.impact", f"row {i} ({rid}): impact must be in 1..5")
            continue
        if not _int_in_range(likelihood, RATING_MIN, RATING_MAX):
            issues.error(
                OUT_OF_RANGE, f"{loc}.likelihood", f"row {i} ({rid}): likelihood must be in 1..5"
            )
            continue
        rationale = row.get("rationale", "")
        if not isinstance(rationale, str):
            rationale = ""
        out.append(RiskRating(rid, impact, likelihood, rationale))
    if issues:
        raise DocumentError(issues.items)
    return out


def resolution_to_doc(res: ControlResolution) -> dict:
    return {
        "control_id": res.control_id,
        "title": res.title,
        "level": res.level,
        "triggering_risk_ids": list(res.triggering_risk_ids),
        "disposition": res.disposition.value if res.disposition else None,
        "justification": res.justification,
    }


def whatif_to_doc(delta: WhatIfDelta) -> dict:
    return {
        "became_relevant": list(delta.became_relevant),
        "became_irrelevant": list(delta.became_irrelevant),
        "control_delta": {
            "added": list(delta.controls_added),
            "removed": list(delta.controls_removed),
        },
    }
