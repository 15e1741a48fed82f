"""Risk-register and capability-profile documents.

The on-disk format is canonical JSON: documented key order, two-space
indent, risks and controls sorted by numeric id, element / failure-mode /
hazard sets in catalog order, trailing newline. ``parse`` accepts any key
order and id digit widths (``RISK-7`` normalizes to ``RISK-007``);
``serialize`` always emits the canonical form, so serialize(parse(text)) is
a normalizing projection and parse(serialize(register)) is the identity.

Parsing never returns a partial register: any finding aborts with a
:class:`DocumentError` carrying every item found.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .errors import (
    BAD_ID,
    DANGLING_REFERENCE,
    DUPLICATE_ID,
    NO_EVIDENCE,
    NOT_WELL_FORMED,
    SCHEMA,
    SYNTAX,
    UNCONTROLLED_RISK,
    UNKNOWN_TOKEN,
    DocumentError,
    ValidationItem,
    ValidationReport,
    error_item,
    warning_item,
)
from .taxonomy import (
    TAXONOMY_VERSION,
    CapabilityKind,
    Element,
    FailureMode,
    HazardCategory,
    element_from_token,
    sort_elements,
    sort_failure_modes,
    sort_hazards,
)

RISK_ID_RE = re.compile(r"RISK-(\d+)")
CTRL_ID_RE = re.compile(r"CTRL-(\d+)")

CONTROL_LEVELS = (0, 1, 2)

# "all" in a hazards list expands to every category.
HAZARD_ALL = "all"


def canonical_json(doc) -> str:
    """Render a document dict in the canonical byte form."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _normalize_id(prefix: str, value: str) -> str | None:
    """``RISK-7`` -> ``RISK-007``; None when the shape is wrong."""
    match = re.fullmatch(rf"{prefix}-(\d+)", value)
    if not match:
        return None
    return f"{prefix}-{int(match.group(1)):03d}"


def id_sort_key(entity_id: str) -> tuple[int, str]:
    match = re.search(r"(\d+)$", entity_id)
    return (int(match.group(1)) if match else 0, entity_id)


@dataclass(frozen=True)
class Risk:
    """One register entry tying elements x failure modes x hazards."""

    id: str
    title: str
    description: str
    elements: frozenset[Element]
    failure_modes: frozenset[FailureMode]
    hazards: frozenset[HazardCategory]
    references: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "elements", frozenset(self.elements))
        object.__setattr__(self, "failure_modes", frozenset(self.failure_modes))
        object.__setattr__(self, "hazards", frozenset(self.hazards))
        object.__setattr__(self, "references", tuple(self.references))


@dataclass(frozen=True)
class Control:
    """A technical mitigation: level 0 cardinal, 1 standard, 2 best practice."""

    id: str
    title: str
    description: str
    level: int
    risk_ids: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "risk_ids", frozenset(self.risk_ids))


@dataclass(frozen=True)
class RiskRegister:
    """Versioned reference list of risks and their controls.

    Risks and controls are kept sorted by numeric id, so two registers with
    the same content compare equal regardless of construction order.
    """

    name: str
    version: str
    taxonomy_version: str
    risks: tuple[Risk, ...] = ()
    controls: tuple[Control, ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "risks", tuple(sorted(self.risks, key=lambda r: id_sort_key(r.id)))
        )
        object.__setattr__(
            self,
            "controls",
            tuple(sorted(self.controls, key=lambda c: id_sort_key(c.id))),
        )

    def risk_by_id(self, risk_id: str) -> Risk | None:
        for risk in self.risks:
            if risk.id == risk_id:
                return risk
        return None

    def control_by_id(self, control_id: str) -> Control | None:
        for control in self.controls:
            if control.id == control_id:
                return control
        return None

    def controls_for_risk(self, risk_id: str) -> tuple[Control, ...]:
        return tuple(c for c in self.controls if risk_id in c.risk_ids)

    @property
    def ref(self) -> tuple[str, str]:
        return (self.name, self.version)


@dataclass(frozen=True)
class ProfileContext:
    """Free-text context informing the human rater; no automated scoring."""

    domain: str = ""
    use_case: str = ""
    data_sensitivity: str = ""
    system_criticality: str = ""


@dataclass(frozen=True)
class CapabilityProfile:
    """A system-under-assessment's declared capabilities plus metadata."""

    system_name: str
    description: str
    capabilities: frozenset[CapabilityKind]
    context: ProfileContext = ProfileContext()

    def __post_init__(self):
        object.__setattr__(self, "capabilities", frozenset(self.capabilities))


def well_formed(risk: Risk) -> ValidationReport:
    """Check the three well-formedness clauses every risk must satisfy.

    A risk passes iff it names at least one element, at least one failure
    mode, and at least one hazard. Violated clauses are reported by name.
    """
    items: list[ValidationItem] = []
    if not risk.elements:
        items.append(error_item(NOT_WELL_FORMED, "elements", "no element"))
    if not risk.failure_modes:
        items.append(error_item(NOT_WELL_FORMED, "failure_modes", "no failure mode"))
    if not risk.hazards:
        items.append(error_item(NOT_WELL_FORMED, "hazards", "no hazard"))
    return ValidationReport(tuple(items))


# --- document encoding -------------------------------------------------


def risk_to_doc(risk: Risk) -> dict:
    return {
        "id": risk.id,
        "title": risk.title,
        "description": risk.description,
        "elements": [e.value for e in sort_elements(risk.elements)],
        "failure_modes": [m.value for m in sort_failure_modes(risk.failure_modes)],
        "hazards": [h.value for h in sort_hazards(risk.hazards)],
        "references": list(risk.references),
    }


def control_to_doc(control: Control) -> dict:
    return {
        "id": control.id,
        "title": control.title,
        "description": control.description,
        "level": control.level,
        "risk_ids": sorted(control.risk_ids, key=id_sort_key),
    }


def register_to_doc(register: RiskRegister) -> dict:
    return {
        "name": register.name,
        "version": register.version,
        "taxonomy_version": register.taxonomy_version,
        "risks": [risk_to_doc(r) for r in register.risks],
        "controls": [control_to_doc(c) for c in register.controls],
    }


def profile_to_doc(profile: CapabilityProfile) -> dict:
    caps = sort_elements(profile.capabilities)
    return {
        "system_name": profile.system_name,
        "description": profile.description,
        "taxonomy_version": TAXONOMY_VERSION,
        "capabilities": [c.value for c in caps],
        "context": {
            "domain": profile.context.domain,
            "use_case": profile.context.use_case,
            "data_sensitivity": profile.context.data_sensitivity,
            "system_criticality": profile.context.system_criticality,
        },
    }


def serialize_register(register: RiskRegister) -> str:
    """Canonical text form; a pure function of the register value."""
    return canonical_json(register_to_doc(register))


def serialize_profile(profile: CapabilityProfile) -> str:
    return canonical_json(profile_to_doc(profile))


# --- document decoding -------------------------------------------------


class _Issues:
    """Accumulates findings during a parse walk."""

    def __init__(self):
        self.items: list[ValidationItem] = []

    def error(self, code: str, location: str, message: str):
        self.items.append(error_item(code, location, message))

    def __bool__(self):
        return bool(self.items)


def _require_str(doc: dict, key: str, loc: str, issues: _Issues) -> str:
    value = doc.get(key)
    if not isinstance(value, str):
        issues.error(SCHEMA, f"{loc}.{key}" if loc else key, f"'{key}' must be a string")
        return ""
    return value


def _check_keys(doc: dict, allowed: tuple[str, ...], loc: str, issues: _Issues):
    for key in doc:
        if key not in allowed:
            issues.error(SCHEMA, f"{loc}.{key}" if loc else key, f"unknown key '{key}'")


def _load_json(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(
            [error_item(SYNTAX, f"line {exc.lineno} column {exc.colno}", exc.msg)]
        ) from exc
    if not isinstance(doc, dict):
        raise DocumentError([error_item(SCHEMA, "$", "document must be an object")])
    return doc


def _parse_element_list(value, loc: str, issues: _Issues) -> frozenset[Element]:
    if not isinstance(value, list):
        issues.error(SCHEMA, loc, "must be a list of element tokens")
        return frozenset()
    out = set()
    for i, token in enumerate(value):
        try:
            out.add(element_from_token(token))
        except (KeyError, TypeError):
            issues.error(UNKNOWN_TOKEN, f"{loc}[{i}]", f"unknown element token {token!r}")
    return frozenset(out)


def _parse_mode_list(value, loc: str, issues: _Issues) -> frozenset[FailureMode]:
    if not isinstance(value, list):
        issues.error(SCHEMA, loc, "must be a list of failure-mode tokens")
        return frozenset()
    out = set()
    for i, token in enumerate(value):
        try:
            out.add(FailureMode(token))
        except ValueError:
            issues.error(
                UNKNOWN_TOKEN, f"{loc}[{i}]", f"unknown failure-mode token {token!r}"
            )
    return frozenset(out)


def _parse_hazard_list(value, loc: str, issues: _Issues) -> frozenset[HazardCategory]:
    # The shorthand "all" (alone or inside the list) expands to all 9.
    if value == HAZARD_ALL:
        return frozenset(HazardCategory)
    if not isinstance(value, list):
        issues.error(SCHEMA, loc, "must be a list of hazard tokens or \"all\"")
        return frozenset()
    out: set[HazardCategory] = set()
    for i, token in enumerate(value):
        if token == HAZARD_ALL:
            out.update(HazardCategory)
            continue
        try:
            out.add(HazardCategory(token))
        except ValueError:
            issues.error(UNKNOWN_TOKEN, f"{loc}[{i}]", f"unknown hazard token {token!r}")
    return frozenset(out)


def _parse_id(value, prefix: str, loc: str, issues: _Issues) -> str | None:
    if not isinstance(value, str):
        issues.error(SCHEMA, loc, "id must be a string")
        return None
    normalized = _normalize_id(prefix, value)
    if normalized is None:
        issues.error(BAD_ID, loc, f"id {value!r} does not match {prefix}-<digits>")
    return normalized


_RISK_KEYS = ("id", "title", "description", "elements", "failure_modes", "hazards", "references")


def risk_from_doc(doc, loc: str, issues: _Issues) -> Risk | None:
    if not isinstance(doc, dict):
        issues.error(SCHEMA, loc, "risk must be an object")
        return None
    _check_keys(doc, _RISK_KEYS, loc, issues)
    risk_id = _parse_id(doc.get("id"), "RISK", f"{loc}.id", issues)
    title = _require_str(doc, "title", loc, issues)
    description = _require_str(doc, "description", loc, issues)
    elements = _parse_element_list(doc.get("elements", []), f"{loc}.elements", issues)
    modes = _parse_mode_list(doc.get("failure_modes", []), f"{loc}.failure_modes", issues)
    hazards = _parse_hazard_list(doc.get("hazards", []), f"{loc}.hazards", issues)
    references = doc.get("references", [])
    if not (isinstance(references, list) and all(isinstance(r, str) for r in references)):
        issues.error(SCHEMA, f"{loc}.references", "references must be a list of strings")
        references = []
    if risk_id is None:
        return None
    risk = Risk(risk_id, title, description, elements, modes, hazards, tuple(references))
    for item in well_formed(risk).errors:
        issues.error(NOT_WELL_FORMED, f"{loc}.{item.location}", f"{risk.id}: {item.message}")
    return risk


_CONTROL_KEYS = ("id", "title", "description", "level", "risk_ids")


def control_from_doc(doc, loc: str, issues: _Issues) -> Control | None:
    if not isinstance(doc, dict):
        issues.error(SCHEMA, loc, "control must be an object")
        return None
    _check_keys(doc, _CONTROL_KEYS, loc, issues)
    control_id = _parse_id(doc.get("id"), "CTRL", f"{loc}.id", issues)
    title = _require_str(doc, "title", loc, issues)
    description = _require_str(doc, "description", loc, issues)
    level = doc.get("level")
    if not (isinstance(level, int) and not isinstance(level, bool) and level in CONTROL_LEVELS):
        issues.error(SCHEMA, f"{loc}.level", "level must be 0, 1, or 2")
        level = 0
    raw_ids = doc.get("risk_ids")
    risk_ids: list[str] = []
    if not isinstance(raw_ids, list) or not raw_ids:
        issues.error(SCHEMA, f"{loc}.risk_ids", "risk_ids must be a non-empty list")
    else:
        for i, value in enumerate(raw_ids):
            rid = _parse_id(value, "RISK", f"{loc}.risk_ids[{i}]", issues)
            if rid is not None:
                risk_ids.append(rid)
    if control_id is None:
        return None
    return Control(control_id, title, description, level, frozenset(risk_ids))


_REGISTER_KEYS = ("name", "version", "taxonomy_version", "risks", "controls")


def parse_register(text: str) -> RiskRegister:
    """Parse a register document; raise DocumentError with every finding."""
    doc = _load_json(text)
    issues = _Issues()
    _check_keys(doc, _REGISTER_KEYS, "", issues)
    name = _require_str(doc, "name", "", issues)
    version = _require_str(doc, "version", "", issues)
    taxonomy_version = _require_str(doc, "taxonomy_version", "", issues)

    risks: list[Risk] = []
    seen_risk_ids: set[str] = set()
    raw_risks = doc.get("risks")
    if not isinstance(raw_risks, list):
        issues.error(SCHEMA, "risks", "risks must be a list")
        raw_risks = []
    for i, item in enumerate(raw_risks):
        risk = risk_from_doc(item, f"risks[{i}]", issues)
        if risk is None:
            continue
        if risk.id in seen_risk_ids:
            issues.error(DUPLICATE_ID, f"risks[{i}].id", f"duplicate risk id {risk.id}")
            continue
        seen_risk_ids.add(risk.id)
        risks.append(risk)

    controls: list[Control] = []
    seen_control_ids: set[str] = set()
    raw_controls = doc.get("controls")
    if not isinstance(raw_controls, list):
        issues.error(SCHEMA, "controls", "controls must be a list")
        raw_controls = []
    for i, item in enumerate(raw_controls):
        control = control_from_doc(item, f"controls[{i}]", issues)
        if control is None:
            continue
        if control.id in seen_control_ids:
            issues.error(
                DUPLICATE_ID, f"controls[{i}].id", f"duplicate control id {control.id}"
            )
            continue
        seen_control_ids.add(control.id)
        controls.append(control)
        for rid in sorted(control.risk_ids, key=id_sort_key):
            if rid not in seen_risk_ids:
                issues.error(
                    DANGLING_REFERENCE,
                    f"controls[{i}].risk_ids",
                    f"{control.id} references {rid} which is not in the register",
                )

    if issues:
        raise DocumentError(issues.items)
    return RiskRegister(name, version, taxonomy_version, tuple(risks), tuple(controls))


_PROFILE_KEYS = ("system_name", "description", "taxonomy_version", "capabilities", "context")
_CONTEXT_KEYS = ("domain", "use_case", "data_sensitivity", "system_criticality")


def profile_from_doc(doc: dict, issues: _Issues) -> CapabilityProfile:
    _check_keys(doc, _PROFILE_KEYS, "", issues)
    system_name = _require_str(doc, "system_name", "", issues)
    description = _require_str(doc, "description", "", issues)
    if "taxonomy_version" in doc:
        _require_str(doc, "taxonomy_version", "", issues)
    capabilities: set[CapabilityKind] = set()
    raw_caps = doc.get("capabilities")
    if not isinstance(raw_caps, list):
        issues.error(SCHEMA, "capabilities", "capabilities must be a list")
        raw_caps = []
    for i, token in enumerate(raw_caps):
        try:
            capabilities.add(CapabilityKind(token))
        except ValueError:
            issues.error(
                UNKNOWN_TOKEN, f"capabilities[{i}]", f"unknown capability token {token!r}"
            )
    raw_context = doc.get("context", {})
    if not isinstance(raw_context, dict):
        issues.error(SCHEMA, "context", "context must be an object")
        raw_context = {}
    _check_keys(raw_context, _CONTEXT_KEYS, "context", issues)
    fields = {}
    for key in _CONTEXT_KEYS:
        value = raw_context.get(key, "")
        if not isinstance(value, str):
            issues.error(SCHEMA, f"context.{key}", f"'{key}' must be a string")
            value = ""
        fields[key] = value
    return CapabilityProfile(
        system_name, description, frozenset(capabilities), ProfileContext(**fields)
    )


def parse_profile(text: str) -> CapabilityProfile:
    doc = _load_json(text)
    issues = _Issues()
    profile = profile_from_doc(doc, issues)
    if issues:
        raise DocumentError(issues.items)
    return profile


# --- validation ---------------------------------------------------------


def validate_register(register: RiskRegister) -> ValidationReport:
    """Report invariant violations as errors and advisory findings as warnings.

    Warnings: a risk no control mitigates, and a risk with no supporting
    evidence reference.
    """
    items: list[ValidationItem] = []
    seen: set[str] = set()
    controlled: set[str] = set()
    for control in register.controls:
        controlled.update(control.risk_ids)

    for i, risk in enumerate(register.risks):
        loc = f"risks[{i}]"
        if not re.fullmatch(r"RISK-\d{3,}", risk.id):
            items.append(error_item(BAD_ID, f"{loc}.id", f"bad risk id {risk.id!r}"))
        if risk.id in seen:
            items.append(error_item(DUPLICATE_ID, f"{loc}.id", f"duplicate risk id {risk.id}"))
        seen.add(risk.id)
        for finding in well_formed(risk).errors:
            items.append(
                error_item(
                    NOT_WELL_FORMED,
                    f"{loc}.{finding.location}",
                    f"{risk.id}: {finding.message}",
                )
            )
        if not risk.references:
            items.append(
                warning_item(NO_EVIDENCE, loc, f"{risk.id}: no evidence reference")
            )
        if risk.id not in controlled:
            items.append(
                warning_item(UNCONTROLLED_RISK, loc, f"{risk.id}: no attached control")
            )

    seen_controls: set[str] = set()
    for i, control in enumerate(register.controls):
        loc = f"controls[{i}]"
        if not re.fullmatch(r"CTRL-\d{3,}", control.id):
            items.append(error_item(BAD_ID, f"{loc}.id", f"bad control id {control.id!r}"))
        if control.id in seen_controls:
            items.append(
                error_item(DUPLICATE_ID, f"{loc}.id", f"duplicate control id {control.id}")
            )
        seen_controls.add(control.id)
        if control.level not in CONTROL_LEVELS:
            items.append(
                error_item(SCHEMA, f"{loc}.level", f"{control.id}: level must be 0, 1, or 2")
            )
        if not control.risk_ids:
            items.append(
                error_item(SCHEMA, f"{loc}.risk_ids", f"{control.id}: no linked risks")
            )
        for rid in sorted(control.risk_ids, key=id_sort_key):
            if register.risk_by_id(rid) is None:
                items.append(
                    error_item(
                        DANGLING_REFERENCE,
                        f"{loc}.risk_ids",
                        f"{control.id} references {rid} which is not in the register",
                    )
                )
    return ValidationReport(tuple(items))
