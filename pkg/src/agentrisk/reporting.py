"""Assessment reports and the cross-assessment portfolio view.

Rendering never recomputes semantics: relevance flags and control rows come
straight from the assessment engine, so a report always agrees with
``evaluate_relevance`` and ``resolve_controls`` on the same inputs.

Two formats: ``structured`` (canonical JSON, round-trips byte-exactly) and
``text`` (deterministic plain-text tables, same data).
"""
from __future__ import annotations

from dataclasses import dataclass

from .assessment import (
    Assessment,
    AssessmentStatus,
    check_register_ref,
    evaluate_relevance,
    resolution_to_doc,
    resolve_controls,
)
from .errors import MIXED_REGISTER_VERSIONS, SCHEMA, DocumentError, EngineError, error_item
from .register import (
    RiskRegister,
    _load_json,
    canonical_json,
    id_sort_key,
)
from .taxonomy import (
    CapabilityKind,
    sort_elements,
    sort_failure_modes,
    sort_hazards,
)

REPORT_SCHEMA_VERSION = "1.0"

REPORT_FORMATS = ("structured", "text")


@dataclass(frozen=True)
class AssessmentReport:
    """Typed wrapper over the structured report document."""

    doc: dict

    @property
    def header(self) -> dict:
        return self.doc["header"]

    @property
    def risk_rows(self) -> list[dict]:
        return self.doc["risks"]

    @property
    def control_rows(self) -> list[dict]:
        return self.doc["controls"]

    @property
    def relevant_risk_ids(self) -> list[str]:
        return [r["risk_id"] for r in self.risk_rows if r["relevant"]]


def build_report(assessment: Assessment, register: RiskRegister) -> AssessmentReport:
    """Assemble the report model for one assessment against its register."""
    check_register_ref(assessment, register)
    complete = assessment.status is not AssessmentStatus.DRAFT
    relevance = dict(evaluate_relevance(assessment)) if complete else {}
    resolutions = resolve_controls(assessment, register) if complete else []

    risk_rows = []
    for rid in assessment.applicable_risk_ids:
        risk = register.risk_by_id(rid)
        rating = assessment.ratings.get(rid)
        risk_rows.append(
            {
                "risk_id": rid,
                "title": risk.title if risk else "",
                "elements": [e.value for e in sort_elements(risk.elements)] if risk else [],
                "failure_modes": (
                    [m.value for m in sort_failure_modes(risk.failure_modes)] if risk else []
                ),
                "hazards": [h.value for h in sort_hazards(risk.hazards)] if risk else [],
                "impact": rating.impact if rating else None,
                "likelihood": rating.likelihood if rating else None,
                "relevant": relevance.get(rid) if complete else None,
                "rationale": rating.rationale if rating else "",
            }
        )

    doc = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "kind": "assessment_report",
        "header": {
            "assessment_id": assessment.id,
            "system_name": assessment.profile.system_name,
            "register_name": assessment.register_ref[0],
            "register_version": assessment.register_ref[1],
            "threshold": {
                "impact_min": assessment.threshold.impact_min,
                "likelihood_min": assessment.threshold.likelihood_min,
            },
            "status": assessment.status.value,
            "revision": assessment.revision,
            "applicable_count": len(assessment.applicable_risk_ids),
            "relevant_count": sum(relevance.values()) if complete else None,
        },
        "risks": risk_rows,
        "controls": [resolution_to_doc(r) for r in resolutions],
        "residual_notes": [
            {
                "index": i,
                "text": n.text,
                "accepted": n.accepted,
                "approver": n.approver,
                "follow_up_of": n.follow_up_of,
            }
            for i, n in enumerate(assessment.residual_notes)
        ],
    }
    return AssessmentReport(doc)


def render_report(assessment: Assessment, register: RiskRegister, fmt: str = "text") -> str:
    if fmt not in REPORT_FORMATS:
        raise EngineError(SCHEMA, f"unknown report format {fmt!r}; use structured or text")
    report = build_report(assessment, register)
    if fmt == "structured":
        return canonical_json(report.doc)
    return render_report_text(report)


def parse_report(text: str) -> AssessmentReport:
    """Load a structured report; rendering it again is byte-identical."""
    doc = _load_json(text)
    if doc.get("kind") != "assessment_report":
        raise DocumentError([error_item(SCHEMA, "kind", "not an assessment report")])
    for key in ("schema_version", "header", "risks", "controls", "residual_notes"):
        if key not in doc:
            raise DocumentError([error_item(SCHEMA, key, f"missing key '{key}'")])
    return AssessmentReport(doc)


def render_structured(report: AssessmentReport) -> str:
    return canonical_json(report.doc)


def _table(headers: list[str], rows: list[list[str]]) -> list[str]:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    fmt_row = lambda row: "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
    lines = [fmt_row(headers), fmt_row(["-" * w for w in widths])]
    lines.extend(fmt_row(row) for row in rows)
    return lines


def _flag(value) -> str:
    if value is None:
        return "-"
    return "yes" if value else "no"


def render_report_text(report: AssessmentReport) -> str:
    """Fixed column order: see README for the documented text layout."""
    h = report.header
    lines = [
        "ASSESSMENT REPORT",
        f"system:    {h['system_name']}",
        f"register:  {h['register_name']} {h['register_version']}",
        f"threshold: impact >= {h['threshold']['impact_min']}, "
        f"likelihood >= {h['threshold']['likelihood_min']}",
        f"status:    {h['status']}   revision: {h['revision']}",
        "",
        f"RISKS ({h['applicable_count']} applicable"
        + (f", {h['relevant_count']} relevant)" if h["relevant_count"] is not None else ")"),
    ]
    risk_rows = [
        [
            row["risk_id"],
            "-" if row["impact"] is None else str(row["impact"]),
            "-" if row["likelihood"] is None else str(row["likelihood"]),
            _flag(row["relevant"]),
            row["title"],
        ]
        for row in report.risk_rows
    ]
    lines.extend(_table(["id", "impact", "likelihood", "relevant", "title"], risk_rows))
    lines.append("")
    lines.append(f"CONTROLS ({len(report.control_rows)})")
    control_rows = [
        [
            row["control_id"],
            str(row["level"]),
            row["disposition"] if row["disposition"] else "pending",
            ",".join(row["triggering_risk_ids"]),
            row["title"],
        ]
        for row in report.control_rows
    ]
    lines.extend(_table(["id", "level", "disposition", "risks", "title"], control_rows))
    lines.append("")
    lines.append(f"RESIDUAL NOTES ({len(report.doc['residual_notes'])})")
    for note in report.doc["residual_notes"]:
        status = "accepted" if note["accepted"] else "open"
        follow = (
            f" follow-up-of={note['follow_up_of']}" if note["follow_up_of"] is not None else ""
        )
        approver = f" approver={note['approver']}" if note["approver"] else ""
        lines.append(f"[{note['index']}] {status}{approver}{follow}: {note['text']}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class PortfolioSummary:
    doc: dict


def build_portfolio(assessments: list[Assessment], register: RiskRegister) -> PortfolioSummary:
    """Organization-wide tallies of exposure, adoption, and capabilities.

    Relevance and adoption are tallied over assessments whose ratings are
    complete; drafts still count toward applicability and capabilities.
    Permutation-invariant in the input order.
    """
    offenders = sorted(
        (a.id for a in assessments if a.register_ref != register.ref), key=str
    )
    if offenders:
        raise EngineError(
            MIXED_REGISTER_VERSIONS,
            "assessments pin a different register version: " + ", ".join(offenders),
            tuple(
                error_item(MIXED_REGISTER_VERSIONS, f"assessments.{aid}", f"{aid} pins another register")
                for aid in offenders
            ),
        )
    ordered = sorted(assessments, key=lambda a: a.id)

    applicable_counts = {r.id: 0 for r in register.risks}
    relevant_counts = {r.id: 0 for r in register.risks}
    adoption = {
        c.id: {"adopted": 0, "adapted": 0, "not_applicable": 0, "pending": 0}
        for c in register.controls
    }
    capability_counts = {c: 0 for c in CapabilityKind}

    for a in ordered:
        for cap in a.profile.capabilities:
            capability_counts[cap] += 1
        for rid in a.applicable_risk_ids:
            if rid in applicable_counts:
                applicable_counts[rid] += 1
        if a.status is AssessmentStatus.DRAFT:
            continue
        for rid, relevant in evaluate_relevance(a):
            if relevant and rid in relevant_counts:
                relevant_counts[rid] += 1
        for res in resolve_controls(a, register):
            tally = adoption[res.control_id]
            if res.disposition is None:
                tally["pending"] += 1
            else:
                tally[res.disposition.value] += 1

    doc = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "kind": "portfolio_summary",
        "register": {"name": register.name, "version": register.version},
        "assessment_count": len(ordered),
        "assessments": [
            {"id": a.id, "system_name": a.profile.system_name, "status": a.status.value}
            for a in ordered
        ],
        "risk_exposure": [
            {
                "risk_id": r.id,
                "title": r.title,
                "applicable_count": applicable_counts[r.id],
                "relevant_count": relevant_counts[r.id],
            }
            for r in register.risks
        ],
        "control_adoption": [
            {
                "control_id": c.id,
                "title": c.title,
                "level": c.level,
                **adoption[c.id],
            }
            for c in sorted(register.controls, key=lambda c: (c.level, id_sort_key(c.id)))
        ],
        "capability_frequency": [
            {"capability": entry.token, "count": capability_counts[entry.element]}
            for entry in _capability_entries()
        ],
    }
    return PortfolioSummary(doc)


def _capability_entries():
    from .taxonomy import element_catalog

    return [e for e in element_catalog() if isinstance(e.element, CapabilityKind)]


def aggregate_portfolio(assessments: list[Assessment], register: RiskRegister) -> PortfolioSummary:
    return build_portfolio(assessments, register)


def render_portfolio(summary: PortfolioSummary, fmt: str = "text") -> str:
    if fmt == "structured":
        return canonical_json(summary.doc)
    doc = summary.doc
    lines = [
        "PORTFOLIO SUMMARY",
        f"register:    {doc['register']['name']} {doc['register']['version']}",
        f"assessments: {doc['assessment_count']}",
        "",
    ]
    rows = [[a["id"], a["status"], a["system_name"]] for a in doc["assessments"]]
    lines.extend(_table(["id", "status", "system"], rows))
    lines.append("")
    lines.append("RISK EXPOSURE")
    rows = [
        [r["risk_id"], str(r["applicable_count"]), str(r["relevant_count"]), r["title"]]
        for r in doc["risk_exposure"]
    ]
    lines.extend(_table(["id", "applicable", "relevant", "title"], rows))
    lines.append("")
    lines.append("CONTROL ADOPTION")
    rows = [
        [
            c["control_id"],
            str(c["level"]),
            str(c["adopted"]),
            str(c["adapted"]),
            str(c["not_applicable"]),
            str(c["pending"]),
            c["title"],
        ]
        for c in doc["control_adoption"]
    ]
    lines.extend(
        _table(["id", "level", "adopted", "adapted", "waived", "pending", "title"], rows)
    )
    lines.append("")
    lines.append("CAPABILITY FREQUENCY")
    rows = [[c["capability"], str(c["count"])] for c in doc["capability_frequency"]]
    lines.extend(_table(["capability", "count"], rows))
    return "\n".join(lines) + "\n"
