"""Command-line front door: author, validate, assess, diff, report, serve.

Fully offline against local files; ``--remote <addr>`` switches a command
to the HTTP service, reinterpreting entity arguments as stored ids.
Structured output is byte-identical to the library's canonical
serialization.

Exit codes: 0 success, 1 validation or engine failure, 2 usage error,
3 I/O failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx

from . import assessment as engine
from .errors import AgentRiskError, DocumentError, ValidationItem, ValidationReport
from .regdiff import diff_registers, diff_to_doc
from .register import (
    canonical_json,
    parse_profile,
    parse_register,
    validate_register,
)
from .reporting import render_report
from .taxonomy import catalog_to_doc

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _print_items(items, stream=None):
    stream = stream or sys.stderr
    for item in items:
        print(f"{item.severity} {item.code} {item.location}: {item.message}", file=stream)


def _print_report(report: ValidationReport):
    _print_items(report.items, stream=sys.stdout)


class RemoteClient:
    """Thin wrapper over the service API for remote mode."""

    def __init__(self, base_url: str):
        self.client = httpx.Client(base_url=base_url.rstrip("/"), timeout=30.0)

    def call(self, method: str, path: str, *, json_body=None, headers=None, params=None) -> str:
        response = self.client.request(
            method, path, json=json_body, headers=headers, params=params
        )
        if response.status_code >= 400:
            try:
                doc = response.json()["error"]
            except Exception:
                raise AgentRiskError("http", f"{response.status_code}: {response.text}")
            items = tuple(
                ValidationItem(i["severity"], i["code"], i["location"], i["message"])
                for i in doc.get("items", [])
            )
            raise AgentRiskError(doc["code"], doc["message"], items)
        return response.text

    def get_payload(self, plural: str, entity_id: str) -> dict:
        return json.loads(self.call("GET", f"/api/{plural}/{entity_id}"))["payload"]


def cmd_catalog(args) -> int:
    doc = catalog_to_doc()
    if args.capabilities:
        entries = [e for e in doc["elements"] if e["category"] in ("Cognitive", "Interaction", "Operational")]
        sections = [("element", entries)]
    elif args.elements:
        sections = [("element", doc["elements"])]
    elif args.modes:
        sections = [("failure_mode", doc["failure_modes"])]
    elif args.hazards:
        sections = [("hazard", doc["hazards"])]
    else:
        sections = [
            ("element", doc["elements"]),
            ("failure_mode", doc["failure_modes"]),
            ("hazard", doc["hazards"]),
        ]
    if args.format == "structured":
        if args.capabilities or args.elements or args.modes or args.hazards:
            out = {kind: rows for kind, rows in sections}
            print(canonical_json(out), end="")
        else:
            print(canonical_json(doc), end="")
        return EXIT_OK
    for kind, rows in sections:
        for row in rows:
            if kind == "element":
                category = row["category"]
            elif kind == "failure_mode":
                category = "Failure Mode"
            else:
                category = row["type"].capitalize()
            print(f"{row['token']:<42} {category:<14} {row['name']}")
    return EXIT_OK


def _require_register_arg(args):
    if not args.register:
        raise AgentRiskError("usage", "--register is required in local mode")


def _load_register(args):
    if args.remote:
        doc = RemoteClient(args.remote).get_payload("registers", args.register)
        return parse_register(canonical_json(doc))
    return parse_register(Path(args.register).read_text(encoding="utf-8"))


def _load_assessment(args):
    if args.remote:
        doc = RemoteClient(args.remote).get_payload("assessments", args.assessment)
        return engine.assessment_from_doc(doc)
    return engine.parse_assessment(Path(args.assessment).read_text(encoding="utf-8"))


def cmd_validate(args) -> int:
    try:
        register = _load_register(args)
    except DocumentError as exc:
        _print_items(exc.items, stream=sys.stdout)
        return EXIT_FAIL
    report = validate_register(register)
    if args.format == "structured":
        print(canonical_json(report.to_doc()), end="")
    else:
        _print_report(report)
        if report.ok and not report.warnings:
            print(f"valid: {len(register.risks)} risks, {len(register.controls)} controls")
    if not report.ok:
        return EXIT_FAIL
    if args.warnings_as_errors and report.warnings:
        return EXIT_FAIL
    return EXIT_OK


def _prompt_int(label: str, lo: int, hi: int) -> int:
    while True:
        raw = input(f"{label} [{lo}-{hi}]: ").strip()
        try:
            value = int(raw)
        except ValueError:
            print(f"  enter an integer {lo}-{hi}", file=sys.stderr)
            continue
        if lo <= value <= hi:
            return value
        print(f"  enter an integer {lo}-{hi}", file=sys.stderr)


def _interactive_ratings(assessment, register):
    scale = f"impact 1={engine.IMPACT_SCALE[0]} .. 5={engine.IMPACT_SCALE[4]}, " \
        f"likelihood 1={engine.LIKELIHOOD_SCALE[0]} .. 5={engine.LIKELIHOOD_SCALE[4]}"
    print(f"rate each applicable risk ({scale})")
    for rid in assessment.applicable_risk_ids:
        risk = register.risk_by_id(rid)
        print(f"{rid}: {risk.title}")
        impact = _prompt_int("  impact", 1, 5)
        likelihood = _prompt_int("  likelihood", 1, 5)
        rationale = input("  rationale: ").strip()
        assessment = engine.rate_risk(
            assessment, engine.RiskRating(rid, impact, likelihood, rationale)
        )
    impact_min = _prompt_int("relevance threshold: impact_min", 1, 5)
    likelihood_min = _prompt_int("relevance threshold: likelihood_min", 1, 5)
    return engine.set_threshold(
        assessment, engine.RelevanceThreshold(impact_min, likelihood_min)
    )


def _print_outcome(assessment, register, fmt: str):
    relevant = engine.relevant_risk_ids(assessment)
    resolutions = engine.resolve_controls(assessment, register)
    if fmt == "structured":
        doc = {
            "relevant_risk_ids": relevant,
            "controls": [engine.resolution_to_doc(r) for r in resolutions],
        }
        print(canonical_json(doc), end="")
        return
    print(f"relevant risks ({len(relevant)}):")
    for rid in relevant:
        risk = register.risk_by_id(rid)
        rating = assessment.ratings[rid]
        print(f"  {rid}  impact={rating.impact} likelihood={rating.likelihood}  {risk.title}")
    print(f"required controls ({len(resolutions)}):")
    for res in resolutions:
        state = res.disposition.value if res.disposition else "pending"
        print(
            f"  {res.control_id}  level={res.level} {state}  "
            f"[{','.join(res.triggering_risk_ids)}]  {res.title}"
        )


def cmd_assess(args) -> int:
    if args.remote:
        return _cmd_assess_remote(args)
    register = parse_register(Path(args.register).read_text(encoding="utf-8"))
    profile = parse_profile(Path(args.profile).read_text(encoding="utf-8"))
    threshold = engine.RelevanceThreshold(args.impact_min, args.likelihood_min)
    assessment = engine.new_assessment(args.id, profile, register, threshold)
    if args.ratings:
        for rating in engine.parse_ratings_file(Path(args.ratings).read_text(encoding="utf-8")):
            assessment = engine.rate_risk(assessment, rating)
    elif args.interactive:
        assessment = _interactive_ratings(assessment, register)
    out_path = Path(args.out)
    out_path.write_text(engine.serialize_assessment(assessment), encoding="utf-8")
    print(f"wrote {out_path}", file=sys.stderr)
    if not assessment.unrated_risk_ids:
        _print_outcome(assessment, register, args.format)
    else:
        print(
            f"{len(assessment.unrated_risk_ids)} of "
            f"{len(assessment.applicable_risk_ids)} applicable risks unrated; "
            "relevance not evaluated",
            file=sys.stderr,
        )
    return EXIT_OK


def _cmd_assess_remote(args) -> int:
    remote = RemoteClient(args.remote)
    body = {
        "register_id": args.register,
        "profile_id": args.profile,
        "threshold": {"impact_min": args.impact_min, "likelihood_min": args.likelihood_min},
    }
    if args.id != "assessment":
        body["id"] = args.id
    created = json.loads(remote.call("POST", "/api/assessments", json_body=body))
    assessment_id, revision = created["id"], created["revision"]
    if args.ratings:
        for rating in engine.parse_ratings_file(Path(args.ratings).read_text(encoding="utf-8")):
            result = json.loads(
                remote.call(
                    "POST",
                    f"/api/assessments/{assessment_id}/rate",
                    json_body={
                        "risk_id": rating.risk_id,
                        "impact": rating.impact,
                        "likelihood": rating.likelihood,
                        "rationale": rating.rationale,
                    },
                    headers={"X-Expected-Revision": str(revision)},
                )
            )
            revision = result["revision"]
    print(f"created assessment {assessment_id} at revision {revision}", file=sys.stderr)
    doc = remote.get_payload("assessments", assessment_id)
    assessment = engine.assessment_from_doc(doc)
    if args.format == "structured":
        print(canonical_json(doc), end="")
    elif not assessment.unrated_risk_ids:
        relevance = json.loads(
            remote.call("POST", f"/api/assessments/{assessment_id}/evaluate")
        )["relevance"]
        relevant = [r["risk_id"] for r in relevance if r["relevant"]]
        print(f"relevant risks ({len(relevant)}): {', '.join(relevant)}")
    return EXIT_OK


def cmd_relevance(args) -> int:
    if args.remote:
        remote = RemoteClient(args.remote)
        text = remote.call("POST", f"/api/assessments/{args.assessment}/evaluate")
        if args.format == "structured":
            print(text, end="")
            return EXIT_OK
        rows = json.loads(text)["relevance"]
        for row in rows:
            print(f"{row['risk_id']}  {'relevant' if row['relevant'] else 'not relevant'}")
        return EXIT_OK
    assessment = _load_assessment(args)
    relevance = engine.evaluate_relevance(assessment)
    if args.format == "structured":
        doc = {"relevance": [{"risk_id": rid, "relevant": rel} for rid, rel in relevance]}
        print(canonical_json(doc), end="")
    else:
        for rid, rel in relevance:
            print(f"{rid}  {'relevant' if rel else 'not relevant'}")
    return EXIT_OK


def cmd_controls(args) -> int:
    if args.remote:
        remote = RemoteClient(args.remote)
        text = remote.call("GET", f"/api/assessments/{args.assessment}/controls")
        if args.format == "structured":
            print(text, end="")
            return EXIT_OK
        rows = json.loads(text)["controls"]
        for row in rows:
            state = row["disposition"] or "pending"
            print(
                f"{row['control_id']}  level={row['level']} {state}  "
                f"[{','.join(row['triggering_risk_ids'])}]  {row['title']}"
            )
        return EXIT_OK
    _require_register_arg(args)
    assessment = _load_assessment(args)
    register = _load_register(args)
    resolutions = engine.resolve_controls(assessment, register)
    if args.format == "structured":
        doc = {"controls": [engine.resolution_to_doc(r) for r in resolutions]}
        print(canonical_json(doc), end="")
    else:
        for res in resolutions:
            state = res.disposition.value if res.disposition else "pending"
            print(
                f"{res.control_id}  level={res.level} {state}  "
                f"[{','.join(res.triggering_risk_ids)}]  {res.title}"
            )
    return EXIT_OK


def cmd_whatif(args) -> int:
    candidate = {"impact_min": args.impact_min, "likelihood_min": args.likelihood_min}
    if args.remote:
        remote = RemoteClient(args.remote)
        text = remote.call(
            "POST", f"/api/assessments/{args.assessment}/whatif", json_body=candidate
        )
        doc = json.loads(text)
    else:
        _require_register_arg(args)
        assessment = _load_assessment(args)
        register = _load_register(args)
        delta = engine.what_if(
            assessment,
            register,
            engine.RelevanceThreshold(args.impact_min, args.likelihood_min),
        )
        doc = engine.whatif_to_doc(delta)
    if args.format == "structured":
        print(canonical_json(doc), end="")
        return EXIT_OK
    print(f"became relevant ({len(doc['became_relevant'])}): "
          f"{', '.join(doc['became_relevant']) or '-'}")
    print(f"became irrelevant ({len(doc['became_irrelevant'])}): "
          f"{', '.join(doc['became_irrelevant']) or '-'}")
    print(f"controls added ({len(doc['control_delta']['added'])}): "
          f"{', '.join(doc['control_delta']['added']) or '-'}")
    print(f"controls removed ({len(doc['control_delta']['removed'])}): "
          f"{', '.join(doc['control_delta']['removed']) or '-'}")
    return EXIT_OK


def cmd_diff(args) -> int:
    if args.remote:
        remote = RemoteClient(args.remote)
        text = remote.call("GET", f"/api/registers/{args.old}/diff/{args.new}")
        doc = json.loads(text)
    else:
        old = parse_register(Path(args.old).read_text(encoding="utf-8"))
        new = parse_register(Path(args.new).read_text(encoding="utf-8"))
        doc = diff_to_doc(diff_registers(old, new))
    if args.format == "structured":
        print(canonical_json(doc), end="")
        return EXIT_OK
    empty = not any(doc[k] for k in doc)
    if empty:
        print("no changes")
        return EXIT_OK
    for change in doc["meta_changes"]:
        print(f"~ register.{change['field']}: {change['old']!r} -> {change['new']!r}")
    for risk in doc["added_risks"]:
        print(f"+ {risk['id']}  {risk['title']}")
    for rid in doc["removed_risks"]:
        print(f"- {rid}")
    for entry in doc["modified_risks"]:
        fields = ", ".join(c["field"] for c in entry["changes"])
        print(f"~ {entry['id']}  ({fields})")
    for control in doc["added_controls"]:
        print(f"+ {control['id']}  {control['title']}")
    for cid in doc["removed_controls"]:
        print(f"- {cid}")
    for entry in doc["modified_controls"]:
        fields = ", ".join(c["field"] for c in entry["changes"])
        print(f"~ {entry['id']}  ({fields})")
    return EXIT_OK


def cmd_report(args) -> int:
    if args.remote:
        remote = RemoteClient(args.remote)
        fmt = "structured" if args.format == "structured" else "text"
        text = remote.call(
            "GET", f"/api/assessments/{args.assessment}/report", params={"format": fmt}
        )
        print(text, end="")
        return EXIT_OK
    _require_register_arg(args)
    assessment = _load_assessment(args)
    register = _load_register(args)
    print(render_report(assessment, register, args.format), end="")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(args.data_dir, preload_register=args.preload, static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="agentrisk",
        description="Risk-register engine and assessment workbench for agentic AI systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument(
            "--format", choices=("structured", "text"), default="text",
            help="output format (structured is canonical JSON)",
        )
        p.add_argument("--remote", metavar="URL", default=None,
                       help="target a running service; entity args become stored ids")

    p = sub.add_parser("catalog", help="print the element/failure-mode/hazard taxonomy")
    add_common(p)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--elements", action="store_true", help="only the 20 elements")
    group.add_argument("--capabilities", action="store_true", help="only the 13 capabilities")
    group.add_argument("--modes", action="store_true", help="only the 3 failure modes")
    group.add_argument("--hazards", action="store_true", help="only the 9 hazards")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("validate", help="validate a register document")
    add_common(p)
    p.add_argument("register", help="register file (or stored id with --remote)")
    p.add_argument("--warnings-as-errors", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("assess", help="create an assessment from a profile and register")
    add_common(p)
    p.add_argument("--profile", required=True)
    p.add_argument("--register", required=True)
    p.add_argument("--ratings", help="JSON ratings file, one row per risk id")
    p.add_argument("--interactive", action="store_true", help="prompt for each rating")
    p.add_argument("--impact-min", type=int, required=True, choices=range(1, 6))
    p.add_argument("--likelihood-min", type=int, required=True, choices=range(1, 6))
    p.add_argument("--id", default="assessment", help="assessment id")
    p.add_argument("--out", default="assessment.json", help="output file (local mode)")
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("relevance", help="evaluate the relevance threshold")
    add_common(p)
    p.add_argument("--assessment", required=True)
    p.set_defaults(func=cmd_relevance)

    p = sub.add_parser("controls", help="resolve required controls for an assessment")
    add_common(p)
    p.add_argument("--assessment", required=True)
    p.add_argument("--register", help="register file (unused with --remote)")
    p.set_defaults(func=cmd_controls)

    p = sub.add_parser("whatif", help="relevance and control deltas at a candidate threshold")
    add_common(p)
    p.add_argument("--assessment", required=True)
    p.add_argument("--register", help="register file (unused with --remote)")
    p.add_argument("--impact-min", type=int, required=True, choices=range(1, 6))
    p.add_argument("--likelihood-min", type=int, required=True, choices=range(1, 6))
    p.set_defaults(func=cmd_whatif)

    p = sub.add_parser("diff", help="diff two register documents")
    add_common(p)
    p.add_argument("old")
    p.add_argument("new")
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("report", help="render an assessment report")
    add_common(p)
    p.add_argument("--assessment", required=True)
    p.add_argument("--register", help="register file (unused with --remote)")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--data-dir", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8321)
    p.add_argument("--preload", help="register file to load on first start")
    p.add_argument("--static", help="directory of web-wizard assets to serve at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DocumentError as exc:
        _print_items(exc.items)
        return EXIT_FAIL
    except AgentRiskError as exc:
        if exc.code == "usage":
            print(f"usage error: {exc.message}", file=sys.stderr)
            return EXIT_USAGE
        print(f"error {exc.code}: {exc.message}", file=sys.stderr)
        _print_items(exc.items)
        return EXIT_FAIL
    except httpx.HTTPError as exc:
        print(f"service unreachable: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
