"""Acceptance suite: one test per shipped criterion, at its stated tolerance.

Run with ``pytest -v tests/test_acceptance.py`` for one pass/fail line per
criterion; each test also prints an ``ACCEPTANCE`` line on success.
"""
from __future__ import annotations

import json
import os
import random
import threading
import time

import pytest
from fastapi.testclient import TestClient

from agentrisk.assessment import (
    RelevanceThreshold,
    RiskRating,
    derive_applicable_risks,
    evaluate_relevance,
    new_assessment,
    rate_risk,
    relevant_risk_ids,
    resolve_controls,
    set_threshold,
    what_if,
)
from agentrisk.errors import ConflictError, StorageError
from agentrisk.regdiff import apply_diff, diff_registers
from agentrisk.register import (
    CapabilityProfile,
    canonical_json,
    parse_register,
    profile_to_doc,
    register_to_doc,
    serialize_register,
    validate_register,
)
from agentrisk.service import create_app
from agentrisk.store import FileStore
from agentrisk.taxonomy import (
    CapabilityKind,
    ComponentKind,
    DesignKind,
    FailureMode,
    HazardCategory,
)
import agentrisk.store as store_module

from conftest import worked_example_register
from randgen import mutate_register, random_profile, random_register, rated_assessment

CASES = 1000


def _announce(line: str):
    print(f"ACCEPTANCE PASS: {line}")


def test_criterion_1_worked_example_researcher_rating():
    """Prompt-injection risk rated 4/5 under threshold (3,4): relevant, and
    exactly its three controls resolve."""
    start = time.perf_counter()
    register = worked_example_register()
    profile = CapabilityProfile(
        "researcher-style", "", frozenset({CapabilityKind.INTERNET_AND_SEARCH_ACCESS})
    )
    assessment = new_assessment("a", profile, register, RelevanceThreshold(3, 4))
    assert assessment.applicable_risk_ids == ("RISK-001",)
    assessment = rate_risk(
        assessment,
        RiskRating("RISK-001", 4, 5, "manipulation extends beyond system boundaries"),
    )
    relevance = dict(evaluate_relevance(assessment))
    assert relevance["RISK-001"] is True

    resolutions = resolve_controls(assessment, register)
    titles = [r.title for r in resolutions]
    assert len(resolutions) == 3
    assert titles == [
        "Implement input guardrails to detect prompt injection or adversarial attacks",
        "Implement escape filtering before including web content into prompts",
        "Use structured retrieval APIs for searching the web rather than web scraping",
    ]
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    _announce(f"worked example 1: rating 4/5 at (3,4) relevant, 3 controls ({elapsed:.3f}s)")


def test_criterion_2_worked_example_inclusive_bounds():
    """Rating (3,4) under threshold (3,3) is relevant: bounds are inclusive."""
    register = worked_example_register()
    profile = CapabilityProfile(
        "vibe-coder-style", "", frozenset({CapabilityKind.INTERNET_AND_SEARCH_ACCESS})
    )
    assessment = new_assessment("a", profile, register, RelevanceThreshold(3, 3))
    assessment = rate_risk(assessment, RiskRating("RISK-001", 3, 4))
    assert dict(evaluate_relevance(assessment))["RISK-001"] is True
    # and the same rating fails a (3,4)->(4,4) style exclusive reading's edge:
    at_edge = set_threshold(assessment, RelevanceThreshold(3, 4))
    assert dict(evaluate_relevance(at_edge))["RISK-001"] is True  # 4 >= 4
    _announce("worked example 2: rating (3,4) at threshold (3,3) is relevant")


def test_criterion_3_shipped_register_directional(
    shipped_register,
    researcher_profile,
    vibe_coder_profile,
    researcher_ratings,
    vibe_coder_ratings,
):
    """Shipped register coverage and the Researcher vs Vibe Coder comparison."""
    start = time.perf_counter()
    register = shipped_register
    assert len(register.risks) >= 40
    assert len(register.controls) >= 30

    elements, modes, hazards = set(), set(), set()
    for risk in register.risks:
        elements |= risk.elements
        modes |= risk.failure_modes
        hazards |= risk.hazards
    assert len(elements) == 20  # every element carries at least one risk
    assert modes == set(FailureMode)
    assert hazards == set(HazardCategory)
    assert {c.level for c in register.controls} == {0, 1, 2}

    report = validate_register(register)
    assert report.errors == ()

    researcher_applicable = derive_applicable_risks(researcher_profile, register)
    vibe_applicable = derive_applicable_risks(vibe_coder_profile, register)
    assert len(researcher_applicable) < len(vibe_applicable)  # strictly fewer

    researcher = new_assessment(
        "researcher", researcher_profile, register, RelevanceThreshold(3, 4)
    )
    for rating in researcher_ratings:
        researcher = rate_risk(researcher, rating)
    vibe = new_assessment(
        "vibe-coder", vibe_coder_profile, register, RelevanceThreshold(3, 3)
    )
    for rating in vibe_coder_ratings:
        vibe = rate_risk(vibe, rating)

    researcher_relevant = relevant_risk_ids(researcher)
    vibe_relevant = relevant_risk_ids(vibe)
    assert len(vibe_relevant) > len(researcher_relevant)  # strictly larger

    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    _announce(
        "shipped register: "
        f"{len(register.risks)} risks, {len(register.controls)} controls; "
        f"researcher {len(researcher_applicable)} applicable / {len(researcher_relevant)} "
        f"relevant < vibe coder {len(vibe_applicable)} applicable / "
        f"{len(vibe_relevant)} relevant ({elapsed:.3f}s)"
    )


def test_criterion_4_property_suite():
    """Six properties, >= 1000 randomized cases each, zero failures."""
    rng = random.Random(0xA5C)

    for _ in range(CASES):  # parse . serialize identity
        register = random_register(rng)
        assert parse_register(serialize_register(register)) == register

    for _ in range(CASES):  # apply_diff(a, diff(a, b)) == b
        a = random_register(rng)
        b = mutate_register(rng, a) if rng.random() < 0.7 else random_register(rng)
        assert apply_diff(a, diff_registers(a, b)) == b

    for _ in range(CASES):  # capability monotonicity of derivation
        register = random_register(rng)
        p = random_profile(rng)
        q = CapabilityProfile(
            p.system_name,
            p.description,
            p.capabilities | set(rng.sample(list(CapabilityKind), rng.randint(0, 4))),
            p.context,
        )
        assert set(derive_applicable_risks(p, register)) <= set(
            derive_applicable_risks(q, register)
        )

    for _ in range(CASES):  # threshold monotonicity of relevance
        register = random_register(rng)
        assessment = rated_assessment(rng, register)
        lo = RelevanceThreshold(rng.randint(1, 5), rng.randint(1, 5))
        hi = RelevanceThreshold(
            rng.randint(lo.impact_min, 5), rng.randint(lo.likelihood_min, 5)
        )
        relevant_lo = set(relevant_risk_ids(set_threshold(assessment, lo)))
        relevant_hi = set(relevant_risk_ids(set_threshold(assessment, hi)))
        assert relevant_hi <= relevant_lo

    for _ in range(CASES):  # control traceability
        register = random_register(rng)
        assessment = rated_assessment(rng, register)
        relevant = set(relevant_risk_ids(assessment))
        seen = set()
        for res in resolve_controls(assessment, register):
            assert res.control_id not in seen  # no duplicates
            seen.add(res.control_id)
            assert res.triggering_risk_ids  # triggered by >= 1 relevant risk
            assert set(res.triggering_risk_ids) <= relevant

    for _ in range(CASES):  # what_if equals the re-evaluation oracle
        register = random_register(rng)
        assessment = rated_assessment(rng, register)
        candidate = RelevanceThreshold(rng.randint(1, 5), rng.randint(1, 5))
        delta = what_if(assessment, register, candidate)

        def relevant_at(threshold):
            return {
                rid
                for rid, rating in assessment.ratings.items()
                if rating.impact >= threshold.impact_min
                and rating.likelihood >= threshold.likelihood_min
            }

        now = relevant_at(assessment.threshold)
        then = relevant_at(candidate)
        assert set(delta.became_relevant) == then - now
        assert set(delta.became_irrelevant) == now - then
        controls_now = {
            c.id for c in register.controls if c.risk_ids & now
        }
        controls_then = {
            c.id for c in register.controls if c.risk_ids & then
        }
        assert set(delta.controls_added) == controls_then - controls_now
        assert set(delta.controls_removed) == controls_now - controls_then

    _announce(f"property suite: 6 properties x {CASES} randomized cases")


def test_criterion_5_brute_force_derivation_oracle(shipped_register):
    """derive_applicable_risks matches exhaustive per-risk intersection checks
    over 256 random capability subsets on registers of <= 10 risks."""
    start = time.perf_counter()
    rng = random.Random(256)
    capabilities = list(CapabilityKind)
    always = set(ComponentKind) | set(DesignKind)

    fixtures = [random_register(rng, max_risks=10) for _ in range(8)]
    # include a slice of the shipped register to ground the check in real data
    fixtures.append(
        parse_register(
            canonical_json(
                {
                    **register_to_doc(shipped_register),
                    "risks": register_to_doc(shipped_register)["risks"][:10],
                    "controls": [],
                }
            )
        )
    )

    subsets = {
        frozenset(cap for cap in capabilities if rng.random() < 0.5)
        for _ in range(256)
    }
    while len(subsets) < 256:
        subsets.add(frozenset(rng.sample(capabilities, rng.randint(0, 13))))

    checked = 0
    for register in fixtures:
        assert len(register.risks) <= 10
        for caps in subsets:
            profile = CapabilityProfile("s", "", caps)
            got = derive_applicable_risks(profile, register)
            expected = sorted(
                (
                    r.id
                    for r in register.risks
                    if any(e in always or e in caps for e in r.elements)
                ),
                key=lambda rid: int(rid.split("-")[1]),
            )
            assert got == expected
            checked += 1
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    assert checked == 256 * len(fixtures)
    _announce(
        f"brute-force oracle: {checked} derivations match exhaustive checks ({elapsed:.2f}s)"
    )


def test_criterion_6_service_fidelity(tmp_path):
    """API responses bit-identical to in-process engine; one write per
    revision under contention; crashes never corrupt a readable entity."""
    rng = random.Random(6)
    app = create_app(tmp_path / "data")
    with TestClient(app) as client:
        checked = 0
        for i in range(100):
            register = random_register(rng, max_risks=5)
            rid = f"r{i}"
            response = client.put(
                f"/api/registers/{rid}",
                content=json.dumps(register_to_doc(register)),
                headers={"X-Expected-Revision": "0"},
            )
            assert response.status_code == 201
            profile = random_profile(rng)

            derive_response = client.post(
                "/api/derive",
                json={"register_id": rid, "profile": profile_to_doc(profile)},
            )
            expected = {"risk_ids": derive_applicable_risks(profile, register)}
            assert derive_response.content == canonical_json(expected).encode()

            assessment = rated_assessment(rng, register, profile=profile)
            from agentrisk.assessment import assessment_to_doc

            aid = f"a{i}"
            doc = assessment_to_doc(assessment)
            doc["id"] = aid
            response = client.put(
                f"/api/assessments/{aid}",
                content=json.dumps(doc),
                headers={"X-Expected-Revision": "0"},
            )
            assert response.status_code == 201, response.text

            evaluate_response = client.post(f"/api/assessments/{aid}/evaluate")
            expected_eval = {
                "relevance": [
                    {"risk_id": r, "relevant": rel}
                    for r, rel in evaluate_relevance(assessment)
                ]
            }
            assert evaluate_response.content == canonical_json(expected_eval).encode()

            candidate = RelevanceThreshold(rng.randint(1, 5), rng.randint(1, 5))
            whatif_response = client.post(
                f"/api/assessments/{aid}/whatif",
                json={
                    "impact_min": candidate.impact_min,
                    "likelihood_min": candidate.likelihood_min,
                },
            )
            from agentrisk.assessment import whatif_to_doc

            expected_whatif = whatif_to_doc(what_if(assessment, register, candidate))
            assert whatif_response.content == canonical_json(expected_whatif).encode()
            checked += 1
        assert checked == 100

    # exactly one write per revision under contention
    store = FileStore(tmp_path / "cas")
    base = register_to_doc(random_register(random.Random(1), max_risks=3))
    store.put("register", "base", base, 0)
    barrier = threading.Barrier(2)
    outcomes = []
    lock = threading.Lock()

    def writer(n):
        barrier.wait()
        try:
            store.put("register", "base", dict(base, version=f"9.0.{n}"), 1)
            outcome = "ok"
        except ConflictError:
            outcome = "conflict"
        with lock:
            outcomes.append(outcome)

    threads = [threading.Thread(target=writer, args=(n,)) for n in range(2)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert sorted(outcomes) == ["conflict", "ok"]

    # crash injection: a failed rename never yields a corrupt readable entity
    before = store.get("register", "base")
    real_replace = os.replace
    crash_count = 0

    def sometimes_crash(src, dst):
        nonlocal crash_count
        crash_count += 1
        raise OSError("injected crash")

    store_module.os.replace = sometimes_crash
    try:
        for n in range(5):
            with pytest.raises(StorageError):
                store.put(
                    "register", "base", dict(base, version=f"8.0.{n}"), before.revision
                )
    finally:
        store_module.os.replace = real_replace
    after = store.get("register", "base")
    assert crash_count == 5
    assert after.revision == before.revision
    assert after.payload_bytes == before.payload_bytes
    _announce(
        "service fidelity: 100 payloads bit-identical; single writer per revision; "
        "crash injection left prior revision intact"
    )
