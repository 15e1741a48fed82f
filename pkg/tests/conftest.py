from __future__ import annotations

import pytest

from agentrisk import example_register, example_register_text
from agentrisk.assessment import (
    RelevanceThreshold,
    new_assessment,
    parse_ratings_file,
    rate_risk,
)
from agentrisk.register import (
    Control,
    Risk,
    RiskRegister,
    parse_profile,
)
from agentrisk.taxonomy import CapabilityKind, FailureMode, HazardCategory

from importlib import resources


def _data_text(name: str) -> str:
    return resources.files("agentrisk").joinpath(f"data/{name}").read_text("utf-8")


@pytest.fixture(scope="session")
def shipped_register():
    return example_register()


@pytest.fixture(scope="session")
def shipped_register_text():
    return example_register_text()


@pytest.fixture(scope="session")
def researcher_profile():
    return parse_profile(_data_text("researcher_profile.json"))


@pytest.fixture(scope="session")
def vibe_coder_profile():
    return parse_profile(_data_text("vibe_coder_profile.json"))


@pytest.fixture(scope="session")
def researcher_ratings():
    return parse_ratings_file(_data_text("researcher_ratings.json"))


@pytest.fixture(scope="session")
def vibe_coder_ratings():
    return parse_ratings_file(_data_text("vibe_coder_ratings.json"))


def prompt_injection_risk() -> Risk:
    """The worked-example risk: injection via malicious websites, all hazards."""
    return Risk(
        id="RISK-001",
        title="Opening vulnerabilities to prompt injection attacks via malicious websites",
        description="Fetched web content carries instructions the agent executes.",
        elements=frozenset({CapabilityKind.INTERNET_AND_SEARCH_ACCESS}),
        failure_modes=frozenset({FailureMode.EXTERNAL_MANIPULATION}),
        hazards=frozenset(HazardCategory),
        references=("indirect prompt injection literature",),
    )


def worked_example_register() -> RiskRegister:
    """One risk plus its three controls: guardrails, escape filtering,
    structured retrieval APIs."""
    risk = prompt_injection_risk()
    controls = (
        Control(
            "CTRL-001",
            "Implement input guardrails to detect prompt injection or adversarial attacks",
            "Screen content entering the context window.",
            0,
            frozenset({risk.id}),
        ),
        Control(
            "CTRL-002",
            "Implement escape filtering before including web content into prompts",
            "Neutralize instruction-bearing markup in fetched pages.",
            1,
            frozenset({risk.id}),
        ),
        Control(
            "CTRL-003",
            "Use structured retrieval APIs for searching the web rather than web scraping",
            "Prefer structured search endpoints over raw scraping.",
            2,
            frozenset({risk.id}),
        ),
    )
    return RiskRegister("worked-example", "1.0.0", "1.0", (risk,), controls)


@pytest.fixture()
def worked_register():
    return worked_example_register()


def rated(assessment, rows):
    for row in rows:
        assessment = rate_risk(assessment, row)
    return assessment


@pytest.fixture()
def researcher_assessment(shipped_register, researcher_profile, researcher_ratings):
    assessment = new_assessment(
        "researcher", researcher_profile, shipped_register, RelevanceThreshold(3, 4)
    )
    return rated(assessment, researcher_ratings)


@pytest.fixture()
def vibe_coder_assessment(shipped_register, vibe_coder_profile, vibe_coder_ratings):
    assessment = new_assessment(
        "vibe-coder", vibe_coder_profile, shipped_register, RelevanceThreshold(3, 3)
    )
    return rated(assessment, vibe_coder_ratings)
