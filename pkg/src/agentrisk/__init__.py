"""Risk-register engine and assessment workbench for agentic AI systems."""

from importlib import resources

from .assessment import (
    Assessment,
    AssessmentStatus,
    ControlResolution,
    Disposition,
    DispositionRecord,
    RelevanceThreshold,
    ResidualNote,
    RiskRating,
    WhatIfDelta,
    accept_residual_note,
    derive_applicable_risks,
    evaluate_relevance,
    finalize,
    new_assessment,
    parse_assessment,
    parse_ratings_file,
    rate_risk,
    record_residual_note,
    relevant_risk_ids,
    resolve_controls,
    serialize_assessment,
    set_disposition,
    set_threshold,
    what_if,
)
from .errors import (
    AgentRiskError,
    ConflictError,
    DocumentError,
    EngineError,
    NotFoundError,
    StorageError,
    ValidationItem,
    ValidationReport,
)
from .regdiff import RegisterDiff, apply_diff, diff_registers, diff_to_doc
from .register import (
    CapabilityProfile,
    Control,
    ProfileContext,
    Risk,
    RiskRegister,
    parse_profile,
    parse_register,
    serialize_profile,
    serialize_register,
    validate_register,
    well_formed,
)
from .reporting import (
    AssessmentReport,
    PortfolioSummary,
    aggregate_portfolio,
    build_report,
    parse_report,
    render_portfolio,
    render_report,
)
from .taxonomy import (
    CapabilityCategory,
    CapabilityKind,
    ComponentKind,
    DesignKind,
    Element,
    FailureMode,
    HazardCategory,
    HazardType,
    element_catalog,
    failure_mode_catalog,
    hazard_catalog,
)

__version__ = "0.1.0"


def example_register_text() -> str:
    """The shipped example register document."""
    return (
        resources.files("agentrisk").joinpath("data/example_register.json").read_text("utf-8")
    )


def example_register() -> RiskRegister:
    return parse_register(example_register_text())
