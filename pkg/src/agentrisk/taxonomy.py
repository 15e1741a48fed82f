"""Fixed taxonomies for agentic-system risk analysis.

Three closed enumerations make up the 20-member element universe: the four
components of a single agent, the three system-design aspects, and the
thirteen capabilities (grouped cognitive / interaction / operational).
Risks additionally reference one of three failure modes and one or more of
nine hazard categories (four security, five safety).

Every value is immutable and carries a stable lower-snake token used in
register documents; display names are presentation-only and may change
without breaking stored files. All functions here are pure.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


TAXONOMY_VERSION = "1.0"


class ComponentKind(str, Enum):
    """Essential parts of a single, standalone agent."""

    LLM = "llm"
    TOOLS = "tools"
    INSTRUCTIONS = "instructions"
    MEMORY = "memory"


class DesignKind(str, Enum):
    """Aspects of how an agentic system is assembled from agents."""

    AGENTIC_ARCHITECTURE = "agentic_architecture"
    ROLES_AND_ACCESS_CONTROLS = "roles_and_access_controls"
    MONITORING_AND_TRACEABILITY = "monitoring_and_traceability"


class CapabilityCategory(str, Enum):
    COGNITIVE = "cognitive"
    INTERACTION = "interaction"
    OPERATIONAL = "operational"

    @property
    def label(self) -> str:
        return _CATEGORY_LABELS[self]


_CATEGORY_LABELS: dict["CapabilityCategory", str] = {}


class CapabilityKind(str, Enum):
    """Actions an agentic system can autonomously execute.

    Members are grouped into exactly one of the three capability
    categories; the grouping is derivable via :attr:`category`.
    """

    # cognitive
    PLANNING_AND_GOAL_MANAGEMENT = "planning_and_goal_management"
    AGENT_DELEGATION = "agent_delegation"
    TOOL_USE = "tool_use"
    # interaction
    NATURAL_LANGUAGE_COMMUNICATION = "natural_language_communication"
    MULTIMODAL_UNDERSTANDING_AND_GENERATION = "multimodal_understanding_and_generation"
    OFFICIAL_COMMUNICATION = "official_communication"
    BUSINESS_TRANSACTIONS = "business_transactions"
    INTERNET_AND_SEARCH_ACCESS = "internet_and_search_access"
    COMPUTER_USE = "computer_use"
    OTHER_PROGRAMMATIC_INTERFACES = "other_programmatic_interfaces"
    # operational
    CODE_EXECUTION = "code_execution"
    FILE_AND_DATA_MANAGEMENT = "file_and_data_management"
    SYSTEM_MANAGEMENT = "system_management"

    @property
    def category(self) -> CapabilityCategory:
        return _CAPABILITY_CATEGORIES[self]


_CAPABILITY_CATEGORIES = {
    CapabilityKind.PLANNING_AND_GOAL_MANAGEMENT: CapabilityCategory.COGNITIVE,
    CapabilityKind.AGENT_DELEGATION: CapabilityCategory.COGNITIVE,
    CapabilityKind.TOOL_USE: CapabilityCategory.COGNITIVE,
    CapabilityKind.NATURAL_LANGUAGE_COMMUNICATION: CapabilityCategory.INTERACTION,
    CapabilityKind.MULTIMODAL_UNDERSTANDING_AND_GENERATION: CapabilityCategory.INTERACTION,
    CapabilityKind.OFFICIAL_COMMUNICATION: CapabilityCategory.INTERACTION,
    CapabilityKind.BUSINESS_TRANSACTIONS: CapabilityCategory.INTERACTION,
    CapabilityKind.INTERNET_AND_SEARCH_ACCESS: CapabilityCategory.INTERACTION,
    CapabilityKind.COMPUTER_USE: CapabilityCategory.INTERACTION,
    CapabilityKind.OTHER_PROGRAMMATIC_INTERFACES: CapabilityCategory.INTERACTION,
    CapabilityKind.CODE_EXECUTION: CapabilityCategory.OPERATIONAL,
    CapabilityKind.FILE_AND_DATA_MANAGEMENT: CapabilityCategory.OPERATIONAL,
    CapabilityKind.SYSTEM_MANAGEMENT: CapabilityCategory.OPERATIONAL,
}

_CATEGORY_LABELS.update(
    {
        CapabilityCategory.COGNITIVE: "Cognitive",
        CapabilityCategory.INTERACTION: "Interaction",
        CapabilityCategory.OPERATIONAL: "Operational",
    }
)


# An element reference is a tagged union of the three enums; the Python type
# itself is the tag. Tokens are unique across all 20 members, so a bare
# token round-trips through documents unambiguously.
Element = ComponentKind | DesignKind | CapabilityKind


class FailureMode(str, Enum):
    """Modality in which an agentic system fails."""

    AGENT_FAILURE = "agent_failure"
    EXTERNAL_MANIPULATION = "external_manipulation"
    TOOL_OR_RESOURCE_MALFUNCTION = "tool_or_resource_malfunction"


class HazardType(str, Enum):
    SECURITY = "security"
    SAFETY = "safety"


class HazardCategory(str, Enum):
    """Resulting harm category; each belongs to exactly one hazard type."""

    # security
    DATA = "data"
    APPLICATION = "application"
    INFRASTRUCTURE_AND_NETWORK = "infrastructure_and_network"
    IDENTITY_AND_ACCESS_MANAGEMENT = "identity_and_access_management"
    # safety
    ILLEGAL_AND_CBRNE = "illegal_and_cbrne"
    DISCRIMINATORY_OR_HATEFUL_CONTENT = "discriminatory_or_hateful_content"
    INAPPROPRIATE_CONTENT = "inappropriate_content"
    COMPROMISE_USER_SAFETY = "compromise_user_safety"
    MISREPRESENTATION = "misrepresentation"

    @property
    def hazard_type(self) -> HazardType:
        return _HAZARD_TYPES[self]


_HAZARD_TYPES = {
    HazardCategory.DATA: HazardType.SECURITY,
    HazardCategory.APPLICATION: HazardType.SECURITY,
    HazardCategory.INFRASTRUCTURE_AND_NETWORK: HazardType.SECURITY,
    HazardCategory.IDENTITY_AND_ACCESS_MANAGEMENT: HazardType.SECURITY,
    HazardCategory.ILLEGAL_AND_CBRNE: HazardType.SAFETY,
    HazardCategory.DISCRIMINATORY_OR_HATEFUL_CONTENT: HazardType.SAFETY,
    HazardCategory.INAPPROPRIATE_CONTENT: HazardType.SAFETY,
    HazardCategory.COMPROMISE_USER_SAFETY: HazardType.SAFETY,
    HazardCategory.MISREPRESENTATION: HazardType.SAFETY,
}


@dataclass(frozen=True)
class CatalogEntry:
    """One element of the catalog with its presentation metadata."""

    element: Element
    token: str
    name: str
    category: str
    description: str


# Catalog order is the documented, stable listing order: components, then
# design aspects, then capabilities grouped by category. Serialization and
# reporting sort element sets by this order.
_ELEMENT_CATALOG: tuple[CatalogEntry, ...] = (
    CatalogEntry(
        ComponentKind.LLM,
        "llm",
        "LLM",
        "Component",
        "Central reasoning engine that interprets inputs and generates the "
        "agent's responses and decisions.",
    ),
    CatalogEntry(
        ComponentKind.TOOLS,
        "tools",
        "Tools",
        "Component",
        "Integrations that let the agent act on the external environment: "
        "editing files, querying databases, controlling devices, calling APIs.",
    ),
    CatalogEntry(
        ComponentKind.INSTRUCTIONS,
        "instructions",
        "Instructions",
        "Component",
        "Blueprint defining the agent's role, behavioural constraints, and "
        "operating parameters.",
    ),
    CatalogEntry(
        ComponentKind.MEMORY,
        "memory",
        "Memory",
        "Component",
        "Context and knowledge persisted across interactions so the agent can "
        "recall facts and past work without re-instruction.",
    ),
    CatalogEntry(
        DesignKind.AGENTIC_ARCHITECTURE,
        "agentic_architecture",
        "Agentic Architecture",
        "Design",
        "How multiple agents are interconnected, coordinated, and "
        "orchestrated, including the protocols they communicate over.",
    ),
    CatalogEntry(
        DesignKind.ROLES_AND_ACCESS_CONTROLS,
        "roles_and_access_controls",
        "Roles & Access Controls",
        "Design",
        "Differentiated responsibilities and permissions that bound what each "
        "agent may do and contain the blast radius of failures.",
    ),
    CatalogEntry(
        DesignKind.MONITORING_AND_TRACEABILITY,
        "monitoring_and_traceability",
        "Monitoring & Traceability",
        "Design",
        "Visibility into system behaviour and decision paths for debugging, "
        "anomaly detection, and accountability.",
    ),
    CatalogEntry(
        CapabilityKind.PLANNING_AND_GOAL_MANAGEMENT,
        "planning_and_goal_management",
        "Planning & Goal Management",
        "Cognitive",
        "Developing step-by-step executable plans from broad instructions, "
        "prioritising tasks, and adjusting when circumstances change.",
    ),
    CatalogEntry(
        CapabilityKind.AGENT_DELEGATION,
        "agent_delegation",
        "Agent Delegation",
        "Cognitive",
        "Assigning subtasks to other agents and coordinating their activities "
        "toward a broader goal.",
    ),
    CatalogEntry(
        CapabilityKind.TOOL_USE,
        "tool_use",
        "Tool Use",
        "Cognitive",
        "Evaluating available options and choosing the best tool for a "
        "specific subtask.",
    ),
    CatalogEntry(
        CapabilityKind.NATURAL_LANGUAGE_COMMUNICATION,
        "natural_language_communication",
        "Natural Language Communication",
        "Interaction",
        "Conversing fluently and meaningfully with human users: explaining, "
        "drafting documents and prose, discussing issues.",
    ),
    CatalogEntry(
        CapabilityKind.MULTIMODAL_UNDERSTANDING_AND_GENERATION,
        "multimodal_understanding_and_generation",
        "Multimodal Understanding & Generation",
        "Interaction",
        "Consuming or producing image, audio, or video content: analysing "
        "visuals, transcribing speech, creating media.",
    ),
    CatalogEntry(
        CapabilityKind.OFFICIAL_COMMUNICATION,
        "official_communication",
        "Official Communication",
        "Interaction",
        "Composing and directly publishing communications that formally "
        "represent the organization to external parties.",
    ),
    CatalogEntry(
        CapabilityKind.BUSINESS_TRANSACTIONS,
        "business_transactions",
        "Business Transactions",
        "Interaction",
        "Executing transactions that exchange money, services, or "
        "commitments with external parties within authorized limits.",
    ),
    CatalogEntry(
        CapabilityKind.INTERNET_AND_SEARCH_ACCESS,
        "internet_and_search_access",
        "Internet & Search Access",
        "Interaction",
        "Accessing and searching the internet for knowledge resources and "
        "up-to-date information.",
    ),
    CatalogEntry(
        CapabilityKind.COMPUTER_USE,
        "computer_use",
        "Computer Use",
        "Interaction",
        "Directly controlling a computer interface: moving the mouse, "
        "clicking buttons, and typing on behalf of the user.",
    ),
    CatalogEntry(
        CapabilityKind.OTHER_PROGRAMMATIC_INTERFACES,
        "other_programmatic_interfaces",
        "Other Programmatic Interfaces",
        "Interaction",
        "Interacting with external systems through APIs, SDKs, or backend "
        "services: REST calls, pushing code, invoking cloud services.",
    ),
    CatalogEntry(
        CapabilityKind.CODE_EXECUTION,
        "code_execution",
        "Code Execution",
        "Operational",
        "Writing, executing, and debugging code to automate tasks or solve "
        "computational problems.",
    ),
    CatalogEntry(
        CapabilityKind.FILE_AND_DATA_MANAGEMENT,
        "file_and_data_management",
        "File & Data Management",
        "Operational",
        "Creating, reading, modifying, organising, and querying unstructured "
        "files and structured data stores.",
    ),
    CatalogEntry(
        CapabilityKind.SYSTEM_MANAGEMENT,
        "system_management",
        "System Management",
        "Operational",
        "Adjusting system configurations, managing computing resources, and "
        "handling infrastructure tasks including authentication material.",
    ),
)

ELEMENT_UNIVERSE: tuple[Element, ...] = tuple(e.element for e in _ELEMENT_CATALOG)

_ELEMENT_BY_TOKEN: dict[str, Element] = {e.token: e.element for e in _ELEMENT_CATALOG}
_ELEMENT_ORDER: dict[Element, int] = {e.element: i for i, e in enumerate(_ELEMENT_CATALOG)}
_ENTRY_BY_ELEMENT: dict[Element, CatalogEntry] = {e.element: e for e in _ELEMENT_CATALOG}


@dataclass(frozen=True)
class HazardEntry:
    category: HazardCategory
    hazard_type: HazardType
    name: str
    description: str


_HAZARD_CATALOG: tuple[HazardEntry, ...] = (
    HazardEntry(
        HazardCategory.DATA,
        HazardType.SECURITY,
        "Data (files, databases)",
        "Data breaches, integrity attacks, PII exposure, or ransomware where "
        "sensitive information is exfiltrated, corrupted, or held hostage.",
    ),
    HazardEntry(
        HazardCategory.APPLICATION,
        HazardType.SECURITY,
        "Application",
        "System failures, service disruptions, unintended use of "
        "applications, backdoor access, or resource exploitation.",
    ),
    HazardEntry(
        HazardCategory.INFRASTRUCTURE_AND_NETWORK,
        HazardType.SECURITY,
        "Infrastructure & network",
        "Denial of service, man-in-the-middle attacks, network eavesdropping, "
        "or lateral access across network and infrastructure.",
    ),
    HazardEntry(
        HazardCategory.IDENTITY_AND_ACCESS_MANAGEMENT,
        HazardType.SECURITY,
        "Identity & access management",
        "Unauthorized control, impersonation of credible roles, or privilege "
        "escalation granting elevated access over systems.",
    ),
    HazardEntry(
        HazardCategory.ILLEGAL_AND_CBRNE,
        HazardType.SAFETY,
        "Illegal and CBRNE activities",
        "Facilitating or engaging in CBRNE-related activity or other criminal "
        "offences such as fraud, scams, or smuggling.",
    ),
    HazardEntry(
        HazardCategory.DISCRIMINATORY_OR_HATEFUL_CONTENT,
        HazardType.SAFETY,
        "Discriminatory or hateful content",
        "Unsafe and discriminatory output, incendiary hate speech and slurs, "
        "or biased decisions.",
    ),
    HazardEntry(
        HazardCategory.INAPPROPRIATE_CONTENT,
        HazardType.SAFETY,
        "Inappropriate content",
        "Vulgar, violent, sexual, or self-harm-promoting content that causes "
        "reputational harm and erodes trust.",
    ),
    HazardEntry(
        HazardCategory.COMPROMISE_USER_SAFETY,
        HazardType.SAFETY,
        "Compromise user safety",
        "Failures that directly endanger users, through inaccurate "
        "information or actions leading to physical or psychological harm.",
    ),
    HazardEntry(
        HazardCategory.MISREPRESENTATION,
        HazardType.SAFETY,
        "Misrepresentation",
        "Propagation of wrong or inaccurate information, including cascading "
        "failures where errors are never corrected.",
    ),
)

_HAZARD_ORDER: dict[HazardCategory, int] = {
    e.category: i for i, e in enumerate(_HAZARD_CATALOG)
}

_FAILURE_MODE_NAMES = {
    FailureMode.AGENT_FAILURE: "Agent Failure",
    FailureMode.EXTERNAL_MANIPULATION: "External Manipulation",
    FailureMode.TOOL_OR_RESOURCE_MALFUNCTION: "Tool or Resource Malfunction",
}

_FAILURE_MODE_DESCRIPTIONS = {
    FailureMode.AGENT_FAILURE: (
        "The agent itself fails to operate as intended due to poor "
        "performance, misalignment, or unreliability."
    ),
    FailureMode.EXTERNAL_MANIPULATION: (
        "Malicious actors cause or trick the agent to deviate from its "
        "intended behaviour."
    ),
    FailureMode.TOOL_OR_RESOURCE_MALFUNCTION: (
        "Tools or resources used by the system fail, are compromised, or are "
        "inadequate."
    ),
}


def element_catalog() -> list[CatalogEntry]:
    """Return all 20 elements in the stable catalog order.

    Order: the 4 components, the 3 design aspects, then the 13 capabilities
    grouped cognitive / interaction / operational.
    """
    return list(_ELEMENT_CATALOG)


def hazard_catalog() -> list[HazardEntry]:
    """Return the 9 hazard categories, security block first."""
    return list(_HAZARD_CATALOG)


def failure_mode_catalog() -> list[tuple[FailureMode, str, str]]:
    """Return the 3 failure modes as (mode, display name, description)."""
    return [
        (mode, _FAILURE_MODE_NAMES[mode], _FAILURE_MODE_DESCRIPTIONS[mode])
        for mode in FailureMode
    ]


def element_from_token(token: str) -> Element:
    """Resolve a stable token to its element; KeyError if unknown."""
    return _ELEMENT_BY_TOKEN[token]


def element_entry(element: Element) -> CatalogEntry:
    return _ENTRY_BY_ELEMENT[element]


def element_order(element: Element) -> int:
    """Index of the element in catalog order; used for canonical sorting."""
    return _ELEMENT_ORDER[element]


def hazard_order(category: HazardCategory) -> int:
    return _HAZARD_ORDER[category]


def sort_elements(elements) -> list[Element]:
    return sorted(elements, key=element_order)


def sort_hazards(hazards) -> list[HazardCategory]:
    return sorted(hazards, key=hazard_order)


def sort_failure_modes(modes) -> list[FailureMode]:
    order = {m: i for i, m in enumerate(FailureMode)}
    return sorted(modes, key=order.__getitem__)


def catalog_to_doc() -> dict:
    """Full taxonomy in document form; shared by the CLI and the API."""
    return {
        "taxonomy_version": TAXONOMY_VERSION,
        "elements": [
            {
                "token": e.token,
                "name": e.name,
                "category": e.category,
                "description": e.description,
            }
            for e in element_catalog()
        ],
        "failure_modes": [
            {"token": mode.value, "name": name, "description": description}
            for mode, name, description in failure_mode_catalog()
        ],
        "hazards": [
            {
                "token": h.category.value,
                "type": h.hazard_type.value,
                "name": h.name,
                "description": h.description,
            }
            for h in hazard_catalog()
        ],
    }
