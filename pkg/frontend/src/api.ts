/**
 * Typed client for the assessment service. Every derived value the wizard
 * displays comes from these calls; the client never computes applicability,
 * relevance, or control sets itself.
 */

export interface CatalogElement {
    token: string;
    name: string;
    category: string;
    description: string;
}

export interface Catalog {
    taxonomy_version: string;
    elements: CatalogElement[];
    failure_modes: { token: string; name: string; description: string }[];
    hazards: { token: string; type: string; name: string; description: string }[];
}

export interface ProfileDoc {
    system_name: string;
    description: string;
    capabilities: string[];
    context: {
        domain: string;
        use_case: string;
        data_sensitivity: string;
        system_criticality: string;
    };
}

export interface RiskDoc {
    id: string;
    title: string;
    description: string;
    elements: string[];
    failure_modes: string[];
    hazards: string[];
    references: string[];
}

export interface RegisterDoc {
    name: string;
    version: string;
    taxonomy_version: string;
    risks: RiskDoc[];
    controls: { id: string; title: string; description: string; level: number; risk_ids: string[] }[];
}

export interface RatingRow {
    risk_id: string;
    impact: number;
    likelihood: number;
    rationale: string;
}

export interface Threshold {
    impact_min: number;
    likelihood_min: number;
}

export interface AssessmentDoc {
    id: string;
    taxonomy_version: string;
    register_ref: { name: string; version: string };
    profile: ProfileDoc;
    threshold: Threshold;
    applicable_risk_ids: string[];
    ratings: RatingRow[];
    dispositions: { control_id: string; disposition: string; justification: string }[];
    residual_notes: { text: string; accepted: boolean; approver: string; follow_up_of: number | null }[];
    status: "draft" | "ratings_complete" | "finalized";
    revision: number;
}

export interface Entity<T> {
    kind: string;
    id: string;
    revision: number;
    created_at: string;
    updated_at: string;
    payload: T;
}

export interface RelevanceRow {
    risk_id: string;
    relevant: boolean;
}

export interface ControlRow {
    control_id: string;
    title: string;
    level: number;
    triggering_risk_ids: string[];
    disposition: string | null;
    justification: string;
}

export interface WhatIfDelta {
    became_relevant: string[];
    became_irrelevant: string[];
    control_delta: { added: string[]; removed: string[] };
}

export interface ErrorItem {
    severity: string;
    code: string;
    location: string;
    message: string;
}

export class ApiError extends Error {
    constructor(
        readonly status: number,
        readonly code: string,
        message: string,
        readonly items: ErrorItem[] = [],
    ) {
        super(message);
    }

    get isConflict(): boolean {
        return this.code === "conflict";
    }
}

type FetchLike = typeof fetch;

export class Api {
    private fetchImpl: FetchLike;

    constructor(readonly baseUrl: string, fetchImpl?: FetchLike) {
        this.fetchImpl = fetchImpl ?? fetch.bind(globalThis);
    }

    private async request<T>(
        method: string,
        path: string,
        options: { body?: unknown; revision?: number; raw?: boolean } = {},
    ): Promise<T> {
        const headers: Record<string, string> = {};
        if (options.body !== undefined) headers["Content-Type"] = "application/json";
        if (options.revision !== undefined) headers["X-Expected-Revision"] = String(options.revision);
        const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
            method,
            headers,
            body: options.body !== undefined ? JSON.stringify(options.body) : undefined,
        });
        if (!response.ok) {
            let code = "http";
            let message = `${response.status} ${response.statusText}`;
            let items: ErrorItem[] = [];
            try {
                const body = await response.json();
                code = body.error.code;
                message = body.error.message;
                items = body.error.items ?? [];
            } catch {
                /* non-JSON error body; keep the HTTP status text */
            }
            throw new ApiError(response.status, code, message, items);
        }
        if (options.raw) {
            return (await response.text()) as unknown as T;
        }
        if (response.status === 204) return undefined as unknown as T;
        return (await response.json()) as T;
    }

    catalog(): Promise<Catalog> {
        return this.request("GET", "/api/catalog");
    }

    listRegisters(): Promise<{ items: { id: string; revision: number; updated_at: string }[] }> {
        return this.request("GET", "/api/registers");
    }

    getRegister(id: string): Promise<Entity<RegisterDoc>> {
        return this.request("GET", `/api/registers/${id}`);
    }

    derive(registerId: string, profile: ProfileDoc): Promise<{ risk_ids: string[] }> {
        return this.request("POST", "/api/derive", {
            body: { register_id: registerId, profile },
        });
    }

    createAssessment(
        registerId: string,
        profile: ProfileDoc,
        threshold: Threshold,
        id?: string,
    ): Promise<Entity<AssessmentDoc>> {
        return this.request("POST", "/api/assessments", {
            body: { register_id: registerId, profile, threshold, ...(id ? { id } : {}) },
        });
    }

    getAssessment(id: string): Promise<Entity<AssessmentDoc>> {
        return this.request("GET", `/api/assessments/${id}`);
    }

    rate(id: string, revision: number, rating: RatingRow): Promise<{ id: string; revision: number }> {
        return this.request("POST", `/api/assessments/${id}/rate`, { body: rating, revision });
    }

    setThreshold(
        id: string,
        revision: number,
        threshold: Threshold,
    ): Promise<{ id: string; revision: number }> {
        return this.request("POST", `/api/assessments/${id}/threshold`, {
            body: threshold,
            revision,
        });
    }

    evaluate(id: string): Promise<{ relevance: RelevanceRow[] }> {
        return this.request("POST", `/api/assessments/${id}/evaluate`);
    }

    whatIf(id: string, candidate: Threshold): Promise<WhatIfDelta> {
        return this.request("POST", `/api/assessments/${id}/whatif`, { body: candidate });
    }

    controls(id: string): Promise<{ controls: ControlRow[] }> {
        return this.request("GET", `/api/assessments/${id}/controls`);
    }

    dispose(
        id: string,
        revision: number,
        controlId: string,
        disposition: string,
        justification = "",
    ): Promise<{ id: string; revision: number }> {
        return this.request("POST", `/api/assessments/${id}/dispose`, {
            body: { control_id: controlId, disposition, justification },
            revision,
        });
    }

    addNote(
        id: string,
        revision: number,
        text: string,
        accepted: boolean,
        approver = "",
        followUpOf: number | null = null,
    ): Promise<{ id: string; revision: number }> {
        return this.request("POST", `/api/assessments/${id}/notes`, {
            body: { text, accepted, approver, follow_up_of: followUpOf },
            revision,
        });
    }

    acceptNote(
        id: string,
        revision: number,
        index: number,
        approver: string,
    ): Promise<{ id: string; revision: number }> {
        return this.request("POST", `/api/assessments/${id}/notes/${index}/accept`, {
            body: { approver },
            revision,
        });
    }

    finalize(id: string, revision: number): Promise<{ id: string; revision: number }> {
        return this.request("POST", `/api/assessments/${id}/finalize`, { revision });
    }

    report(id: string, format: "structured" | "text"): Promise<string> {
        return this.request("GET", `/api/assessments/${id}/report?format=${format}`, { raw: true });
    }
}
