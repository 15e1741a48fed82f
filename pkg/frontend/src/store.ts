/**
 * Wizard state: current step, the server-side assessment mirror, and the
 * tracked server revision. Steps unlock strictly in order, each gated on
 * server-validated inputs; backward navigation keeps state. A revision
 * conflict flips `conflict` and the shell shows a reload prompt instead of
 * ever overwriting someone else's write.
 */
import type {
    AssessmentDoc,
    Catalog,
    ControlRow,
    Entity,
    RegisterDoc,
    RelevanceRow,
    WhatIfDelta,
} from "./api.js";

export const STEPS = ["profile", "ratings", "threshold", "controls", "residual", "review"] as const;
export type Step = (typeof STEPS)[number];

export interface WizardState {
    step: Step;
    catalog: Catalog | null;
    registerId: string | null;
    register: RegisterDoc | null;
    assessment: AssessmentDoc | null;
    revision: number;
    /** last server responses backing the displayed derived values */
    relevance: RelevanceRow[] | null;
    controls: ControlRow[] | null;
    whatIf: WhatIfDelta | null;
    thresholdCommitted: boolean;
    dirty: Record<Step, boolean>;
    conflict: boolean;
    error: string | null;
    finalReport: string | null;
}

export function initialState(): WizardState {
    return {
        step: "profile",
        catalog: null,
        registerId: null,
        register: null,
        assessment: null,
        revision: 0,
        relevance: null,
        controls: null,
        whatIf: null,
        thresholdCommitted: false,
        dirty: {
            profile: false,
            ratings: false,
            threshold: false,
            controls: false,
            residual: false,
            review: false,
        },
        conflict: false,
        error: null,
        finalReport: null,
    };
}

export function ratedCount(assessment: AssessmentDoc): number {
    const rated = new Set(assessment.ratings.map((r) => r.risk_id));
    return assessment.applicable_risk_ids.filter((rid) => rated.has(rid)).length;
}

export function allRated(assessment: AssessmentDoc): boolean {
    return ratedCount(assessment) === assessment.applicable_risk_ids.length;
}

export function pendingControls(controls: ControlRow[]): ControlRow[] {
    return controls.filter((c) => c.disposition === null);
}

export function unresolvedNotes(assessment: AssessmentDoc): number[] {
    const followedUp = new Set(
        assessment.residual_notes
            .map((n) => n.follow_up_of)
            .filter((i): i is number => i !== null),
    );
    return assessment.residual_notes
        .map((note, index) => ({ note, index }))
        .filter(({ note, index }) => !note.accepted && !followedUp.has(index))
        .map(({ index }) => index);
}

/** Which steps are reachable given the current state. */
export function canEnter(state: WizardState, step: Step): boolean {
    const a = state.assessment;
    switch (step) {
        case "profile":
            return true;
        case "ratings":
            return a !== null;
        case "threshold":
            return a !== null && allRated(a);
        case "controls":
            return a !== null && allRated(a) && state.thresholdCommitted;
        case "residual":
            return (
                a !== null &&
                allRated(a) &&
                state.thresholdCommitted &&
                state.controls !== null &&
                pendingControls(state.controls).length === 0
            );
        case "review":
            // open residual notes do not lock the step: finalize is the
            // server's decision and its refusal is surfaced there
            return canEnter(state, "residual");
    }
}

export function furthestStep(state: WizardState): Step {
    let last: Step = "profile";
    for (const step of STEPS) {
        if (canEnter(state, step)) last = step;
        else break;
    }
    return last;
}

type Listener = (state: WizardState) => void;

export class WizardStore {
    private state: WizardState = initialState();
    private listeners: Listener[] = [];

    get(): WizardState {
        return this.state;
    }

    set(patch: Partial<WizardState>): void {
        this.state = { ...this.state, ...patch };
        for (const listener of this.listeners) listener(this.state);
    }

    subscribe(listener: Listener): () => void {
        this.listeners.push(listener);
        return () => {
            this.listeners = this.listeners.filter((l) => l !== listener);
        };
    }

    /** Adopt a freshly fetched server entity as the local mirror. */
    adoptAssessment(entity: Entity<AssessmentDoc>): void {
        this.set({
            assessment: entity.payload,
            revision: entity.revision,
            conflict: false,
        });
    }

    markDirty(step: Step, dirty = true): void {
        this.set({ dirty: { ...this.state.dirty, [step]: dirty } });
    }

    goTo(step: Step): boolean {
        if (!canEnter(this.state, step)) return false;
        this.set({ step, error: null });
        return true;
    }

    reportConflict(): void {
        this.set({ conflict: true });
    }
}
