import { Api, ApiError } from "./api.js";
import { WizardStore } from "./store.js";

export interface WizardContext {
    api: Api;
    store: WizardStore;
    registerId: string;
}

/**
 * Run a server mutation; on a revision conflict flip the store into the
 * reload prompt instead of retrying, on anything else surface the message.
 * Never swallows a response silently.
 */
export async function runMutation(
    ctx: WizardContext,
    action: () => Promise<{ revision: number }>,
): Promise<boolean> {
    try {
        const result = await action();
        ctx.store.set({ revision: result.revision, error: null });
        return true;
    } catch (err) {
        if (err instanceof ApiError && err.isConflict) {
            ctx.store.reportConflict();
        } else if (err instanceof ApiError) {
            ctx.store.set({ error: `${err.code}: ${err.message}` });
        } else {
            ctx.store.set({ error: String(err) });
        }
        return false;
    }
}

/** Refetch the assessment mirror (and revision) from the server. */
export async function refreshAssessment(ctx: WizardContext): Promise<void> {
    const state = ctx.store.get();
    if (!state.assessment) return;
    const entity = await ctx.api.getAssessment(state.assessment.id);
    ctx.store.adoptAssessment(entity);
}
