/**
 * Step 6: review the server's summary and finalize. Finalization is the
 * server's decision; when it refuses, the offending steps are highlighted
 * from the error items. After finalize the report exports come straight
 * from the report endpoint.
 */
import { ApiError } from "../api.js";
import type { WizardContext } from "../context.js";
import type { Step } from "../store.js";
import { refreshAssessment } from "../context.js";

const ITEM_STEP: Record<string, Step> = {
    incomplete_ratings: "ratings",
    missing_disposition: "controls",
    cardinal_waiver: "controls",
    missing_justification: "controls",
    unaccepted_note: "residual",
};

export function stepsToHighlight(itemCodes: string[]): Step[] {
    const steps = new Set<Step>();
    for (const code of itemCodes) {
        const step = ITEM_STEP[code];
        if (step) steps.add(step);
    }
    return [...steps];
}

function download(filename: string, text: string, mime: string): void {
    const link = document.createElement("a");
    link.href = URL.createObjectURL(new Blob([text], { type: mime }));
    link.download = filename;
    link.click();
    URL.revokeObjectURL(link.href);
}

export function renderReviewStep(container: HTMLElement, ctx: WizardContext): void {
    const state = ctx.store.get();
    const assessment = state.assessment!;
    const relevant = (state.relevance ?? []).filter((r) => r.relevant);
    const finalized = assessment.status === "finalized";

    container.innerHTML = `
      <h2>6. Review &amp; finalize</h2>
      <dl class="summary">
        <dt>System</dt><dd>${assessment.profile.system_name}</dd>
        <dt>Register</dt>
        <dd>${assessment.register_ref.name} ${assessment.register_ref.version}</dd>
        <dt>Threshold</dt>
        <dd>impact &ge; ${assessment.threshold.impact_min},
            likelihood &ge; ${assessment.threshold.likelihood_min}</dd>
        <dt>Applicable risks</dt><dd>${assessment.applicable_risk_ids.length}</dd>
        <dt>Relevant risks</dt><dd id="review-relevant-count">${relevant.length}</dd>
        <dt>Required controls</dt><dd id="review-control-count">${state.controls?.length ?? 0}</dd>
        <dt>Residual notes</dt><dd>${assessment.residual_notes.length}</dd>
        <dt>Status</dt><dd id="review-status">${assessment.status}</dd>
      </dl>
      <div id="finalize-errors" class="errors" hidden></div>
      <button id="finalize" type="button" ${finalized ? "hidden" : ""}>Finalize assessment</button>
      <div id="exports" ${finalized ? "" : "hidden"}>
        <button id="export-structured" type="button">Export report (structured)</button>
        <button id="export-text" type="button">Export report (printable)</button>
      </div>
    `;

    const errorBox = container.querySelector<HTMLElement>("#finalize-errors")!;

    container.querySelector<HTMLButtonElement>("#finalize")!.addEventListener("click", async () => {
        try {
            const result = await ctx.api.finalize(assessment.id, ctx.store.get().revision);
            ctx.store.set({ revision: result.revision, error: null });
            await refreshAssessment(ctx);
            renderReviewStep(container, ctx);
        } catch (err) {
            if (err instanceof ApiError && err.isConflict) {
                ctx.store.reportConflict();
                return;
            }
            if (err instanceof ApiError) {
                errorBox.hidden = false;
                errorBox.innerHTML = `
                  <p>The server refused to finalize:</p>
                  <ul>${err.items.map((i) => `<li>${i.code}: ${i.message}</li>`).join("")}</ul>`;
                const highlight = stepsToHighlight(err.items.map((i) => i.code));
                document.querySelectorAll(".wizard-nav button").forEach((button) => {
                    const step = (button as HTMLElement).dataset.step as Step | undefined;
                    button.classList.toggle("step-error", step !== undefined && highlight.includes(step));
                });
            } else {
                ctx.store.set({ error: String(err) });
            }
        }
    });

    container
        .querySelector<HTMLButtonElement>("#export-structured")!
        .addEventListener("click", async () => {
            const text = await ctx.api.report(assessment.id, "structured");
            ctx.store.set({ finalReport: text });
            download(`${assessment.id}-report.json`, text, "application/json");
        });
    container
        .querySelector<HTMLButtonElement>("#export-text")!
        .addEventListener("click", async () => {
            const text = await ctx.api.report(assessment.id, "text");
            ctx.store.set({ finalReport: text });
            download(`${assessment.id}-report.txt`, text, "text/plain");
        });
}
