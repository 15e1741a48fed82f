/**
 * Wizard shell: step navigation (strictly gated, backward always allowed),
 * the conflict reload prompt, and the shared error banner. Rendering is a
 * pure function of the store; every derived number on screen originated in
 * an API response.
 */
import type { WizardContext } from "./context.js";
import { refreshAssessment } from "./context.js";
import { STEPS, type Step, canEnter } from "./store.js";
import { renderProfileStep } from "./steps/profile.js";
import { renderRatingsStep } from "./steps/ratings.js";
import { renderThresholdStep } from "./steps/threshold.js";
import { renderControlsStep } from "./steps/controls.js";
import { renderResidualStep } from "./steps/residual.js";
import { renderReviewStep } from "./steps/review.js";

const STEP_TITLES: Record<Step, string> = {
    profile: "Profile",
    ratings: "Ratings",
    threshold: "Threshold",
    controls: "Controls",
    residual: "Residual",
    review: "Review",
};

const RENDERERS: Record<Step, (container: HTMLElement, ctx: WizardContext) => unknown> = {
    profile: renderProfileStep,
    ratings: renderRatingsStep,
    threshold: renderThresholdStep,
    controls: renderControlsStep,
    residual: renderResidualStep,
    review: renderReviewStep,
};

export function renderWizard(root: HTMLElement, ctx: WizardContext): void {
    root.innerHTML = `
      <div class="wizard">
        <div id="conflict-banner" class="conflict" hidden>
          <p>Someone else changed this assessment: your view is stale. Reload
          to pick up their changes; nothing was overwritten.</p>
          <button id="reload" type="button">Reload assessment</button>
        </div>
        <div id="error-banner" class="error" hidden></div>
        <nav class="wizard-nav"></nav>
        <section class="wizard-content" tabindex="0"></section>
      </div>
    `;

    const nav = root.querySelector<HTMLElement>(".wizard-nav")!;
    const content = root.querySelector<HTMLElement>(".wizard-content")!;
    const conflictBanner = root.querySelector<HTMLElement>("#conflict-banner")!;
    const errorBanner = root.querySelector<HTMLElement>("#error-banner")!;
    let lastRendered: { step: Step; revision: number; conflict: boolean } | null = null;

    root.querySelector<HTMLButtonElement>("#reload")!.addEventListener("click", async () => {
        await refreshAssessment(ctx);
        const state = ctx.store.get();
        if (state.assessment && state.thresholdCommitted) {
            const controls = await ctx.api.controls(state.assessment.id);
            ctx.store.set({ controls: controls.controls });
        }
        ctx.store.set({ conflict: false });
    });

    function sync(): void {
        const state = ctx.store.get();
        conflictBanner.hidden = !state.conflict;
        errorBanner.hidden = state.error === null;
        errorBanner.textContent = state.error ?? "";

        nav.innerHTML = "";
        STEPS.forEach((step, index) => {
            const button = document.createElement("button");
            button.type = "button";
            button.dataset.step = step;
            button.textContent = `${index + 1}. ${STEP_TITLES[step]}`;
            button.disabled = !canEnter(state, step);
            if (step === state.step) button.classList.add("active");
            button.addEventListener("click", () => ctx.store.goTo(step));
            nav.appendChild(button);
        });

        // re-render the body only when something structural changed, so
        // in-step typing does not wipe the form
        const snapshot = {
            step: state.step,
            revision: state.revision,
            conflict: state.conflict,
        };
        if (
            lastRendered === null ||
            lastRendered.step !== snapshot.step ||
            lastRendered.conflict !== snapshot.conflict
        ) {
            content.innerHTML = "";
            RENDERERS[state.step](content, ctx);
        }
        lastRendered = snapshot;
    }

    sync();
    ctx.store.subscribe(sync);
}
