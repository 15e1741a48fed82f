/**
 * Step 3: pick the relevance threshold with two 1-5 sliders and a live
 * what-if panel. Every slider move asks the server what would change;
 * responses are debounced and stale ones are dropped, so the panel always
 * reflects the last completed response. Apply commits the threshold.
 */
import type { WhatIfDelta } from "../api.js";
import type { WizardContext } from "../context.js";
import { refreshAssessment, runMutation } from "../context.js";
import { debouncedLookup, type DebouncedLookup } from "../debounce.js";

export const WHATIF_DEBOUNCE_MS = 200;

type Candidate = { impact_min: number; likelihood_min: number };

export interface ThresholdStepHandle {
    lookup: DebouncedLookup<Candidate, WhatIfDelta>;
}

function clamp(value: number): number {
    return Math.min(5, Math.max(1, value));
}

function deltaList(ids: string[]): string {
    return ids.length ? ids.join(", ") : "none";
}

export function renderThresholdStep(
    container: HTMLElement,
    ctx: WizardContext,
): ThresholdStepHandle {
    const state = ctx.store.get();
    const assessment = state.assessment!;
    const current = assessment.threshold;

    container.innerHTML = `
      <h2>3. Relevance threshold</h2>
      <p class="hint">A risk is relevant when impact and likelihood both meet
      their minimum. Lower thresholds manage more risks directly.</p>
      <label>Minimum impact
        <input id="impact-min" type="range" min="1" max="5" step="1" value="${current.impact_min}" />
        <span id="impact-min-value">${current.impact_min}</span>
      </label>
      <label>Minimum likelihood
        <input id="likelihood-min" type="range" min="1" max="5" step="1" value="${current.likelihood_min}" />
        <span id="likelihood-min-value">${current.likelihood_min}</span>
      </label>
      <div id="whatif-panel" class="whatif">
        <p>relevant now: <span id="relevant-count">-</span> of
           ${assessment.applicable_risk_ids.length} applicable</p>
        <p>would become relevant: <span id="becoming">none</span></p>
        <p>would stop being relevant: <span id="leaving">none</span></p>
        <p>controls added: <span id="controls-added">none</span></p>
        <p>controls removed: <span id="controls-removed">none</span></p>
      </div>
      <button id="apply-threshold" type="button">Apply threshold and resolve controls</button>
    `;

    const impactSlider = container.querySelector<HTMLInputElement>("#impact-min")!;
    const likelihoodSlider = container.querySelector<HTMLInputElement>("#likelihood-min")!;
    const relevantCount = container.querySelector<HTMLElement>("#relevant-count")!;

    void ctx.api.evaluate(assessment.id).then((result) => {
        ctx.store.set({ relevance: result.relevance });
        relevantCount.textContent = String(result.relevance.filter((r) => r.relevant).length);
    });

    const lookup = debouncedLookup<Candidate, WhatIfDelta>(
        (candidate) => ctx.api.whatIf(assessment.id, candidate),
        (_candidate, delta) => {
            ctx.store.set({ whatIf: delta });
            container.querySelector("#becoming")!.textContent = deltaList(delta.became_relevant);
            container.querySelector("#leaving")!.textContent = deltaList(delta.became_irrelevant);
            container.querySelector("#controls-added")!.textContent = deltaList(
                delta.control_delta.added,
            );
            container.querySelector("#controls-removed")!.textContent = deltaList(
                delta.control_delta.removed,
            );
        },
        WHATIF_DEBOUNCE_MS,
        (err) => ctx.store.set({ error: String(err) }),
    );

    function onSlide(): void {
        const impact = clamp(Number(impactSlider.value));
        const likelihood = clamp(Number(likelihoodSlider.value));
        impactSlider.value = String(impact);
        likelihoodSlider.value = String(likelihood);
        container.querySelector("#impact-min-value")!.textContent = String(impact);
        container.querySelector("#likelihood-min-value")!.textContent = String(likelihood);
        lookup.trigger({ impact_min: impact, likelihood_min: likelihood });
    }

    impactSlider.addEventListener("input", onSlide);
    likelihoodSlider.addEventListener("input", onSlide);

    container
        .querySelector<HTMLButtonElement>("#apply-threshold")!
        .addEventListener("click", async () => {
            lookup.cancel();
            const threshold = {
                impact_min: clamp(Number(impactSlider.value)),
                likelihood_min: clamp(Number(likelihoodSlider.value)),
            };
            const ok = await runMutation(ctx, () =>
                ctx.api.setThreshold(assessment.id, ctx.store.get().revision, threshold),
            );
            if (!ok) return;
            await refreshAssessment(ctx);
            const [relevance, controls] = await Promise.all([
                ctx.api.evaluate(assessment.id),
                ctx.api.controls(assessment.id),
            ]);
            ctx.store.set({
                relevance: relevance.relevance,
                controls: controls.controls,
                thresholdCommitted: true,
            });
            ctx.store.goTo("controls");
        });

    return { lookup };
}
