/**
 * Step 2: impact/likelihood per applicable risk on labelled 1-5 scales plus
 * a rationale. Rows save individually; the threshold step unlocks once every
 * row is rated. An empty rationale warns but never blocks.
 */
import type { WizardContext } from "../context.js";
import { refreshAssessment, runMutation } from "../context.js";
import { allRated, ratedCount } from "../store.js";

export const IMPACT_LABELS = ["minimal", "minor", "moderate", "major", "catastrophic"];
export const LIKELIHOOD_LABELS = ["very rare", "rare", "possible", "likely", "very likely"];

function scaleSelect(cls: string, labels: string[], current: number | null): string {
    const options = labels
        .map((label, i) => {
            const value = i + 1;
            const selected = current === value ? " selected" : "";
            return `<option value="${value}"${selected}>${value} - ${label}</option>`;
        })
        .join("");
    const placeholder = current === null ? '<option value="" selected>choose</option>' : "";
    return `<select class="${cls}">${placeholder}${options}</select>`;
}

export function renderRatingsStep(container: HTMLElement, ctx: WizardContext): void {
    const state = ctx.store.get();
    const assessment = state.assessment!;
    const register = state.register!;
    const byId = new Map(register.risks.map((r) => [r.id, r]));
    const ratings = new Map(assessment.ratings.map((r) => [r.risk_id, r]));

    container.innerHTML = `
      <h2>2. Rate each applicable risk</h2>
      <p class="hint">Impact: 1 minimal to 5 catastrophic. Likelihood: 1 very
      rare to 5 very likely.</p>
      <p id="progress" class="progress"></p>
      <div id="rows"></div>
      <button id="to-threshold" type="button">Continue to threshold</button>
    `;

    const progress = container.querySelector<HTMLElement>("#progress")!;
    const continueButton = container.querySelector<HTMLButtonElement>("#to-threshold")!;

    function syncProgress(): void {
        const current = ctx.store.get().assessment!;
        progress.textContent =
            `${ratedCount(current)} of ${current.applicable_risk_ids.length} risks rated`;
        continueButton.disabled = !allRated(current);
    }

    const rows = container.querySelector<HTMLElement>("#rows")!;
    for (const riskId of assessment.applicable_risk_ids) {
        const risk = byId.get(riskId);
        const rating = ratings.get(riskId) ?? null;
        const row = document.createElement("div");
        row.className = "rating-row";
        row.dataset.riskId = riskId;
        row.innerHTML = `
          <h3>${riskId}: ${risk?.title ?? ""}</h3>
          <p class="risk-description">${risk?.description ?? ""}</p>
          <label>Impact ${scaleSelect("impact", IMPACT_LABELS, rating?.impact ?? null)}</label>
          <label>Likelihood ${scaleSelect("likelihood", LIKELIHOOD_LABELS, rating?.likelihood ?? null)}</label>
          <label>Rationale <input class="rationale" type="text"
              value="${rating?.rationale.replace(/"/g, "&quot;") ?? ""}" /></label>
          <button type="button" class="save-rating">${rating ? "Update" : "Save"}</button>
          <span class="row-status">${rating ? "saved" : ""}</span>
        `;
        const saveButton = row.querySelector<HTMLButtonElement>(".save-rating")!;
        saveButton.addEventListener("click", async () => {
            const impact = Number(row.querySelector<HTMLSelectElement>(".impact")!.value);
            const likelihood = Number(
                row.querySelector<HTMLSelectElement>(".likelihood")!.value,
            );
            const rationale = row.querySelector<HTMLInputElement>(".rationale")!.value;
            const status = row.querySelector<HTMLElement>(".row-status")!;
            if (!impact || !likelihood) {
                status.textContent = "choose both scores";
                return;
            }
            const ok = await runMutation(ctx, () =>
                ctx.api.rate(assessment.id, ctx.store.get().revision, {
                    risk_id: riskId,
                    impact,
                    likelihood,
                    rationale,
                }),
            );
            if (!ok) return;
            await refreshAssessment(ctx);
            status.textContent = rationale.trim() === "" ? "saved (no rationale given)" : "saved";
            syncProgress();
        });
        rows.appendChild(row);
    }

    continueButton.addEventListener("click", () => ctx.store.goTo("threshold"));
    syncProgress();
}
