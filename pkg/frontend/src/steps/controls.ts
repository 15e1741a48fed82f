/**
 * Step 4: disposition every resolved control. Level-0 (cardinal) controls
 * are locked to "adopted": the selector is disabled and the server would
 * reject a waiver anyway. Waiving a level-1/2 control requires a
 * justification.
 */
import type { WizardContext } from "../context.js";
import { refreshAssessment, runMutation } from "../context.js";
import { pendingControls } from "../store.js";

const LEVEL_NAMES = ["0 (cardinal)", "1 (standard)", "2 (best practice)"];

export function renderControlsStep(container: HTMLElement, ctx: WizardContext): void {
    const state = ctx.store.get();
    const assessment = state.assessment!;
    const controls = state.controls ?? [];

    container.innerHTML = `
      <h2>4. Required controls (${controls.length})</h2>
      <p class="hint">Controls attached to relevant risks. Cardinal controls
      are adopted as is; standard and best-practice controls need an explicit
      decision, and waiving one requires a justification.</p>
      <div id="control-rows"></div>
      <p id="controls-progress" class="progress"></p>
      <button id="to-residual" type="button">Continue to residual risk</button>
    `;

    const rows = container.querySelector<HTMLElement>("#control-rows")!;
    const progress = container.querySelector<HTMLElement>("#controls-progress")!;
    const continueButton = container.querySelector<HTMLButtonElement>("#to-residual")!;

    function syncProgress(): void {
        const pending = pendingControls(ctx.store.get().controls ?? []);
        progress.textContent = pending.length
            ? `${pending.length} control(s) still need a decision`
            : "all controls dispositioned";
        continueButton.disabled = pending.length > 0;
    }

    for (const control of controls) {
        const row = document.createElement("div");
        row.className = "control-row";
        row.dataset.controlId = control.control_id;
        const cardinal = control.level === 0;
        const selected = control.disposition ?? (cardinal ? "adopted" : "");
        const options = ["adopted", "adapted", "not_applicable"]
            .map(
                (d) =>
                    `<option value="${d}"${selected === d ? " selected" : ""}>${d.replace("_", " ")}</option>`,
            )
            .join("");
        row.innerHTML = `
          <h3>${control.control_id} <span class="level">level ${LEVEL_NAMES[control.level]}</span></h3>
          <p>${control.title}</p>
          <p class="triggering">required by: ${control.triggering_risk_ids.join(", ")}</p>
          <label>Disposition
            <select class="disposition" ${cardinal ? "disabled" : ""}>
              ${cardinal ? "" : '<option value="">choose</option>'}${options}
            </select>
          </label>
          <label class="justification-label" hidden>Justification
            <input class="justification" type="text"
              value="${control.justification.replace(/"/g, "&quot;")}" />
          </label>
          <button type="button" class="save-disposition" ${cardinal ? "hidden" : ""}>Save</button>
          <span class="row-status">${cardinal ? "cardinal control: adopted as is" : control.disposition ? "saved" : ""}</span>
        `;
        const select = row.querySelector<HTMLSelectElement>(".disposition")!;
        const justificationLabel = row.querySelector<HTMLElement>(".justification-label")!;
        const justificationInput = row.querySelector<HTMLInputElement>(".justification")!;
        const status = row.querySelector<HTMLElement>(".row-status")!;
        justificationLabel.hidden = select.value !== "not_applicable";

        select.addEventListener("change", () => {
            justificationLabel.hidden = select.value !== "not_applicable";
        });

        row.querySelector<HTMLButtonElement>(".save-disposition")!.addEventListener(
            "click",
            async () => {
                if (!select.value) {
                    status.textContent = "choose a disposition";
                    return;
                }
                if (select.value === "not_applicable" && !justificationInput.value.trim()) {
                    status.textContent = "waiving requires a justification";
                    return;
                }
                const ok = await runMutation(ctx, () =>
                    ctx.api.dispose(
                        assessment.id,
                        ctx.store.get().revision,
                        control.control_id,
                        select.value,
                        justificationInput.value,
                    ),
                );
                if (!ok) return;
                await refreshAssessment(ctx);
                const refreshed = await ctx.api.controls(assessment.id);
                ctx.store.set({ controls: refreshed.controls });
                status.textContent = "saved";
                syncProgress();
            },
        );
        rows.appendChild(row);
    }

    continueButton.addEventListener("click", () => ctx.store.goTo("residual"));
    syncProgress();
}
